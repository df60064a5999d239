"""CSV serialization for pulses, trajectories, and scans, plus run configs.

All files are UTF-8 with '\n' line endings and dot decimal separators.
Metadata travels on '#'-prefixed lines as '# key = value'.  Pulse files come
in two layouts: the full design layout

    t,omega,delta,theta,beta,adiabaticity

and a minimal 3-column 't,omega,delta' layout accepted on input so external
pulses can enter the scan pipeline.
"""

import json
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.integrate import simpson

from . import __version__
from .designer import AngleTrajectory, DesignParams, Pulse, analytic_diagnostics
from .errors import ConfigError, GridError, ParameterError, PulseFormatError
from .profiles import TimeGrid
from .robustness import ErrorGrid, ScanResult

__all__ = [
    "RunConfig",
    "parse_config",
    "serialize_config",
    "write_pulse_csv",
    "read_pulse_csv",
    "write_scan_csv",
    "write_trajectory_csv",
]

PULSE_COLUMNS = ["t", "omega", "delta", "theta", "beta", "adiabaticity"]
PULSE_COLUMNS_MINIMAL = ["t", "omega", "delta"]
TRAJECTORY_COLUMNS = ["t", "pop1", "pop2", "u", "v", "w", "p_minus", "p_plus"]


@dataclass
class RunConfig:
    """Everything a full report run needs."""

    design: DesignParams
    rabi_grid: ErrorGrid
    detuning_grid: ErrorGrid
    output_dir: str = "qiepulse_out"
    emit_plots: bool = False
    csv_precision: int = 12

    def __post_init__(self):
        if self.csv_precision < 1:
            raise ConfigError(
                f"csv_precision must be >= 1, got {self.csv_precision}"
            )


_DESIGN_KEYS = {
    "c", "T", "kappa", "n_samples", "branch_sign", "beta_rate_init",
    "consistency_sign", "ode_rel_tol", "ode_abs_tol",
}
_GRID_KEYS = {"lo", "hi", "n_points"}
_TOP_KEYS = {
    "design", "rabi_grid", "detuning_grid", "output_dir", "emit_plots",
    "csv_precision",
}

_DEFAULT_GRID = {"lo": -0.5, "hi": 0.5, "n_points": 101}


def _check_keys(given, allowed, where):
    unknown = sorted(set(given) - allowed)
    if unknown:
        raise ConfigError(f"unknown {where} keys: {', '.join(unknown)}")


def parse_config(text: str) -> RunConfig:
    """Parse a JSON run configuration, filling documented defaults.

    Unknown keys are rejected by name; out-of-range values surface as
    ConfigError naming the field and its bound.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    _check_keys(raw, _TOP_KEYS, "config")

    design_raw = raw.get("design", {})
    if not isinstance(design_raw, dict):
        raise ConfigError("'design' must be an object")
    _check_keys(design_raw, _DESIGN_KEYS, "design")
    if "c" not in design_raw:
        raise ConfigError("design.c is required")
    try:
        design = DesignParams(**design_raw)
    except ParameterError as exc:
        raise ConfigError(f"design: {exc}") from exc

    grids = {}
    for name in ("rabi_grid", "detuning_grid"):
        grid_raw = raw.get(name, dict(_DEFAULT_GRID))
        if not isinstance(grid_raw, dict):
            raise ConfigError(f"'{name}' must be an object")
        _check_keys(grid_raw, _GRID_KEYS, name)
        merged = dict(_DEFAULT_GRID)
        merged.update(grid_raw)
        try:
            grids[name] = ErrorGrid(
                parameter="rabi" if name == "rabi_grid" else "detuning",
                **merged,
            )
        except ParameterError as exc:
            raise ConfigError(f"{name}: {exc}") from exc

    try:
        return RunConfig(
            design=design,
            rabi_grid=grids["rabi_grid"],
            detuning_grid=grids["detuning_grid"],
            output_dir=raw.get("output_dir", "qiepulse_out"),
            emit_plots=bool(raw.get("emit_plots", False)),
            csv_precision=int(raw.get("csv_precision", 12)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def serialize_config(config: RunConfig) -> str:
    """JSON form that parse_config reads back to an equal config."""
    payload = {
        "design": asdict(config.design),
        "rabi_grid": {
            "lo": config.rabi_grid.lo,
            "hi": config.rabi_grid.hi,
            "n_points": config.rabi_grid.n_points,
        },
        "detuning_grid": {
            "lo": config.detuning_grid.lo,
            "hi": config.detuning_grid.hi,
            "n_points": config.detuning_grid.n_points,
        },
        "output_dir": config.output_dir,
        "emit_plots": config.emit_plots,
        "csv_precision": config.csv_precision,
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}e}"


def write_pulse_csv(pulse: Pulse, trajectory: Optional[AngleTrajectory],
                    path, precision: int = 12) -> None:
    """Write a pulse (and, when available, its angle trajectory) to CSV.

    With a trajectory the full 6-column layout is written, including the
    analytically evaluated adiabaticity parameter; without one (baseline or
    external pulses) the minimal 't,omega,delta' layout is used.
    """
    t = pulse.grid.samples()
    lines = []
    meta = {
        "version": __version__,
        "area": repr(pulse.area),
        "beta_final": repr(pulse.beta_final),
        "adiabaticity_residual": repr(pulse.adiabaticity_residual),
    }
    if pulse.params is not None:
        p = pulse.params
        meta.update(
            c=repr(p.c), T=repr(p.T), kappa=repr(p.kappa),
            n_samples=p.n_samples, branch_sign=p.branch_sign,
            beta_rate_init=p.beta_rate_init,
            consistency_sign=p.consistency_sign,
        )
    for key, value in meta.items():
        lines.append(f"# {key} = {value}")

    if trajectory is not None:
        if pulse.params is None:
            raise ParameterError(
                "writing the 6-column layout needs design params for the "
                "adiabaticity column"
            )
        _, _, _, _, mu = analytic_diagnostics(
            trajectory.theta, trajectory.beta, trajectory.beta_dot,
            pulse.params.c, pulse.params.branch_sign,
        )
        mu = np.broadcast_to(mu, t.shape)
        lines.append(",".join(PULSE_COLUMNS))
        for k in range(t.size):
            lines.append(",".join([
                _fmt(t[k], precision),
                _fmt(pulse.omega[k], precision),
                _fmt(pulse.delta[k], precision),
                _fmt(trajectory.theta.theta[k], precision),
                _fmt(trajectory.beta[k], precision),
                _fmt(mu[k], precision),
            ]))
    else:
        lines.append(",".join(PULSE_COLUMNS_MINIMAL))
        for k in range(t.size):
            lines.append(",".join([
                _fmt(t[k], precision),
                _fmt(pulse.omega[k], precision),
                _fmt(pulse.delta[k], precision),
            ]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_metadata_line(line: str, meta: dict) -> None:
    body = line[1:].strip()
    if "=" in body:
        key, _, value = body.partition("=")
        meta[key.strip()] = value.strip()


def read_pulse_csv(path) -> Pulse:
    """Read a pulse CSV (either layout).

    Design metadata absent from the file stays absent: beta_final defaults
    to NaN and the area is recomputed from the samples when not recorded.
    """
    meta = {}
    header = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                _parse_metadata_line(line, meta)
                continue
            if header is None:
                header = [c.strip() for c in line.split(",")]
                continue
            parts = line.split(",")
            if len(parts) != len(header):
                raise PulseFormatError(
                    f"line {lineno}: expected {len(header)} fields, "
                    f"got {len(parts)}",
                    line_number=lineno,
                )
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise PulseFormatError(
                    f"line {lineno}: {exc}", line_number=lineno
                ) from exc
    if header is None or not rows:
        raise PulseFormatError("no data rows found")
    for required in PULSE_COLUMNS_MINIMAL:
        if required not in header:
            raise PulseFormatError(f"missing required column {required!r}")

    data = np.asarray(rows, dtype=float)
    col = {name: data[:, i] for i, name in enumerate(header)}
    t = col["t"]
    if t.size < 3:
        raise GridError("pulse needs at least 3 samples")
    steps = np.diff(t)
    span = t[-1] - t[0]
    if span <= 0 or np.any(np.abs(steps - steps[0]) > 1e-12 * max(abs(span), 1.0)):
        raise GridError("time column is not a uniform increasing grid")

    grid = TimeGrid(float(t[0]), float(t[-1]), t.size)
    omega, delta = col["omega"], col["delta"]
    area = float(meta["area"]) if "area" in meta else float(
        simpson(np.abs(omega), x=t)
    )
    beta_final = float(meta["beta_final"]) if "beta_final" in meta else float("nan")
    residual = (
        float(meta["adiabaticity_residual"])
        if "adiabaticity_residual" in meta
        else float("nan")
    )
    return Pulse(
        grid=grid,
        omega=omega,
        delta=delta,
        area=area,
        beta_final=beta_final,
        adiabaticity_residual=residual,
        params=None,
    )


def write_scan_csv(result: ScanResult, path, precision: int = 12) -> None:
    """Serialize one scan: '#' metadata plus 'delta,fidelity' rows."""
    deltas = result.grid.values()
    lines = [
        f"# protocol = {result.protocol_label}",
        f"# parameter = {result.grid.parameter}",
        f"# area = {result.area!r}",
        f"# min_fidelity_in_band = {result.min_fidelity_in_band!r}",
        "delta,fidelity",
    ]
    for d, f in zip(deltas, result.fidelities):
        lines.append(f"{_fmt(d, precision)},{_fmt(f, precision)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_trajectory_csv(trajectory, path, precision: int = 12) -> None:
    """Serialize a propagation record (populations, Bloch, branch pops)."""
    t = trajectory.grid.samples()
    lines = [",".join(TRAJECTORY_COLUMNS)]
    for k in range(t.size):
        lines.append(",".join([
            _fmt(t[k], precision),
            _fmt(trajectory.pop1[k], precision),
            _fmt(trajectory.pop2[k], precision),
            _fmt(trajectory.bloch_u[k], precision),
            _fmt(trajectory.bloch_v[k], precision),
            _fmt(trajectory.bloch_w[k], precision),
            _fmt(trajectory.adiab_pop_minus[k], precision),
            _fmt(trajectory.adiab_pop_plus[k], precision),
        ]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
