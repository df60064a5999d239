"""Command line surface: design -> simulate -> scan -> report.

Exit codes: 0 success, 2 argument/config error, 3 numerical failure,
4 I/O or file-format error.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .designer import DesignParams, design_pulse
from .dynamics import TargetState, propagate
from .errors import (
    ConfigError,
    DegeneracyError,
    DesignError,
    GridError,
    ParameterError,
    PulseFormatError,
    ScanError,
    SingularityError,
    StiffnessError,
    ToleranceError,
)
from .plots import svg_line_plot
from .pulse_io import (
    parse_config,
    read_pulse_csv,
    write_pulse_csv,
    write_scan_csv,
    write_trajectory_csv,
)
from .robustness import (
    ErrorGrid,
    format_summary,
    pi_half_baseline,
    robustness_summary,
    scan_1d,
)

__all__ = ["main"]

# Reference endpoint values for the four standard adiabaticity settings
# (area and |final azimuth| in units of pi) used by `report` comparisons.
REFERENCE_TABLE = {
    0.073: (1.970, 0.051),
    0.060: (2.470, 0.034),
    0.050: (3.076, 0.033),
    0.040: (3.839, 0.023),
}
AREA_RTOL = 0.02
BETA_ATOL_PI = 0.01

_ARGUMENT_ERRORS = (ConfigError, ParameterError, GridError)
_NUMERICAL_ERRORS = (
    DesignError, ToleranceError, ScanError, SingularityError,
    StiffnessError, DegeneracyError,
)
_IO_ERRORS = (PulseFormatError, OSError)


def exit_code_for(exc: BaseException) -> int:
    """Map an exception onto the documented exit codes."""
    if isinstance(exc, _ARGUMENT_ERRORS):
        return 2
    if isinstance(exc, _NUMERICAL_ERRORS):
        return 3
    if isinstance(exc, _IO_ERRORS):
        return 4
    raise exc


def _parse_range(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must be lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"range must be lo:hi:n, got {text!r}") from exc
    return lo, hi, n


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qiepulse",
        description="Constant-adiabaticity pulse design and verification.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="synthesize a pulse for one c value")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=4.0)
    p.add_argument("--n", type=int, default=4001)
    p.add_argument("--branch", type=int, choices=(-1, 1), default=-1)
    p.add_argument("--beta-init", choices=("zero", "consistency"),
                   default="consistency")
    p.add_argument("--consistency-sign", type=int, choices=(-1, 1), default=-1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("simulate", help="propagate a pulse file")
    p.add_argument("--pulse", required=True)
    p.add_argument("--delta-omega", type=float, default=0.0)
    p.add_argument("--delta-delta", type=float, default=0.0)
    p.add_argument("--substeps", type=int, default=2)
    p.add_argument("--out", required=True)

    p = sub.add_parser("scan", help="systematic-error fidelity scan")
    p.add_argument("--pulse", required=True)
    p.add_argument("--param", choices=("rabi", "detuning"), required=True)
    p.add_argument("--range", default="-0.5:0.5:101",
                   help="lo:hi:n (default -0.5:0.5:101)")
    p.add_argument("--beta-final", type=float, default=None,
                   help="target azimuth override for external pulses")
    p.add_argument("--substeps", type=int, default=2)
    p.add_argument("--out", required=True)

    p = sub.add_parser("baseline", help="generate a comparator pulse")
    p.add_argument("kind", choices=("pi2",))
    p.add_argument("--duration", type=float, default=1.0)
    p.add_argument("--n", type=int, default=101)
    p.add_argument("--out", required=True)

    p = sub.add_parser("report", help="full reference reproduction run")
    p.add_argument("--config", required=True)
    return parser


def _cmd_design(args) -> int:
    params = DesignParams(
        c=args.c, T=args.T, kappa=args.kappa, n_samples=args.n,
        branch_sign=args.branch, beta_rate_init=args.beta_init,
        consistency_sign=args.consistency_sign,
    )
    pulse, trajectory = design_pulse(params)
    write_pulse_csv(pulse, trajectory, args.out)
    print(f"area = {pulse.area / np.pi:.6f} pi")
    print(f"beta_final = {pulse.beta_final / np.pi:.6f} pi")
    print(f"adiabaticity residual = {pulse.adiabaticity_residual:.3e}")
    return 0


def _cmd_simulate(args) -> int:
    pulse = read_pulse_csv(args.pulse)
    trajectory = propagate(
        pulse, error=(args.delta_omega, args.delta_delta),
        substeps=args.substeps,
    )
    write_trajectory_csv(trajectory, args.out)
    print(f"final populations: {trajectory.pop1[-1]:.6f}, "
          f"{trajectory.pop2[-1]:.6f}")
    return 0


def _cmd_scan(args) -> int:
    pulse = read_pulse_csv(args.pulse)
    beta_final = args.beta_final
    if beta_final is None:
        beta_final = pulse.beta_final
    if not np.isfinite(beta_final):
        raise ConfigError(
            "pulse file carries no beta_final; pass --beta-final"
        )
    lo, hi, n = _parse_range(args.range)
    grid = ErrorGrid(parameter=args.param, lo=lo, hi=hi, n_points=n)
    result = scan_1d(pulse, TargetState(beta_final), grid,
                     substeps=args.substeps)
    write_scan_csv(result, args.out)
    print(f"min fidelity over |delta| <= 0.2: "
          f"{result.min_fidelity_in_band:.6f}")
    return 0


def _cmd_baseline(args) -> int:
    pulse = pi_half_baseline(args.duration, n_samples=args.n)
    write_pulse_csv(pulse, None, args.out)
    print(f"area = {pulse.area / np.pi:.6f} pi")
    print(f"beta_final = {pulse.beta_final / np.pi:.6f} pi")
    return 0


def _cmd_report(args) -> int:
    config = parse_config(Path(args.config).read_text(encoding="utf-8"))
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    precision = config.csv_precision

    designs = {}
    for c in REFERENCE_TABLE:
        params = replace(config.design, c=c)
        pulse, trajectory = design_pulse(params)
        designs[c] = (pulse, trajectory)
        write_pulse_csv(pulse, trajectory, out / f"pulse_c{c:g}.csv",
                        precision=precision)

    scans = {}
    for c, (pulse, _) in designs.items():
        target = TargetState(pulse.beta_final)
        for grid in (config.rabi_grid, config.detuning_grid):
            res = scan_1d(pulse, target, grid)
            scans[(c, grid.parameter)] = res
            write_scan_csv(
                res, out / f"scan_c{c:g}_{grid.parameter}.csv",
                precision=precision,
            )

    baseline = pi_half_baseline(1.0)
    baseline_scan = scan_1d(
        baseline, TargetState(baseline.beta_final), config.rabi_grid,
        protocol_label="pi/2 pulse",
    )

    lines = ["reference reproduction summary", ""]
    lines.append(
        f"{'c':>6} {'area/pi':>9} {'ref':>7} {'ok':>4} "
        f"{'|beta_f|/pi':>12} {'ref':>7} {'ok':>4} {'residual':>10}"
    )
    for c, (pulse, _) in designs.items():
        area_pi = pulse.area / np.pi
        beta_pi = abs(pulse.beta_final) / np.pi
        area_ref, beta_ref = REFERENCE_TABLE[c]
        area_ok = abs(area_pi - area_ref) <= AREA_RTOL * area_ref
        beta_ok = abs(beta_pi - beta_ref) <= BETA_ATOL_PI
        lines.append(
            f"{c:>6g} {area_pi:>9.4f} {area_ref:>7.3f} "
            f"{'yes' if area_ok else 'NO':>4} {beta_pi:>12.4f} "
            f"{beta_ref:>7.3f} {'yes' if beta_ok else 'NO':>4} "
            f"{pulse.adiabaticity_residual:>10.2e}"
        )
    lines.append("")
    rows = robustness_summary(list(scans.values()) + [baseline_scan])
    lines.append(format_summary(rows))
    lines.append("")
    qie_min = scans[(0.073, "rabi")].min_fidelity_in_band
    base_min = baseline_scan.min_fidelity_in_band
    lines.append(
        f"qie c=0.073 rabi band min {qie_min:.5f} vs pi/2 pulse "
        f"{base_min:.5f}: "
        f"{'better' if qie_min > base_min else 'NOT better'}"
    )
    summary = "\n".join(lines) + "\n"
    (out / "summary.txt").write_text(summary, encoding="utf-8")
    print(summary, end="")

    if config.emit_plots:
        for c, (pulse, trajectory) in designs.items():
            t = pulse.grid.samples()
            svg_line_plot(
                t,
                [("omega", pulse.omega), ("delta", pulse.delta)],
                f"pulse c={c:g}",
                out / f"pulse_c{c:g}.svg",
                x_label="t/T", y_label="field (1/T)",
            )
        for parameter, grid in (("rabi", config.rabi_grid),
                                ("detuning", config.detuning_grid)):
            series = [
                (f"c={c:g}", scans[(c, parameter)].fidelities)
                for c in designs
            ]
            svg_line_plot(
                grid.values(), series, f"{parameter} error scan",
                out / f"scan_{parameter}.svg",
                x_label="delta", y_label="fidelity",
            )
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    handlers = {
        "design": _cmd_design,
        "simulate": _cmd_simulate,
        "scan": _cmd_scan,
        "baseline": _cmd_baseline,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except Exception as exc:  # noqa: BLE001 - mapped onto exit codes
        try:
            code = exit_code_for(exc)
        except BaseException:
            raise exc
        print(f"error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
