"""Systematic-error scans and protocol comparison.

Errors are multiplicative miscalibrations applied uniformly over the pulse:
Omega -> (1 + delta) Omega for "rabi", Delta -> (1 + delta) Delta for
"detuning".  Fidelity is always measured against the fixed nominal target
(never re-fit per error value), and band statistics over |delta| <= 0.1 /
0.2 / 0.3 are the quantitative robustness surface.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .designer import Pulse
from .dynamics import TargetState, fidelity, final_states_over_errors, ket1, target_state
from .errors import ParameterError, ScanError
from .profiles import TimeGrid

__all__ = [
    "ErrorGrid",
    "ScanResult",
    "SummaryRow",
    "pi_half_baseline",
    "scan_1d",
    "robustness_summary",
    "format_summary",
]

BAND_HALF_WIDTH = 0.2  # |delta| band for min_fidelity_in_band


@dataclass(frozen=True)
class ErrorGrid:
    """Uniform grid of error amplitudes for one parameter kind."""

    parameter: str  # "rabi" | "detuning"
    lo: float
    hi: float
    n_points: int

    def __post_init__(self):
        if self.parameter not in ("rabi", "detuning"):
            raise ParameterError(
                f"parameter must be 'rabi' or 'detuning', got {self.parameter!r}"
            )
        if not self.lo < self.hi:
            raise ParameterError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if self.n_points < 2:
            raise ParameterError(f"n_points must be >= 2, got {self.n_points}")

    def values(self) -> np.ndarray:
        """Grid values; when the range spans 0 the closest point is snapped
        to exactly 0 so the nominal pulse is always evaluated."""
        vals = np.linspace(self.lo, self.hi, self.n_points)
        if self.lo <= 0.0 <= self.hi:
            vals[np.argmin(np.abs(vals))] = 0.0
        return vals


@dataclass
class ScanResult:
    protocol_label: str
    grid: ErrorGrid
    fidelities: np.ndarray
    min_fidelity_in_band: float
    area: float


def pi_half_baseline(duration: float, n_samples: int = 101) -> Pulse:
    """Resonant constant pulse with area pi/2, the standard comparator.

    Constant Omega = (pi/2)/duration, Delta = 0.  Its target corresponds to
    beta_final = -pi/2: propagating |1> through it yields (1, -i)/sqrt(2) up
    to global phase, which is target_state(-pi/2), giving fidelity 1 at
    delta = 0.
    """
    if not duration > 0:
        raise ParameterError(f"duration must be positive, got {duration}")
    grid = TimeGrid(0.0, duration, n_samples)
    omega = np.full(n_samples, 0.5 * np.pi / duration)
    return Pulse(
        grid=grid,
        omega=omega,
        delta=np.zeros(n_samples),
        area=0.5 * np.pi,
        beta_final=-0.5 * np.pi,
        adiabaticity_residual=0.0,  # static drive, the parameter is 0 exactly
        params=None,
    )


def scan_1d(pulse: Pulse, target, grid: ErrorGrid, substeps: int = 2,
            protocol_label: Optional[str] = None) -> ScanResult:
    """Fidelity versus systematic error over one grid.

    target is a TargetState (or bare beta_final); the same target is used at
    every grid point.  Grid points are independent; they are evaluated as
    one batch, which is arithmetically identical to independent runs and
    independent of evaluation order.
    """
    deltas = grid.values()
    ones = np.ones_like(deltas)
    if grid.parameter == "rabi":
        scale_om, scale_de = 1.0 + deltas, ones
    else:
        scale_om, scale_de = ones, 1.0 + deltas
    if isinstance(target, TargetState):
        tgt = target_state(target)
    elif np.ndim(target) == 0:
        tgt = target_state(float(target))
    else:
        tgt = np.asarray(target, dtype=complex)

    finals = final_states_over_errors(pulse, ket1(), scale_om, scale_de, substeps)
    fids = np.array([fidelity(psi, tgt) for psi in finals])
    bad = ~np.isfinite(fids)
    if np.any(bad):
        raise ScanError(
            f"propagation failed at delta = {deltas[np.argmax(bad)]:.6g}",
            delta=float(deltas[np.argmax(bad)]),
        )

    band = np.abs(deltas) <= BAND_HALF_WIDTH + 1e-12
    band_min = float(np.min(fids[band])) if np.any(band) else float("nan")
    if protocol_label is None:
        if pulse.params is not None:
            protocol_label = f"qie c={pulse.params.c:g}"
        else:
            protocol_label = "pulse"
    return ScanResult(
        protocol_label=protocol_label,
        grid=grid,
        fidelities=fids,
        min_fidelity_in_band=band_min,
        area=pulse.area,
    )


@dataclass
class SummaryRow:
    protocol_label: str
    parameter: str
    area: float
    f_nominal: float
    min_band_01: float
    min_band_02: float
    min_band_03: float
    monotone_left: bool
    monotone_right: bool


def _band_min(deltas, fids, half_width):
    mask = np.abs(deltas) <= half_width + 1e-12
    return float(np.min(fids[mask])) if np.any(mask) else float("nan")


def robustness_summary(results: List[ScanResult]) -> List[SummaryRow]:
    """Aggregate per-protocol band statistics from scan results.

    monotone_left/right flag whether fidelity is nonincreasing as |delta|
    grows on each side of 0 (within 1e-12), i.e. a fringe-free profile.
    """
    if not results:
        raise ParameterError("robustness_summary needs at least one result")
    rows = []
    for res in results:
        deltas = res.grid.values()
        fids = res.fidelities
        at_zero = np.isclose(deltas, 0.0)
        f0 = float(fids[at_zero][0]) if np.any(at_zero) else float("nan")
        left = deltas <= 0.0
        right = deltas >= 0.0
        mono_l = bool(np.all(np.diff(fids[left]) >= -1e-12))
        mono_r = bool(np.all(np.diff(fids[right]) <= 1e-12))
        rows.append(
            SummaryRow(
                protocol_label=res.protocol_label,
                parameter=res.grid.parameter,
                area=res.area,
                f_nominal=f0,
                min_band_01=_band_min(deltas, fids, 0.1),
                min_band_02=_band_min(deltas, fids, 0.2),
                min_band_03=_band_min(deltas, fids, 0.3),
                monotone_left=mono_l,
                monotone_right=mono_r,
            )
        )
    return rows


def format_summary(rows: List[SummaryRow]) -> str:
    """Plain-text table of summary rows."""
    header = (
        f"{'protocol':<16} {'param':<9} {'area/pi':>8} {'F(0)':>9} "
        f"{'min|d|<.1':>10} {'min|d|<.2':>10} {'min|d|<.3':>10} {'mono':>6}"
    )
    lines = [header, "-" * len(header)]
    for r in rows:
        mono = ("L" if r.monotone_left else "-") + ("R" if r.monotone_right else "-")
        lines.append(
            f"{r.protocol_label:<16} {r.parameter:<9} {r.area / np.pi:>8.4f} "
            f"{r.f_nominal:>9.6f} {r.min_band_01:>10.6f} {r.min_band_02:>10.6f} "
            f"{r.min_band_03:>10.6f} {mono:>6}"
        )
    return "\n".join(lines)
