"""Prescribed polar-angle trajectory theta(t) and its analytic derivatives.

The design fixes the polar angle of the followed eigenstate to a smooth
error-function ramp from 0 to pi/2,

    theta(t)     = (pi/4) * (erf(t/T) + 1)
    theta_dot(t) = (sqrt(pi) / (2 T)) * exp(-(t/T)^2)
    theta_ddot(t)= theta_dot(t) * (-2 t / T^2)

The derivative formulas are exact (differentiate the erf definition); tests
verify them against central finite differences.  theta is monotone, and the
window [-kappa*T, kappa*T] with kappa >= 3 truncates tails where theta is
within erfc(kappa)*pi/4 of its asymptotes (about 1.2e-8 rad for kappa = 4).
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .errors import GridError, ParameterError

__all__ = ["TimeGrid", "ThetaSample", "theta_profile"]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling of the design window.

    step is derived; samples() returns the strictly increasing time axis
    shared by all trajectories built on this grid.
    """

    t_start: float
    t_end: float
    n_samples: int

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise GridError(
                f"t_start must be < t_end, got [{self.t_start}, {self.t_end}]"
            )
        if self.n_samples < 3:
            raise GridError(f"n_samples must be >= 3, got {self.n_samples}")

    @property
    def step(self) -> float:
        return (self.t_end - self.t_start) / (self.n_samples - 1)

    def samples(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_samples)

    @classmethod
    def symmetric(cls, kappa: float, T: float, n_samples: int) -> "TimeGrid":
        """Window [-kappa*T, kappa*T] used by the designer."""
        return cls(-kappa * T, kappa * T, n_samples)


@dataclass(frozen=True)
class ThetaSample:
    """theta and its first two time derivatives; fields may be scalars or
    arrays sampled on a common grid."""

    theta: np.ndarray
    theta_dot: np.ndarray
    theta_ddot: np.ndarray


def theta_profile(t, T: float) -> ThetaSample:
    """Evaluate the erf ramp and its analytic derivatives at time(s) t.

    Parameters
    ----------
    t : float or ndarray
        Time, same units as T.
    T : float
        Characteristic ramp time, must be positive.

    Returns
    -------
    ThetaSample
        theta in [0, pi/2], theta_dot >= 0, theta_ddot odd in t.
    """
    if not T > 0:
        raise ParameterError(f"T must be positive, got {T}")
    x = np.asarray(t, dtype=float) / T
    theta = 0.25 * np.pi * (erf(x) + 1.0)
    theta_dot = (np.sqrt(np.pi) / (2.0 * T)) * np.exp(-x * x)
    theta_ddot = theta_dot * (-2.0 * x / T)
    if np.ndim(t) == 0:
        return ThetaSample(float(theta), float(theta_dot), float(theta_ddot))
    return ThetaSample(theta, theta_dot, theta_ddot)
