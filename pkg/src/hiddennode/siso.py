"""Single-antenna link: spectral efficiency that minimizes hidden-node interference.

For a fixed message of ``n_info`` bits sent at spectral efficiency ``c`` the
occupied time-bandwidth product is ``n_info / c`` while the interference
area grows like the required SNR to the power ``2/alpha``. The trade is
captured by the objective

    g(c) = (2**c - 1)**(2/alpha) / c,

whose minimizer depends on the path-loss exponent alone. All proportional
relations are taken with unit constants; only ratios and extrema matter.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .errors import DomainError
from .specfun import BracketedInterval, ToleranceSpec, lambert_w0, minimize_bounded

__all__ = [
    "ChannelModel",
    "TransmissionPlan",
    "OverlapExtents",
    "OptimizationResult",
    "snr_for_spectral_efficiency",
    "interference_radius",
    "siso_objective",
    "siso_copt_exact",
    "siso_copt_numeric",
    "siso_copt_poly",
    "collision_overlap_factor",
    "duty_cycle",
    "duty_cycle_valid",
    "max_average_rate_siso",
    "stationarity_residual",
]

Method = Literal["exact-lambert", "polynomial", "numeric-argmin"]

SISO_POLY_COEFFS = (1.355, -0.118, 0.008)
POLY_RANGE = (2.0, 6.0)


@dataclass(frozen=True)
class ChannelModel:
    """Power-law channel seen by the link of interest.

    Gains scale as ``r**-alpha``; the hidden-node INR at distance ``r`` is
    ``(r / r_link)**-alpha`` times the SNR at the intended receiver.
    """

    alpha: float = 4.0
    loss_l: float = 1.0
    r_link: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not self.loss_l >= 1:
            raise DomainError(f"implementation loss must be >= 1, got {self.loss_l}")
        if not self.r_link > 0:
            raise DomainError(f"r_link must be positive, got {self.r_link}")

    def gain(self, r: float) -> float:
        return float(r) ** (-self.alpha)

    def inr_at(self, r: float, snr: float) -> float:
        """INR at distance ``r`` given the SNR at the intended receiver."""
        return self.gain(r) / self.gain(self.r_link) * snr


@dataclass(frozen=True)
class TransmissionPlan:
    n_info: float
    duration_T: float
    bandwidth_B: float
    period_T0: Optional[float] = None

    def __post_init__(self):
        for name in ("n_info", "duration_T", "bandwidth_B"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.period_T0 is not None and not 0 < self.duration_T <= self.period_T0:
            raise DomainError("duration_T must not exceed period_T0")

    @property
    def spectral_efficiency_c(self) -> float:
        return self.n_info / (self.duration_T * self.bandwidth_B)

    @classmethod
    def from_efficiency(cls, n_info: float, c: float, bandwidth_B: float = 1.0,
                        period_T0: Optional[float] = None) -> "TransmissionPlan":
        """Plan that carries ``n_info`` bits at efficiency ``c`` in band ``B``."""
        if not c > 0:
            raise DomainError("spectral efficiency must be positive")
        return cls(n_info, n_info / (c * bandwidth_B), bandwidth_B, period_T0)


@dataclass(frozen=True)
class OverlapExtents:
    hidden_T_H: float = 0.0
    hidden_B_H: float = 0.0
    mode: Literal["general", "cognitive", "joint"] = "general"

    def __post_init__(self):
        if self.hidden_T_H < 0 or self.hidden_B_H < 0:
            raise DomainError("hidden-link extents must be non-negative")
        if self.mode not in ("general", "cognitive", "joint"):
            raise DomainError(f"unknown overlap mode {self.mode!r}")


@dataclass(frozen=True)
class OptimizationResult:
    c_opt: float
    objective_value: float
    stationarity_residual: float
    method: Method
    degenerate: bool = False


def snr_for_spectral_efficiency(c: float, loss_l: float = 1.0) -> float:
    """SNR needed to run at ``c`` b/s/Hz with implementation loss ``loss_l``."""
    if not c >= 0:
        raise DomainError(f"spectral efficiency must be >= 0, got {c}")
    if not loss_l >= 1:
        raise DomainError(f"implementation loss must be >= 1, got {loss_l}")
    return loss_l * math.expm1(c * math.log(2.0))


def interference_radius(c: float, channel: ChannelModel, eta_i: float) -> float:
    """Distance inside which a hidden node sees an INR above ``eta_i``."""
    if not c > 0:
        raise DomainError("spectral efficiency must be positive")
    if not eta_i > 0:
        raise DomainError("INR threshold must be positive")
    snr = snr_for_spectral_efficiency(c, channel.loss_l)
    return channel.r_link * (snr / eta_i) ** (1.0 / channel.alpha)


def siso_objective(c, alpha: float):
    """Interference probability up to a constant, ``(2**c - 1)**(2/alpha) / c``.

    Vectorized over ``c``.
    """
    ca = np.asarray(c, dtype=float)
    if np.any(~(ca > 0)):
        raise DomainError("siso_objective requires c > 0")
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    out = np.expm1(ca * np.log(2.0)) ** (2.0 / alpha) / ca
    return float(out) if np.ndim(c) == 0 else out


def stationarity_residual(objective, x_opt: float) -> float:
    """Central-difference slope of ``objective`` at ``x_opt``, relative to its value."""
    h = 1e-6 * max(1.0, abs(x_opt))
    lo = max(x_opt - h, 0.5 * x_opt)
    hi = x_opt + (x_opt - lo)
    g0 = objective(x_opt)
    slope = (objective(hi) - objective(lo)) / (hi - lo)
    return abs(slope) / abs(g0)


def siso_copt_exact(alpha: float) -> OptimizationResult:
    """Optimal spectral efficiency from the Lambert-W stationary point.

    c_opt = (alpha + 2 W0(-alpha/2 * exp(-alpha/2))) / (2 log 2).

    For ``alpha < 2`` the principal branch returns the trivial solution
    ``-alpha/2`` and the objective has no interior minimum, so those
    exponents are rejected.
    """
    if not alpha >= 2:
        raise DomainError(f"alpha must be >= 2 for an interior optimum, got {alpha}")
    arg = -0.5 * alpha * math.exp(-0.5 * alpha)
    c_opt = (alpha + 2.0 * lambert_w0(arg)) / (2.0 * math.log(2.0))
    c_opt = max(c_opt, 0.0)
    if c_opt == 0.0:
        # alpha == 2: g(c) decreases to log 2 as c -> 0, so the infimum sits at c = 0.
        return OptimizationResult(0.0, math.log(2.0), 0.0, "exact-lambert", degenerate=True)
    obj = lambda c: siso_objective(c, alpha)
    return OptimizationResult(
        c_opt, obj(c_opt), stationarity_residual(obj, c_opt), "exact-lambert"
    )


def siso_copt_numeric(alpha: float, tol: ToleranceSpec = ToleranceSpec()) -> OptimizationResult:
    """Direct minimization of :func:`siso_objective`, independent of Lambert W."""
    if not alpha > 2:
        raise DomainError(f"numeric SISO optimum needs alpha > 2, got {alpha}")
    obj = lambda c: siso_objective(c, alpha)
    grid = np.geomspace(1e-4, 64.0, 256)
    k = int(np.argmin(obj(grid)))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    c_opt = minimize_bounded(obj, BracketedInterval(lo, hi), tol)
    return OptimizationResult(c_opt, obj(c_opt), stationarity_residual(obj, c_opt), "numeric-argmin")


def _poly_in_excess(alpha: float, coeffs, name: str) -> float:
    if not POLY_RANGE[0] <= alpha <= POLY_RANGE[1]:
        warnings.warn(
            f"{name} fit is only meant for alpha in [{POLY_RANGE[0]}, {POLY_RANGE[1]}], got {alpha}",
            RuntimeWarning,
            stacklevel=3,
        )
    d = alpha - 2.0
    return coeffs[0] * d + coeffs[1] * d**2 + coeffs[2] * d**3


def siso_copt_poly(alpha: float) -> float:
    """Cubic fit of the SISO optimum in ``alpha - 2``."""
    return _poly_in_excess(alpha, SISO_POLY_COEFFS, "SISO")


def collision_overlap_factor(plan: TransmissionPlan, extents: OverlapExtents) -> float:
    """Time-frequency footprint that sets the collision probability.

    ``general``: (T + T_H)(B + B_H); ``cognitive``: T B (large message
    against short hidden links); ``joint``: 4 T B (all links optimized
    alike, so T_H = T and B_H = B).
    """
    T, B = plan.duration_T, plan.bandwidth_B
    if extents.mode == "general":
        return (T + extents.hidden_T_H) * (B + extents.hidden_B_H)
    if extents.mode == "cognitive":
        return T * B
    return 4.0 * T * B


def duty_cycle(T: float, T0: float) -> float:
    if not (T > 0 and T0 > 0):
        raise DomainError("durations must be positive")
    if T > T0:
        raise DomainError(f"transmit duration {T} exceeds period {T0}")
    return T / T0


def duty_cycle_valid(d: float) -> bool:
    """Whether the fixed-message optimum still applies at duty cycle ``d``.

    With equal-length hidden transmissions the optimization breaks down once
    T + T_H = 2T fills the period.
    """
    return d < 0.5


def max_average_rate_siso(alpha: float, B: float) -> float:
    """Largest average rate (b/s) for which the fixed-message optimum applies."""
    if not B > 0:
        raise DomainError("bandwidth must be positive")
    return 0.5 * siso_copt_exact(alpha).c_opt * B
