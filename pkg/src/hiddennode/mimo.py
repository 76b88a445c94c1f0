"""Square MIMO link with an uninformed transmitter.

Works with the per-antenna spectral efficiency ``beta = c / n`` and the
large-array rate :func:`~hiddennode.specfun.asymptotic_mimo_se`. The
hidden-node objective is

    g(beta) = inverse_f(beta)**(2/alpha) / beta,

minimized numerically since ``f`` has no closed-form inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConvergenceError, DomainError
from .siso import (
    ChannelModel,
    OptimizationResult,
    _poly_in_excess,
    stationarity_residual,
)
from .specfun import (
    BracketedInterval,
    ToleranceSpec,
    asymptotic_mimo_se,
    inverse_asymptotic_mimo_se,
    minimize_bounded,
)

__all__ = [
    "MimoLinkParams",
    "NormalizedSpectralEfficiency",
    "mimo_capacity_sample",
    "random_channel",
    "mean_capacity_per_antenna",
    "mimo_objective",
    "mimo_beta_opt_numeric",
    "mimo_beta_opt_poly",
    "mimo_interference_radius",
    "max_average_rate_mimo",
]

MIMO_POLY_COEFFS = (0.795, 0.028, -0.003)

# Log-spaced scan used to bracket the minimizer before the bounded search.
SCAN_POINTS = 128
SCAN_RANGE = (1e-4, 64.0)


@dataclass(frozen=True)
class MimoLinkParams:
    n_antennas: int
    channel: ChannelModel = field(default_factory=ChannelModel)
    total_power_P0: float = 1.0

    def __post_init__(self):
        if int(self.n_antennas) != self.n_antennas or self.n_antennas < 1:
            raise DomainError("n_antennas must be a positive integer")
        if not self.total_power_P0 >= 0:
            raise DomainError("total_power_P0 must be >= 0")

    @property
    def effective_snr(self) -> float:
        """Per-receive-antenna SNR after implementation loss, ``P0 / l``."""
        return self.total_power_P0 / self.channel.loss_l

    def asymptotic_spectral_efficiency(self) -> float:
        return self.n_antennas * asymptotic_mimo_se(self.effective_snr)


@dataclass(frozen=True)
class NormalizedSpectralEfficiency:
    beta: float

    def __post_init__(self):
        if not self.beta >= 0:
            raise DomainError("beta must be >= 0")

    def total(self, n_antennas: int) -> float:
        return self.beta * n_antennas


def mimo_capacity_sample(channel_matrix, P0: float, loss_l: float = 1.0) -> float:
    """``log2 det(I + P0/(l n_t) H H^H)`` for one channel realization (b/s/Hz)."""
    if not P0 >= 0:
        raise DomainError("P0 must be >= 0")
    if not loss_l >= 1:
        raise DomainError("implementation loss must be >= 1")
    H = np.atleast_2d(np.asarray(channel_matrix, dtype=complex))
    n_r, n_t = H.shape[-2:]
    M = np.eye(n_r) + (P0 / (loss_l * n_t)) * (H @ H.conj().swapaxes(-1, -2))
    L = np.linalg.cholesky(M)
    c = 2.0 * np.log2(np.abs(np.diagonal(L, axis1=-2, axis2=-1))).sum(axis=-1)
    return float(c) if np.ndim(c) == 0 else c


def random_channel(rng: np.random.Generator, n: int, size: Optional[int] = None) -> np.ndarray:
    """I.i.d. zero-mean, unit-variance circular complex Gaussian ``n x n`` matrices."""
    shape = (n, n) if size is None else (size, n, n)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def mean_capacity_per_antenna(
    n: int, x: float, draws: int = 200, seed: int = 0, loss_l: float = 1.0
) -> float:
    """Sample mean of ``c / n`` over random square channels at SNR ``x = P0 / l``.

    Finite-array counterpart of :func:`asymptotic_mimo_se`.
    """
    rng = np.random.default_rng(seed)
    H = random_channel(rng, n, size=draws)
    caps = mimo_capacity_sample(H, x * loss_l, loss_l)
    return float(np.mean(caps) / n)


def mimo_objective(beta, alpha: float):
    """Interference probability up to a constant, ``inverse_f(beta)**(2/alpha) / beta``."""
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if np.ndim(beta):
        return np.array([mimo_objective(b, alpha) for b in np.asarray(beta, dtype=float)])
    if not beta > 0:
        raise DomainError("mimo_objective requires beta > 0")
    return inverse_asymptotic_mimo_se(beta) ** (2.0 / alpha) / beta


def mimo_beta_opt_numeric(alpha: float, tol: ToleranceSpec = ToleranceSpec()) -> OptimizationResult:
    """Per-antenna spectral efficiency minimizing :func:`mimo_objective`.

    A log-spaced scan brackets the minimizer, then a bounded Brent search
    refines it. At ``alpha = 2`` (or whenever the scan bottoms out at its
    lower edge) the infimum is approached as ``beta -> 0`` and a degenerate
    result with ``c_opt = 0`` is returned.
    """
    if not alpha >= 2:
        raise DomainError(f"alpha must be >= 2 for an interior optimum, got {alpha}")
    obj = lambda b: mimo_objective(b, alpha)
    if alpha == 2:
        # inverse_f(beta) ~ beta log 2, so the objective falls to log 2 as beta -> 0.
        return OptimizationResult(0.0, math.log(2.0), 0.0, "numeric-argmin", degenerate=True)

    grid = np.geomspace(*SCAN_RANGE, SCAN_POINTS)
    values = obj(grid)
    k = int(np.argmin(values))
    if k == 0:
        return OptimizationResult(0.0, float(values[0]), 0.0, "numeric-argmin", degenerate=True)
    if k == grid.size - 1:
        raise ConvergenceError(f"minimizer lies beyond beta={SCAN_RANGE[1]} for alpha={alpha}")
    b_opt = minimize_bounded(obj, BracketedInterval(grid[k - 1], grid[k + 1]), tol)
    return OptimizationResult(b_opt, obj(b_opt), stationarity_residual(obj, b_opt), "numeric-argmin")


def mimo_beta_opt_poly(alpha: float) -> float:
    """Cubic fit of the per-antenna MIMO optimum in ``alpha - 2``."""
    return _poly_in_excess(alpha, MIMO_POLY_COEFFS, "MIMO")


def mimo_interference_radius(beta: float, channel: ChannelModel, eta_i: float) -> float:
    """Hidden-node disruption radius when each antenna runs at ``beta`` b/s/Hz."""
    if not beta > 0:
        raise DomainError("beta must be positive")
    if not eta_i > 0:
        raise DomainError("INR threshold must be positive")
    snr = channel.loss_l * inverse_asymptotic_mimo_se(beta)
    return channel.r_link * (snr / eta_i) ** (1.0 / channel.alpha)


def max_average_rate_mimo(alpha: float, n: int, B: float, d: float) -> float:
    """Average rate ``d n beta_opt B`` (b/s) at duty cycle ``d``."""
    if not 0 < d <= 1:
        raise DomainError("duty cycle must lie in (0, 1]")
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    if not B > 0:
        raise DomainError("bandwidth must be positive")
    return d * n * mimo_beta_opt_numeric(alpha).c_opt * B
