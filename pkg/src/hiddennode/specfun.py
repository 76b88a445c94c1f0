"""Special functions and scalar solvers used by the optimizers.

The Lambert W evaluation is a vectorized Halley iteration seeded from the
branch-point series, the log-log asymptote or ``log1p``; root finding and
bounded minimization are thin wrappers over :mod:`scipy.optimize`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize

from .errors import BracketError, ConvergenceError, DomainError

__all__ = [
    "ToleranceSpec",
    "BracketedInterval",
    "lambert_w0",
    "solve_bracketed_root",
    "minimize_bounded",
    "asymptotic_mimo_se",
    "inverse_asymptotic_mimo_se",
]

_EPS = np.finfo(float).eps
_LN2 = np.log(2.0)

# 1/e split into a double and its rounding remainder, so x + 1/e is exact
# near the branch point.
_INV_E_HI = 0.36787944117144233
_INV_E_LO = -1.2428753672788363e-17

# Below this distance p = sqrt(2(1 + e x)) the series alone is accurate to
# machine precision and Halley steps would only chase rounding noise.
_SERIES_ONLY_P = 1e-3


@dataclass(frozen=True)
class ToleranceSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("abs_tol and rel_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass(frozen=True)
class BracketedInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")


DEFAULT_TOL = ToleranceSpec()


def _scalar_or_array(values: np.ndarray, like):
    if np.ndim(like) == 0:
        return float(values.reshape(()))
    return values


def lambert_w0(x, tol: ToleranceSpec = DEFAULT_TOL):
    """Principal branch of the Lambert W function for real ``x >= -1/e``.

    Accepts a scalar or an array and returns the same shape. Arguments up
    to ``tol.abs_tol`` below the branch point are clamped to it.

    Raises
    ------
    DomainError
        If any ``x < -1/e - tol.abs_tol`` or is NaN.
    ConvergenceError
        If Halley's iteration does not settle within ``tol.max_iter`` steps.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(np.isnan(xa)) or np.any(xa < -_INV_E_HI - tol.abs_tol):
        raise DomainError("lambert_w0 is real only for x >= -1/e")
    xa = np.atleast_1d(xa)
    w = np.empty_like(xa)

    at_branch = xa <= -_INV_E_HI
    w[at_branch] = -1.0

    # Distance to the branch point, p = sqrt(2 (1 + e x)).
    dist = (xa + _INV_E_HI) + _INV_E_LO
    p = np.sqrt(np.maximum(2.0 * np.e * dist, 0.0))
    near = ~at_branch & (xa < -0.25)
    pn = p[near]
    w[near] = -1.0 + pn - pn**2 / 3.0 + 11.0 / 72.0 * pn**3 - 43.0 / 540.0 * pn**4

    mid = (xa >= -0.25) & (xa <= 3.0)
    w[mid] = np.log1p(xa[mid])
    far = xa > 3.0
    l1 = np.log(xa[far])
    l2 = np.log(l1)
    w[far] = l1 - l2 + l2 / l1

    active = ~at_branch & ~(near & (p < _SERIES_ONLY_P))
    active &= np.isfinite(xa)
    w[np.isposinf(xa)] = np.inf
    if not active.any():
        return _scalar_or_array(w, x)

    wa = w[active]
    xs = xa[active]
    for _ in range(tol.max_iter):
        ew = np.exp(wa)
        f = wa * ew - xs
        wp1 = wa + 1.0
        dw = f / (ew * wp1 - (wa + 2.0) * f / (2.0 * wp1))
        wa = wa - dw
        # Near the branch point dw is dominated by rounding in f, so a
        # residual at the noise floor of x also counts as converged.
        settled = np.abs(dw) <= 4.0 * _EPS * (1.0 + np.abs(wa))
        settled |= np.abs(f) <= 8.0 * _EPS * np.abs(xs)
        if settled.all():
            break
    else:
        raise ConvergenceError(f"lambert_w0 did not converge in {tol.max_iter} iterations")
    w[active] = wa
    return _scalar_or_array(w, x)


def solve_bracketed_root(
    f: Callable[[float], float],
    interval: BracketedInterval,
    tol: ToleranceSpec = DEFAULT_TOL,
) -> float:
    """Root of ``f`` inside ``interval`` (Brent's method).

    ``tol.abs_tol`` is the absolute width at which the search stops;
    ``tol.rel_tol`` the relative width (clamped to four ulps).
    """
    lo, hi = interval.lo, interval.hi
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return float(lo)
    if fhi == 0.0:
        return float(hi)
    if np.sign(flo) == np.sign(fhi):
        raise BracketError(f"f({lo})={flo:g} and f({hi})={fhi:g} have the same sign")
    root, info = optimize.brentq(
        f,
        lo,
        hi,
        xtol=tol.abs_tol,
        rtol=max(tol.rel_tol, 4.0 * _EPS),
        maxiter=tol.max_iter,
        full_output=True,
        disp=False,
    )
    if not info.converged:
        raise ConvergenceError(f"root search stopped after {info.iterations} iterations")
    return float(root)


def minimize_bounded(
    f: Callable[[float], float],
    interval: BracketedInterval,
    tol: ToleranceSpec = DEFAULT_TOL,
) -> float:
    """Minimizer of a unimodal ``f`` on ``interval``.

    Uses scipy's bounded Brent search (golden section with parabolic steps).
    """
    res = optimize.minimize_scalar(
        f,
        bounds=(interval.lo, interval.hi),
        method="bounded",
        options={"xatol": tol.abs_tol, "maxiter": max(tol.max_iter, 500)},
    )
    if not res.success:
        raise ConvergenceError(f"bounded minimization failed: {res.message}")
    return float(res.x)


def asymptotic_mimo_se(x):
    """Large-array spectral efficiency per antenna of a square i.i.d. channel.

    ``x`` is the noise-normalized SNR per receive antenna (already divided
    by the implementation loss). The usual closed form

        4 log(s + 1)/log 4 + (s - 1)/(x log 4) - 2 - 2/log 4,  s = sqrt(4x + 1),

    is evaluated in the equivalent form

        (2 log1p(u/2) - u/(s + 1)) / log 2,  u = s - 1 = 4x/(s + 1),

    which has no 0/0 at ``x = 0`` and loses no digits to cancellation for
    small ``x``.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(np.isnan(xa)) or np.any(xa < 0):
        raise DomainError("asymptotic_mimo_se requires x >= 0")
    s = np.sqrt(4.0 * xa + 1.0)
    u = 4.0 * xa / (s + 1.0)
    out = (2.0 * np.log1p(0.5 * u) - u / (s + 1.0)) / _LN2
    return _scalar_or_array(np.atleast_1d(out), x)


def inverse_asymptotic_mimo_se(beta: float, tol: ToleranceSpec = DEFAULT_TOL) -> float:
    """SNR ``x`` at which :func:`asymptotic_mimo_se` equals ``beta``."""
    beta = float(beta)
    if not beta >= 0:
        raise DomainError("inverse_asymptotic_mimo_se requires beta >= 0")
    if beta == 0.0:
        return 0.0

    hi = 2.0 ** (beta + 2.0)
    while asymptotic_mimo_se(hi) <= beta:
        hi *= 2.0
        if not np.isfinite(hi):
            raise DomainError(f"beta={beta} is beyond double-precision range")

    # f(x) ~ x/log 2 near zero, so scale the absolute width by beta to keep
    # small inverses accurate in the relative sense too.
    inner = ToleranceSpec(
        abs_tol=tol.abs_tol * min(1.0, beta),
        rel_tol=tol.rel_tol,
        max_iter=tol.max_iter,
    )
    return solve_bracketed_root(
        lambda v: asymptotic_mimo_se(v) - beta, BracketedInterval(0.0, hi), inner
    )
