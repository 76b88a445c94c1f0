"""Interference probability in a Poisson field of hidden nodes.

Hidden receivers form a planar Poisson process of density ``rho`` and each
gets packets at rate ``lambda_rate``. Treating arrival time as a third
coordinate, the link of interest disrupts someone exactly when the
space-time cylinder of cross-section ``A = pi r_i**2`` and height ``T`` is
non-empty, which happens with probability ``1 - exp(-lambda rho A T)``.

Bandwidth is normalized to 1, so a message of ``n_info`` bits at
efficiency ``c`` lasts ``T = n_info / c``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError, DomainError
from .siso import ChannelModel, interference_radius

__all__ = [
    "PoissonFieldParams",
    "CylinderSpec",
    "SimulationReport",
    "void_probability",
    "ppp_interference_radius",
    "cylinder_for",
    "analytic_exponent",
    "analytic_pi",
    "simulate_collision_probability",
    "agrees",
    "inflated_params",
    "pi_curve",
    "curve_argmin",
]

REGION_MARGIN = 3.0
_BATCH_TRIALS = 20_000


@dataclass(frozen=True)
class PoissonFieldParams:
    """Hidden-node field and link parameters.

    Defaults are a nominal ad hoc setting: 1024 bits, 10 m link, densities
    of 1e-3, a -30 dB INR threshold, noise power 1e-14 and alpha = 4.
    """

    rho: float = 1e-3
    lambda_rate: float = 1e-3
    r_link: float = 10.0
    eta_i: float = 1e-3
    sigma2: float = 1e-14
    n_info: float = 1024.0
    alpha: float = 4.0
    loss_l: float = 1.0

    def __post_init__(self):
        if not (self.rho >= 0 and self.lambda_rate >= 0):
            raise DomainError("rho and lambda_rate must be non-negative")
        for name in ("r_link", "eta_i", "sigma2", "n_info", "alpha"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if not self.loss_l >= 1:
            raise DomainError("implementation loss must be >= 1")

    @property
    def channel(self) -> ChannelModel:
        return ChannelModel(alpha=self.alpha, loss_l=self.loss_l, r_link=self.r_link)

    def replace(self, **changes) -> "PoissonFieldParams":
        return PoissonFieldParams(**{**asdict(self), **changes})


@dataclass(frozen=True)
class CylinderSpec:
    area_A: float
    duration_T: float

    def __post_init__(self):
        if self.area_A < 0 or self.duration_T < 0:
            raise DomainError("cylinder dimensions must be non-negative")


@dataclass(frozen=True)
class SimulationReport:
    p_hat: float
    trials: int
    ci_halfwidth: float
    seed: int
    region_radius: float
    collisions: int
    workers: int = 1


def void_probability(cyl: CylinderSpec, rho: float, lambda_rate: float) -> float:
    """Probability that the space-time cylinder holds at least one arrival."""
    if rho < 0 or lambda_rate < 0:
        raise DomainError("rho and lambda_rate must be non-negative")
    return -math.expm1(-lambda_rate * rho * cyl.area_A * cyl.duration_T)


def ppp_interference_radius(c: float, params: PoissonFieldParams) -> float:
    """Disruption radius with absolute powers: INR threshold ``eta_i / sigma2``."""
    if math.isinf(params.eta_i):
        return 0.0
    return interference_radius(c, params.channel, params.eta_i / params.sigma2)


def cylinder_for(c: float, params: PoissonFieldParams) -> CylinderSpec:
    r_i = ppp_interference_radius(c, params)
    return CylinderSpec(math.pi * r_i**2, params.n_info / c)


def analytic_exponent(c: float, params: PoissonFieldParams) -> float:
    """``lambda rho pi r_link**2 (n_info/c) (sigma2 l (2**c - 1) / eta_i)**(2/alpha)``."""
    if not c > 0:
        raise DomainError("spectral efficiency must be positive")
    p = params
    snr_term = p.sigma2 * p.loss_l * math.expm1(c * math.log(2.0)) / p.eta_i
    return p.lambda_rate * p.rho * math.pi * p.r_link**2 * (p.n_info / c) * snr_term ** (2.0 / p.alpha)


def analytic_pi(c: float, params: PoissonFieldParams) -> float:
    """Closed-form interference probability at spectral efficiency ``c``."""
    return -math.expm1(-analytic_exponent(c, params))


def _simulate_block(
    rng: np.random.Generator,
    trials: int,
    *,
    mean_nodes: float,
    region_radius: float,
    r_i: float,
    arrivals_per_node: float,
    window_T: float,
    tx_start: float,
    tx_end: float,
) -> int:
    hits = 0
    done = 0
    while done < trials:
        batch = min(_BATCH_TRIALS, trials - done)
        counts = rng.poisson(mean_nodes, size=batch)
        n_nodes = int(counts.sum())
        radii = region_radius * np.sqrt(rng.random(n_nodes))
        n_arr = rng.poisson(arrivals_per_node, size=n_nodes)
        times = rng.uniform(0.0, window_T, size=int(n_arr.sum()))
        in_tx = (times >= tx_start) & (times < tx_end)
        node_of_arrival = np.repeat(np.arange(n_nodes), n_arr)
        node_hit = np.bincount(node_of_arrival, weights=in_tx, minlength=n_nodes) > 0
        collided = node_hit & (radii < r_i)
        trial_of_node = np.repeat(np.arange(batch), counts)
        per_trial = np.bincount(trial_of_node, weights=collided, minlength=batch)
        hits += int(np.count_nonzero(per_trial))
        done += batch
    return hits


def simulate_collision_probability(
    c: float,
    params: PoissonFieldParams,
    trials: int,
    seed: int,
    window_T: Optional[float] = None,
    region_radius: Optional[float] = None,
    workers: int = 1,
) -> SimulationReport:
    """Monte-Carlo estimate of the interference probability.

    Each trial drops a Poisson number of hidden nodes uniformly on a disc,
    gives every node Poisson packet arrivals over ``[0, window_T]`` and
    counts a collision when a node inside the disruption radius receives a
    packet during the transmission, which occupies the middle ``T`` of the
    window. Multiple arrivals per node are allowed.

    Trials are split evenly across ``workers``, each with its own
    :class:`numpy.random.SeedSequence` child, so a fixed ``(seed, workers)``
    pair reproduces the estimate exactly.
    """
    if trials < 1:
        raise ConfigurationError("trials must be at least 1")
    if workers < 1:
        raise ConfigurationError("workers must be at least 1")
    if not c > 0:
        raise DomainError("spectral efficiency must be positive")
    T = params.n_info / c
    window_T = T if window_T is None else float(window_T)
    if window_T < T:
        raise ConfigurationError(f"window {window_T} is shorter than the transmission {T}")
    r_i = ppp_interference_radius(c, params)
    if region_radius is None:
        region_radius = REGION_MARGIN * r_i
    if region_radius < REGION_MARGIN * r_i:
        raise ConfigurationError(
            f"region radius {region_radius} is below {REGION_MARGIN} x interference radius {r_i}"
        )

    tx_start = 0.5 * (window_T - T)
    kwargs = dict(
        mean_nodes=params.rho * math.pi * region_radius**2,
        region_radius=region_radius,
        r_i=r_i,
        arrivals_per_node=params.lambda_rate * window_T,
        window_T=window_T,
        tx_start=tx_start,
        tx_end=tx_start + T,
    )
    shares = [trials // workers + (1 if k < trials % workers else 0) for k in range(workers)]
    rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(workers)]
    if workers == 1:
        hits = _simulate_block(rngs[0], shares[0], **kwargs)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(lambda rs: _simulate_block(rs[0], rs[1], **kwargs), zip(rngs, shares)))

    p_hat = hits / trials
    ci = 1.96 * math.sqrt(p_hat * (1.0 - p_hat) / trials)
    return SimulationReport(p_hat, trials, ci, seed, float(region_radius), hits, workers)


def agrees(report: SimulationReport, p_analytic: float, n_sigma: float = 3.0) -> bool:
    """Whether the estimate lies within ``n_sigma`` binomial standard errors.

    The standard error uses the analytic probability so that a zero count
    is judged against the prediction rather than against itself.
    """
    sigma = math.sqrt(p_analytic * (1.0 - p_analytic) / report.trials)
    return abs(report.p_hat - p_analytic) <= n_sigma * sigma


def inflated_params(
    target_p: float,
    c: float,
    alpha: float = 4.0,
    *,
    arrivals_in_T: float = 0.005,
    n_info: float = 1024.0,
    r_link: float = 10.0,
) -> PoissonFieldParams:
    """Field whose analytic probability at ``c`` equals ``target_p``.

    Uses unit absolute powers and a packet rate giving ``arrivals_in_T``
    expected packets per node during the transmission, then solves for the
    density. Keeping ``arrivals_in_T`` small matters: with true Poisson
    arrivals a node is hit with probability ``1 - exp(-lambda T)``, which the
    closed form replaces by ``lambda T``.
    """
    if not 0 < target_p < 1:
        raise DomainError("target probability must lie in (0, 1)")
    base = PoissonFieldParams(
        rho=1.0, lambda_rate=1.0, r_link=r_link, eta_i=1.0, sigma2=1.0, n_info=n_info, alpha=alpha
    )
    T = n_info / c
    lam = arrivals_in_T / T
    cyl = cylinder_for(c, base)
    rho = -math.log1p(-target_p) / (lam * cyl.area_A * T)
    return base.replace(rho=rho, lambda_rate=lam)


def pi_curve(params: PoissonFieldParams, c_grid) -> list[tuple[float, float]]:
    """``(c, p_i)`` pairs of :func:`analytic_pi` over an ascending grid."""
    grid = [float(c) for c in c_grid]
    if any(c <= 0 for c in grid):
        raise DomainError("grid values must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("grid must be strictly ascending")
    return [(c, analytic_pi(c, params)) for c in grid]


def curve_argmin(points: list[tuple[float, float]]) -> float:
    """Abscissa of the smallest ordinate."""
    if not points:
        raise DomainError("empty curve")
    return min(points, key=lambda p: p[1])[0]
