"""Spectral efficiency that minimizes the chance of disrupting hidden nodes.

SISO and square-MIMO links, fixed message size or low-duty-cycle average
rate, plus the interference probability in a Poisson field of hidden
receivers and a Monte-Carlo check of it.
"""

from .errors import BracketError, ConfigurationError, ConvergenceError, DomainError
from .mimo import (
    MimoLinkParams,
    NormalizedSpectralEfficiency,
    max_average_rate_mimo,
    mean_capacity_per_antenna,
    mimo_beta_opt_numeric,
    mimo_beta_opt_poly,
    mimo_capacity_sample,
    mimo_interference_radius,
    mimo_objective,
)
from .ppp_field import (
    CylinderSpec,
    PoissonFieldParams,
    SimulationReport,
    agrees,
    analytic_pi,
    curve_argmin,
    inflated_params,
    pi_curve,
    simulate_collision_probability,
    void_probability,
)
from .siso import (
    ChannelModel,
    OptimizationResult,
    OverlapExtents,
    TransmissionPlan,
    collision_overlap_factor,
    duty_cycle,
    interference_radius,
    max_average_rate_siso,
    siso_copt_exact,
    siso_copt_numeric,
    siso_copt_poly,
    siso_objective,
    snr_for_spectral_efficiency,
)
from .specfun import (
    BracketedInterval,
    ToleranceSpec,
    asymptotic_mimo_se,
    inverse_asymptotic_mimo_se,
    lambert_w0,
    solve_bracketed_root,
)

__version__ = "0.1.0"
