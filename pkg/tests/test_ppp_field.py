import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hiddennode.errors import ConfigurationError, DomainError
from hiddennode.ppp_field import (
    CylinderSpec,
    PoissonFieldParams,
    agrees,
    analytic_exponent,
    analytic_pi,
    curve_argmin,
    cylinder_for,
    inflated_params,
    pi_curve,
    ppp_interference_radius,
    simulate_collision_probability,
    void_probability,
)
from hiddennode.siso import siso_copt_exact

DEFAULT_FIELD = PoissonFieldParams()
# 50-digit mpmath evaluation of the closed form at c = 2.3 with alpha = 4.
DEFAULT_PI_AT_2_3 = 8.7623029875465436676e-7


class TestParams:
    def test_defaults(self):
        assert (DEFAULT_FIELD.n_info, DEFAULT_FIELD.r_link, DEFAULT_FIELD.rho, DEFAULT_FIELD.lambda_rate) == (1024, 10, 1e-3, 1e-3)
        assert DEFAULT_FIELD.eta_i == pytest.approx(10 ** (-30 / 10))
        assert DEFAULT_FIELD.sigma2 == 1e-14
        assert DEFAULT_FIELD.loss_l == 1.0

    @pytest.mark.parametrize("kw", [dict(rho=-1), dict(lambda_rate=-1), dict(sigma2=0), dict(loss_l=0.5)])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            PoissonFieldParams(**kw)

    def test_cylinder_invalid(self):
        with pytest.raises(DomainError):
            CylinderSpec(-1, 1)


class TestVoidProbability:
    def test_empty(self):
        assert void_probability(CylinderSpec(0, 5), 1, 1) == 0

    def test_half(self):
        assert void_probability(CylinderSpec(math.log(2), 1), 1, 1) == pytest.approx(0.5, rel=1e-15)

    def test_first_order(self):
        p = void_probability(CylinderSpec(1e-6, 1), 1, 1)
        assert abs(p - 1e-6) / 1e-6 < 1e-6


class TestAnalytic:
    def test_no_nodes(self):
        assert analytic_pi(2.3, DEFAULT_FIELD.replace(rho=0)) == 0

    def test_default_value(self):
        assert analytic_pi(2.3, DEFAULT_FIELD) == pytest.approx(DEFAULT_PI_AT_2_3, rel=1e-12)
        assert analytic_pi(2.3, DEFAULT_FIELD) == pytest.approx(8.7e-7, rel=0.01)

    def test_u_shape(self):
        c_min = curve_argmin(pi_curve(DEFAULT_FIELD, np.linspace(0.05, 20, 4000)))
        interior = analytic_pi(c_min, DEFAULT_FIELD)
        assert analytic_pi(1e-3, DEFAULT_FIELD) > interior
        assert analytic_pi(20, DEFAULT_FIELD) > interior

    def test_domain(self):
        with pytest.raises(DomainError):
            analytic_pi(0, DEFAULT_FIELD)

    def test_exponent_equals_cylinder_measure(self):
        for c in (0.3, 1.0, 2.3, 7.0):
            for p in (DEFAULT_FIELD, DEFAULT_FIELD.replace(alpha=3, loss_l=2.0), inflated_params(0.3, 1.5, 5)):
                cyl = cylinder_for(c, p)
                assert analytic_exponent(c, p) == pytest.approx(
                    p.lambda_rate * p.rho * cyl.area_A * cyl.duration_T, rel=1e-12
                )
                assert analytic_pi(c, p) == pytest.approx(void_probability(cyl, p.rho, p.lambda_rate), rel=1e-12)

    @given(
        c=st.floats(0.1, 10),
        k=st.floats(1.01, 10),
        base=st.sampled_from([DEFAULT_FIELD, inflated_params(0.2, 2.0, 4.0)]),
    )
    def test_monotone_in_parameters(self, c, k, base):
        p0 = analytic_pi(c, base)
        assert analytic_pi(c, base.replace(eta_i=base.eta_i * k)) < p0
        assert analytic_pi(c, base.replace(rho=base.rho * k)) > p0
        assert analytic_pi(c, base.replace(lambda_rate=base.lambda_rate * k)) > p0
        assert analytic_pi(c, base.replace(n_info=base.n_info * k)) > p0


class TestCurve:
    @pytest.mark.parametrize("alpha", [3.0, 4.0])
    def test_argmin_is_siso_optimum(self, alpha):
        step = 0.01
        grid = np.round(np.arange(0.25, 10 + step / 2, step), 10)
        c_min = curve_argmin(pi_curve(DEFAULT_FIELD.replace(alpha=alpha), grid))
        assert abs(c_min - siso_copt_exact(alpha).c_opt) <= step

    def test_single_point(self):
        assert pi_curve(DEFAULT_FIELD, [2.0]) == [(2.0, analytic_pi(2.0, DEFAULT_FIELD))]

    @pytest.mark.parametrize(
        "change", [dict(rho=0.5), dict(lambda_rate=7.0), dict(r_link=30.0), dict(rho=1e-6)]
    )
    def test_argmin_invariant_to_scaling(self, change):
        grid = np.linspace(0.1, 8, 800)
        base = curve_argmin(pi_curve(DEFAULT_FIELD, grid))
        assert curve_argmin(pi_curve(DEFAULT_FIELD.replace(**change), grid)) == base

    def test_rejects_bad_grid(self):
        with pytest.raises(DomainError):
            pi_curve(DEFAULT_FIELD, [2.0, 1.0])
        with pytest.raises(DomainError):
            pi_curve(DEFAULT_FIELD, [0.0, 1.0])
        with pytest.raises(DomainError):
            curve_argmin([])


class TestSimulator:
    def test_no_nodes(self):
        rep = simulate_collision_probability(2.0, DEFAULT_FIELD.replace(rho=0), trials=1000, seed=1)
        assert rep.p_hat == 0.0
        assert rep.collisions == 0

    def test_infinite_threshold(self):
        rep = simulate_collision_probability(2.0, inflated_params(0.4, 2.0).replace(eta_i=math.inf), 1000, 1)
        assert rep.p_hat == 0.0

    def test_report_fields(self):
        p = inflated_params(0.2, 2.0)
        rep = simulate_collision_probability(2.0, p, trials=5000, seed=3)
        assert rep.trials == 5000 and rep.seed == 3
        assert 0 <= rep.p_hat <= 1
        assert rep.ci_halfwidth == pytest.approx(1.96 * math.sqrt(rep.p_hat * (1 - rep.p_hat) / 5000))
        assert rep.region_radius == pytest.approx(3 * ppp_interference_radius(2.0, p))

    def test_reproducible_per_worker_count(self):
        p = inflated_params(0.3, 1.5)
        a = simulate_collision_probability(1.5, p, 20_000, seed=42, workers=3)
        b = simulate_collision_probability(1.5, p, 20_000, seed=42, workers=3)
        assert a == b

    def test_region_too_small(self):
        p = inflated_params(0.3, 1.5)
        r_i = ppp_interference_radius(1.5, p)
        with pytest.raises(ConfigurationError):
            simulate_collision_probability(1.5, p, 100, 0, region_radius=2 * r_i)

    def test_window_too_short(self):
        with pytest.raises(ConfigurationError):
            simulate_collision_probability(1.0, DEFAULT_FIELD, 100, 0, window_T=10.0)

    def test_bad_trials(self):
        with pytest.raises(ConfigurationError):
            simulate_collision_probability(1.0, DEFAULT_FIELD, 0, 0)

    def test_longer_window_and_region_unbiased(self):
        p = inflated_params(0.25, 2.0)
        T = p.n_info / 2.0
        r_i = ppp_interference_radius(2.0, p)
        rep = simulate_collision_probability(2.0, p, 40_000, seed=8, window_T=3 * T, region_radius=4 * r_i)
        assert agrees(rep, analytic_pi(2.0, p))

    def test_negative_control(self):
        p = inflated_params(0.2, 2.0)
        rep = simulate_collision_probability(2.0, p, 40_000, seed=4)
        assert not agrees(rep, 1.5 * analytic_pi(2.0, p))

    def test_large_lambda_t_departs_from_closed_form(self):
        # With many packets per node the exponent is rho A (1 - exp(-lambda T)).
        p = inflated_params(0.5, 2.0, arrivals_in_T=1.0)
        rep = simulate_collision_probability(2.0, p, 40_000, seed=5)
        cyl = cylinder_for(2.0, p)
        exact = -math.expm1(-p.rho * cyl.area_A * -math.expm1(-p.lambda_rate * cyl.duration_T))
        assert not agrees(rep, analytic_pi(2.0, p))
        assert agrees(rep, exact)
