import math

import numpy as np
import pytest

from fracvar.fracbasis import BasisSpec
from fracvar.oracle import (
    ExactSolution,
    _sum_component,
    exact_boundary_check,
    exact_eval,
    exact_solution,
    family_for,
    termwise_frac_deriv_oracle,
    termwise_frac_integral_oracle,
    verify_exact,
)
from fracvar.problems import leitmann_constants
from fracvar.quadrature import gauss_legendre, map_to_interval
from fracvar.specfun import SeriesConvergenceError, gamma, mittag_leffler

PLOT_SOLUTIONS = {
    "ex1": dict(alpha=0.5, p=5.0, epsilon=1.0),
    "ex2": dict(alpha=0.5, nu=1.0, epsilon=-1.0),
    "ex3": dict(alpha=0.75, epsilon=1.0),
    "ex4": dict(alpha=0.5, p=6.0, nu=1.0, epsilon=1.0),
    "ex5": dict(alpha=0.75, epsilon=0.0),
    "remark3": dict(alpha=0.5, epsilon=1.0),
}


def unit_rule(count=40):
    return map_to_interval(gauss_legendre(count), 0.0, 1.0)


class TestTermwiseOperators:
    def test_constant_derivative_image(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=0)
        assert termwise_frac_deriv_oracle(spec, 0, 0.3, 0.5) == pytest.approx(
            gamma(1.5), rel=1e-13
        )

    def test_degree_one_matching_order(self):
        # at derivative order alpha the image is the degree-1 Jacobi
        # polynomial (alpha, 0) scaled by gamma(alpha + 2)
        rng = np.random.default_rng(30)
        alpha = 0.6
        spec = BasisSpec(alpha=alpha, a=0.0, b=1.0, n=1)
        for x in rng.uniform(0.05, 1.0, size=10):
            t = 2.0 * x - 1.0
            p1 = 0.5 * (alpha + 2.0) * t + 0.5 * alpha
            expected = gamma(alpha + 2.0) * p1
            value = termwise_frac_deriv_oracle(spec, 1, float(x), alpha)
            assert value == pytest.approx(expected, rel=1e-10)

    def test_finite_at_endpoint_with_matching_order(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=4)
        value = termwise_frac_deriv_oracle(spec, 4, 1.0, 0.5)
        assert math.isfinite(value)

    def test_integral_of_single_power(self):
        # I^s (x-a)^alpha = gamma(alpha+1)/gamma(alpha+s+1) (x-a)^(alpha+s)
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=0)
        x, s = 0.7, 0.25
        expected = gamma(1.5) / gamma(1.75) * x**0.75
        assert termwise_frac_integral_oracle(spec, 0, x, s) == pytest.approx(
            expected, rel=1e-13
        )

    def test_shifted_interval(self):
        spec = BasisSpec(alpha=0.4, a=1.0, b=3.0, n=2)
        # monomial rule applied by hand to the k = 0 element
        x, s = 2.2, 0.3
        expected = gamma(1.4) / gamma(1.1) * (x - 1.0) ** 0.1
        assert termwise_frac_deriv_oracle(spec, 0, x, s) == pytest.approx(
            expected, rel=1e-13
        )


class TestExactSolutionConstruction:
    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            ExactSolution(kind="ex9", alpha=0.5, epsilon=1.0)

    def test_nonzero_left_endpoint_rejected(self):
        with pytest.raises(ValueError):
            exact_solution("ex1", alpha=0.5, epsilon=1.0, a=0.5)

    def test_plot_defaults_filled(self):
        sol = exact_solution("ex4", alpha=0.5, epsilon=1.0)
        assert sol.p == 6.0
        assert sol.nu == 1.0

    def test_family_round_trip(self):
        sol = exact_solution("ex2", alpha=0.5, nu=2.0, epsilon=0.5)
        fam = family_for(sol)
        assert fam.beta_order == pytest.approx(0.5)
        assert fam.g(1.0) == pytest.approx(math.exp(-2.0), rel=1e-14)


class TestExactEval:
    def test_remark3_value(self):
        sol = exact_solution("remark3", alpha=0.5, epsilon=1.0)
        assert exact_eval(sol, 1.0) == pytest.approx(1.0 / gamma(1.5), rel=1e-12)

    def test_remark3_scales_with_epsilon(self):
        zero = exact_solution("remark3", alpha=0.5, epsilon=0.0)
        assert exact_eval(zero, 0.37) == 0.0
        one = exact_solution("remark3", alpha=0.5, epsilon=1.0)
        three = exact_solution("remark3", alpha=0.5, epsilon=3.0)
        assert exact_eval(three, 0.37) == pytest.approx(3.0 * exact_eval(one, 0.37), rel=1e-13)

    def test_domain_excludes_left_endpoint(self):
        sol = exact_solution("remark3", alpha=0.5, epsilon=1.0)
        with pytest.raises(ValueError):
            exact_eval(sol, 0.0)

    def test_ex1_against_inline_formula(self):
        alpha, p, eps = 0.5, 5.0, 1.0
        sol = exact_solution("ex1", alpha=alpha, p=p, epsilon=eps)
        slope = 0.5 * (1.0 + eps) - 1.0
        for x in (0.2, 0.5, 0.9, 1.0):
            expected = (
                slope
                * (
                    math.gamma(p + 2.0) / math.gamma(p + alpha + 1.0) * x ** (p + alpha)
                    + x**alpha / math.gamma(alpha + 1.0)
                )
                + math.gamma(p + 1.0) / math.gamma(alpha + p) * x ** (p + alpha - 1.0)
            )
            assert exact_eval(sol, x) == pytest.approx(expected, rel=1e-13)

    def test_ex2_against_composition(self):
        # full solution as slope-scaled series plus Mittag-Leffler terms
        alpha, nu, eps = 0.5, 1.0, -1.0
        sol = exact_solution("ex2", alpha=alpha, nu=nu, epsilon=eps)
        slope = leitmann_constants(family_for(sol)).slope
        for x in (0.1, 0.6, 1.0):
            z = nu * x
            series = sum((k + 1.0) * z**k / math.gamma(k + alpha + 1.0) for k in range(80))
            expected = (
                slope * nu ** (-alpha) * z**alpha * series
                + x ** (alpha - 1.0) * mittag_leffler(1.0, alpha, z)
                - x ** (alpha - 1.0) / math.gamma(alpha)
            )
            assert exact_eval(sol, x) == pytest.approx(expected, rel=1e-12)

    def test_ex2_series_mittag_leffler_rearrangement(self):
        # sum (k+1) z^k / gamma(k+alpha+1) = E_{1,alpha}(z) + (1-alpha) E_{1,alpha+1}(z)
        alpha = 0.5
        for x in np.linspace(0.05, 1.0, 12):
            direct = sum((k + 1.0) * x**k / math.gamma(k + alpha + 1.0) for k in range(80))
            rearranged = mittag_leffler(1.0, alpha, x) + (1.0 - alpha) * mittag_leffler(
                1.0, alpha + 1.0, x
            )
            assert abs(direct - rearranged) <= 1e-12 * abs(rearranged)

    def test_ex3_against_composition(self):
        alpha, eps = 0.75, 1.0
        sol = exact_solution("ex3", alpha=alpha, epsilon=eps)
        slope = (eps + 1.0) / (1.0 + math.sin(1.0)) - 1.0
        for x in (0.25, 0.8, 1.0):
            series = sum(
                (2.0 * k + 2.0) * (-1.0) ** k / math.gamma(2.0 * k + alpha + 2.0)
                * x ** (2.0 * k + alpha + 1.0)
                for k in range(60)
            )
            expected = (
                slope * (series + x**alpha / math.gamma(1.0 + alpha))
                + x**alpha * mittag_leffler(2.0, alpha + 1.0, -(x**2))
            )
            assert exact_eval(sol, x) == pytest.approx(expected, rel=1e-12)

    def test_ex5_against_composition(self):
        alpha, eps = 0.75, 0.0
        sol = exact_solution("ex5", alpha=alpha, epsilon=eps)
        slope = eps / (1.0 + math.sin(1.0)) + math.cos(1.0) - 1.0
        for x in (0.3, 1.0):
            series = sum(
                (2.0 * k + 2.0) * (-1.0) ** k / math.gamma(2.0 * k + alpha + 2.0)
                * x ** (2.0 * k + alpha + 1.0)
                for k in range(60)
            )
            expected = (
                slope * (series + x**alpha / math.gamma(1.0 + alpha))
                + x ** (alpha - 1.0) / math.gamma(alpha)
                + x**alpha * mittag_leffler(2.0, 1.0 + alpha, -(x**2))
                - x**alpha * mittag_leffler(2.0, 1.0 + alpha, -4.0 * x**2)
                - x ** (alpha - 1.0) * mittag_leffler(2.0, alpha, -(x**2))
            )
            assert exact_eval(sol, x) == pytest.approx(expected, rel=1e-12)

    def test_series_cap_raises(self):
        constant_terms = ((1.0, 0.5) for _ in iter(int, 1))
        with pytest.raises(SeriesConvergenceError):
            _sum_component(constant_terms, 1.0, 1e-14)


class TestTranscriptionGates:
    @pytest.mark.parametrize("kind", sorted(PLOT_SOLUTIONS))
    def test_boundary_value(self, kind):
        sol = exact_solution(kind, **PLOT_SOLUTIONS[kind])
        assert exact_boundary_check(sol) <= 1e-7

    def test_remark3_boundary_is_exact(self):
        sol = exact_solution("remark3", alpha=0.5, epsilon=1.0)
        assert exact_boundary_check(sol) <= 1e-12

    @pytest.mark.parametrize("kind", sorted(PLOT_SOLUTIONS))
    def test_optimal_value(self, kind):
        sol = exact_solution(kind, **PLOT_SOLUTIONS[kind])
        assert verify_exact(sol, unit_rule()) <= 1e-6

    def test_remark3_optimal_value_tight(self):
        sol = exact_solution("remark3", alpha=0.5, epsilon=1.0)
        assert verify_exact(sol, unit_rule()) <= 1e-9

    def test_ex1_zero_slope_optimum(self):
        sol = exact_solution("ex1", alpha=0.5, p=5.0, epsilon=1.0)
        # slope vanishes at these parameters, so the optimum is 0
        assert leitmann_constants(family_for(sol)).slope == pytest.approx(0.0, abs=1e-15)
        assert verify_exact(sol, unit_rule()) <= 1e-7

    def test_ex2_optimum_is_one(self):
        sol = exact_solution("ex2", alpha=0.5, nu=1.0, epsilon=-1.0)
        rule = unit_rule()
        fam = family_for(sol)
        target = leitmann_constants(fam).slope ** 2 * (fam.b - fam.a)
        assert target == pytest.approx(1.0, rel=1e-14)
        assert verify_exact(sol, rule) <= 1e-6

    def test_gate_detects_tampered_constant(self, monkeypatch):
        # perturbing the minimizer's slope constant must trip both gates
        import fracvar.oracle as oracle_mod

        sol = exact_solution("ex3", alpha=0.75, epsilon=1.0)
        original = oracle_mod._slope
        monkeypatch.setattr(oracle_mod, "_slope", lambda s: original(s) * (1.0 + 1e-3))
        assert exact_boundary_check(sol) > 1e-7
        assert verify_exact(sol, unit_rule()) > 1e-6

    def test_wide_interval_remark3(self):
        sol = exact_solution("remark3", alpha=0.4, epsilon=0.7, b=2.0)
        assert exact_boundary_check(sol) <= 1e-12
        rule = map_to_interval(gauss_legendre(40), 0.0, 2.0)
        assert verify_exact(sol, rule) <= 1e-9
