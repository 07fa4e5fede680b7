import numpy as np
import pytest

from fracvar.fracbasis import (
    BasisSpec,
    basis_element,
    basis_matrix,
    boundary_row,
    eval_frac_deriv,
    eval_frac_integral,
    eval_y,
    frac_deriv_matrix,
    frac_integral_matrix,
)
from fracvar.oracle import termwise_frac_deriv_oracle, termwise_frac_integral_oracle
from fracvar.specfun import gamma


def rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


class TestBasisSpec:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(alpha=0.0, a=0.0, b=1.0, n=2),
            dict(alpha=1.2, a=0.0, b=1.0, n=2),
            dict(alpha=0.5, a=1.0, b=1.0, n=2),
            dict(alpha=0.5, a=0.0, b=1.0, n=-1),
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            BasisSpec(**kwargs)

    def test_alpha_one_allowed(self):
        assert BasisSpec(alpha=1.0, a=0.0, b=2.0, n=3).size == 4


class TestBasisElement:
    def test_constant_element(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=0)
        assert basis_element(spec, 0, 0.25) == pytest.approx(0.5, rel=1e-14)

    def test_vanishes_at_left_endpoint(self):
        spec = BasisSpec(alpha=0.3, a=-1.0, b=2.0, n=4)
        for i in range(5):
            assert basis_element(spec, i, -1.0) == 0.0

    def test_endpoint_value(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=2)
        assert basis_element(spec, 2, 1.0) == pytest.approx(1.0, rel=1e-13)

    def test_index_error(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=2)
        with pytest.raises(IndexError):
            basis_element(spec, 3, 0.5)

    def test_out_of_interval(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=2)
        with pytest.raises(ValueError):
            basis_element(spec, 0, 1.5)


class TestEvalY:
    def test_zero_coefficients(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=3)
        assert eval_y(spec, np.zeros(4), 0.73) == 0.0

    def test_single_element(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=0)
        assert eval_y(spec, [2.0], 0.25) == pytest.approx(1.0, rel=1e-14)

    def test_endpoint_sum(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=1)
        assert eval_y(spec, [1.0, 1.0], 1.0) == pytest.approx(2.0, rel=1e-13)

    def test_length_mismatch(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=3)
        with pytest.raises(ValueError):
            eval_y(spec, [1.0, 2.0], 0.5)


class TestFracDeriv:
    def test_constant_image(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=0)
        value = eval_frac_deriv(spec, [1.0], 0.7, 0.5)
        assert value == pytest.approx(gamma(1.5), rel=1e-13)

    def test_linearity_zero(self):
        spec = BasisSpec(alpha=0.7, a=0.0, b=1.0, n=3)
        assert eval_frac_deriv(spec, np.zeros(4), 0.4, 0.3) == 0.0

    def test_single_element_vs_oracle(self):
        spec = BasisSpec(alpha=0.7, a=0.0, b=1.0, n=3)
        value = eval_frac_deriv(spec, [0.0, 0.0, 0.0, 1.0], 0.4, 0.3)
        ref = termwise_frac_deriv_oracle(spec, 3, 0.4, 0.3)
        assert rel(value, ref) <= 1e-10

    def test_left_endpoint_zero_when_order_below_alpha(self):
        spec = BasisSpec(alpha=0.8, a=0.0, b=1.0, n=2)
        assert eval_frac_deriv(spec, [1.0, 1.0, 1.0], 0.0, 0.3) == 0.0

    def test_left_endpoint_finite_limit_when_orders_match(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=1)
        # the image is a polynomial; at x = a it takes its t = -1 value
        value = eval_frac_deriv(spec, [0.0, 1.0], 0.0, 0.5)
        interior = eval_frac_deriv(spec, [0.0, 1.0], 1e-9, 0.5)
        assert value == pytest.approx(interior, abs=1e-7)

    def test_left_endpoint_domain_error(self):
        spec = BasisSpec(alpha=0.3, a=0.0, b=1.0, n=2)
        with pytest.raises(ValueError):
            eval_frac_deriv(spec, [1.0, 0.0, 0.0], 0.0, 0.8)

    def test_order_validation(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=2)
        with pytest.raises(ValueError):
            eval_frac_deriv(spec, np.ones(3), 0.5, 0.0)
        with pytest.raises(ValueError):
            eval_frac_deriv(spec, np.ones(3), 0.5, 1.5)

    def test_classical_order_one(self):
        # order 1 on the alpha = 1 basis is the plain derivative
        spec = BasisSpec(alpha=1.0, a=0.0, b=1.0, n=2)
        c = np.array([0.4, -0.3, 0.2])
        h = 1e-6
        for x in (0.3, 0.6, 0.9):
            numeric = (eval_y(spec, c, x + h) - eval_y(spec, c, x - h)) / (2.0 * h)
            assert eval_frac_deriv(spec, c, x, 1.0) == pytest.approx(numeric, abs=5e-9)


class TestFracIntegral:
    def test_zero_at_left_endpoint(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=3)
        assert eval_frac_integral(spec, [1.0, -2.0, 0.5, 3.0], 0.0, 0.25) == 0.0

    def test_halfth_integral_of_sqrt(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=0)
        value = eval_frac_integral(spec, [1.0], 1.0, 0.5)
        assert value == pytest.approx(gamma(1.5) / gamma(2.0), rel=1e-13)

    def test_single_element_vs_oracle(self):
        spec = BasisSpec(alpha=0.6, a=0.0, b=1.0, n=2)
        value = eval_frac_integral(spec, [0.0, 0.0, 1.0], 0.8, 0.25)
        ref = termwise_frac_integral_oracle(spec, 2, 0.8, 0.25)
        assert rel(value, ref) <= 1e-10

    def test_order_validation(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=2)
        with pytest.raises(ValueError):
            eval_frac_integral(spec, np.ones(3), 0.5, 1.0)


class TestImageIdentities:
    """Derivative/integral images against the independent monomial oracle."""

    @pytest.mark.parametrize("interval", [(0.0, 1.0), (1.0, 3.0)])
    @pytest.mark.parametrize("alpha", [0.3, 0.75])
    @pytest.mark.parametrize("order", [0.25, 0.9])
    def test_derivative_images(self, interval, alpha, order):
        a, b = interval
        spec = BasisSpec(alpha=alpha, a=a, b=b, n=8)
        xs = a + (0.01 + 0.99 * np.arange(20) / 19) * (b - a)
        images = frac_deriv_matrix(spec, xs, order)
        for k in range(9):
            for j, x in enumerate(xs):
                ref = termwise_frac_deriv_oracle(spec, k, float(x), order)
                assert rel(images[j, k], ref) <= 1e-9

    @pytest.mark.parametrize("interval", [(0.0, 1.0), (1.0, 3.0)])
    @pytest.mark.parametrize("alpha", [0.3, 0.75])
    @pytest.mark.parametrize("order", [0.25, 0.9])
    def test_integral_images(self, interval, alpha, order):
        a, b = interval
        spec = BasisSpec(alpha=alpha, a=a, b=b, n=8)
        xs = a + (0.01 + 0.99 * np.arange(20) / 19) * (b - a)
        images = frac_integral_matrix(spec, xs, order)
        for k in range(9):
            for j, x in enumerate(xs):
                ref = termwise_frac_integral_oracle(spec, k, float(x), order)
                assert rel(images[j, k], ref) <= 1e-9

    def test_matching_order_image_is_polynomial(self):
        # with derivative order = alpha the image has no fractional power;
        # a degree-n polynomial fit must reproduce it to rounding
        spec = BasisSpec(alpha=0.6, a=0.0, b=1.0, n=5)
        rng = np.random.default_rng(6)
        c = rng.normal(size=6)
        fit_x = np.cos(np.pi * np.arange(6) / 5.0) * 0.5 + 0.5
        fit_y = [eval_frac_deriv(spec, c, float(x), 0.6) for x in fit_x]
        poly = np.polynomial.polynomial.Polynomial.fit(fit_x, fit_y, deg=5)
        check_x = rng.uniform(0.0, 1.0, size=50)
        for x in check_x:
            assert rel(poly(x), eval_frac_deriv(spec, c, float(x), 0.6)) <= 1e-10


class TestBoundaryRow:
    def test_single_element(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=1.0, n=0)
        assert boundary_row(spec) == pytest.approx([gamma(1.5)], rel=1e-14)

    def test_classical_limit_all_ones(self):
        spec = BasisSpec(alpha=1.0, a=0.0, b=1.0, n=4)
        assert boundary_row(spec) == pytest.approx(np.ones(5), rel=1e-14)

    def test_wide_interval(self):
        spec = BasisSpec(alpha=0.5, a=0.0, b=2.0, n=1)
        expected = [2.0 * gamma(1.5), gamma(2.5) / 2.0]
        assert boundary_row(spec) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("alpha", [0.15, 0.5, 0.85])
    @pytest.mark.parametrize("interval", [(0.0, 1.0), (1.0, 3.0)])
    def test_matches_integral_image_at_endpoint(self, alpha, interval):
        a, b = interval
        spec = BasisSpec(alpha=alpha, a=a, b=b, n=6)
        rng = np.random.default_rng(8)
        c = rng.normal(size=7)
        lhs = float(boundary_row(spec) @ c)
        rhs = eval_frac_integral(spec, c, b, 1.0 - alpha)
        assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(rhs))


class TestLinearityAndBatch:
    def test_linearity(self):
        spec = BasisSpec(alpha=0.45, a=0.0, b=1.0, n=4)
        rng = np.random.default_rng(9)
        c1 = rng.normal(size=5)
        c2 = rng.normal(size=5)
        s, t = 1.7, -0.4
        for x in (0.2, 0.8):
            for fn, order in (
                (eval_y, None),
                (eval_frac_deriv, 0.45),
                (eval_frac_integral, 0.3),
            ):
                if order is None:
                    combined = fn(spec, s * c1 + t * c2, x)
                    split = s * fn(spec, c1, x) + t * fn(spec, c2, x)
                else:
                    combined = fn(spec, s * c1 + t * c2, x, order)
                    split = s * fn(spec, c1, x, order) + t * fn(spec, c2, x, order)
                assert rel(combined, split) <= 1e-11

    def test_batch_matches_scalar(self):
        spec = BasisSpec(alpha=0.45, a=0.0, b=1.0, n=4)
        xs = np.array([0.1, 0.5, 1.0])
        table = basis_matrix(spec, xs)
        for j, x in enumerate(xs):
            for i in range(5):
                assert table[j, i] == basis_element(spec, i, float(x))
