import math

import numpy as np
import pytest

from fracvar.quadrature import QuadratureRule, gauss_legendre, map_to_interval


class TestGaussLegendre:
    def test_one_point(self):
        rule = gauss_legendre(1)
        assert rule.nodes == pytest.approx([0.0], abs=1e-15)
        assert rule.weights == pytest.approx([2.0], rel=1e-15)

    def test_two_points(self):
        rule = gauss_legendre(2)
        s = 1.0 / math.sqrt(3.0)
        assert rule.nodes == pytest.approx([-s, s], rel=1e-15)
        assert rule.weights == pytest.approx([1.0, 1.0], rel=1e-15)

    def test_three_points(self):
        rule = gauss_legendre(3)
        s = math.sqrt(3.0 / 5.0)
        assert rule.nodes == pytest.approx([-s, 0.0, s], rel=1e-15, abs=1e-15)
        assert rule.weights == pytest.approx([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0], rel=1e-15)

    @pytest.mark.parametrize("count", [2, 4, 8, 16, 32])
    def test_monomial_exactness(self, count):
        rule = map_to_interval(gauss_legendre(count), 0.0, 1.0)
        for m in range(2 * count):
            approx = float(rule.weights @ rule.nodes**m)
            assert abs(approx - 1.0 / (m + 1)) <= 1e-13

    @pytest.mark.parametrize("count", [2, 5, 16, 33, 64])
    def test_symmetry(self, count):
        rule = gauss_legendre(count)
        assert np.max(np.abs(rule.nodes + rule.nodes[::-1])) <= 1e-14
        assert np.max(np.abs(rule.weights - rule.weights[::-1])) <= 1e-14

    @pytest.mark.parametrize("count", [1, 3, 17, 40, 256])
    def test_weights_sum_to_length(self, count):
        rule = gauss_legendre(count)
        assert abs(float(np.sum(rule.weights)) - 2.0) <= 1e-13

    def test_against_numpy_reference(self):
        rule = gauss_legendre(40)
        ref_nodes, ref_weights = np.polynomial.legendre.leggauss(40)
        assert np.max(np.abs(rule.nodes - ref_nodes)) <= 1e-14
        assert np.max(np.abs(rule.weights - ref_weights)) <= 1e-14

    @pytest.mark.parametrize("count", [0, -2, 257])
    def test_count_validation(self, count):
        with pytest.raises(ValueError):
            gauss_legendre(count)


class TestMapToInterval:
    def test_unit_interval(self):
        rule = map_to_interval(gauss_legendre(1), 0.0, 1.0)
        assert rule.nodes == pytest.approx([0.5], rel=1e-15)
        assert rule.weights == pytest.approx([1.0], rel=1e-15)
        assert rule.interval == (0.0, 1.0)

    def test_two_point_image(self):
        rule = map_to_interval(gauss_legendre(2), 0.0, 2.0)
        s = 1.0 / math.sqrt(3.0)
        assert rule.nodes == pytest.approx([1.0 - s, 1.0 + s], rel=1e-15)
        assert rule.weights == pytest.approx([1.0, 1.0], rel=1e-15)

    def test_identity_map(self):
        base = gauss_legendre(7)
        mapped = map_to_interval(base, -1.0, 1.0)
        assert np.max(np.abs(mapped.nodes - base.nodes)) <= 1e-15
        assert np.max(np.abs(mapped.weights - base.weights)) <= 1e-15

    def test_rejects_bad_interval(self):
        with pytest.raises(ValueError):
            map_to_interval(gauss_legendre(2), 1.0, 1.0)
        with pytest.raises(ValueError):
            map_to_interval(gauss_legendre(2), 2.0, 0.0)


class TestQuadratureRuleInvariants:
    def test_rejects_unsorted_nodes(self):
        with pytest.raises(ValueError):
            QuadratureRule(np.array([0.5, 0.1]), np.array([1.0, 1.0]), (0.0, 1.0))

    def test_rejects_nodes_at_endpoints(self):
        with pytest.raises(ValueError):
            QuadratureRule(np.array([0.0, 0.5]), np.array([1.0, 1.0]), (0.0, 1.0))

    def test_rejects_nonpositive_weights(self):
        with pytest.raises(ValueError):
            QuadratureRule(np.array([0.2, 0.5]), np.array([1.0, -1.0]), (0.0, 1.0))

    def test_rule_is_frozen(self):
        rule = gauss_legendre(3)
        with pytest.raises(ValueError):
            rule.nodes[0] = 0.0
