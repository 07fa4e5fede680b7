"""Gauss-Legendre quadrature rules on arbitrary intervals.

Nodes are the roots of the Legendre polynomial, located by Newton iteration
from Chebyshev-type initial guesses; weights follow from the standard
derivative formula.  A (k+1)-point rule integrates polynomials of degree
up to 2k+1 exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["QuadratureRule", "gauss_legendre", "map_to_interval"]

MAX_POINT_COUNT = 256
_NEWTON_TOL = 1e-15
_NEWTON_MAX_STEPS = 100


@dataclass(frozen=True)
class QuadratureRule:
    """Immutable quadrature rule: nodes, positive weights and the interval.

    Nodes are strictly increasing and lie in the open interval; the weights
    sum to the interval length (the rule integrates constants exactly).
    """

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        a, b = self.interval
        if not a < b:
            raise ValueError("interval endpoints must satisfy a < b")
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be matching 1-d arrays")
        if not (np.all(np.diff(nodes) > 0.0) and nodes[0] > a and nodes[-1] < b):
            raise ValueError("nodes must be strictly increasing inside the open interval")
        if not np.all(weights > 0.0):
            raise ValueError("weights must all be positive")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return self.nodes.size


def _legendre_with_derivative(degree: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Legendre P_degree and its derivative at interior points |x| < 1."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for m in range(1, degree):
        p, p_prev = ((2 * m + 1) * x * p - m * p_prev) / (m + 1), p
    dp = degree * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def gauss_legendre(count: int) -> QuadratureRule:
    """Gauss-Legendre rule with `count` points on [-1, 1].

    Raises RuntimeError if the Newton iteration fails to converge within
    100 steps (does not happen for counts up to 256).
    """
    if not 1 <= count <= MAX_POINT_COUNT:
        raise ValueError(f"point count must lie in [1, {MAX_POINT_COUNT}]")
    k = np.arange(count)
    # Chebyshev-type initial guesses, descending in x.
    x = np.cos(np.pi * (4.0 * k + 3.0) / (4.0 * count + 2.0))
    dp = np.ones_like(x)
    for _ in range(_NEWTON_MAX_STEPS):
        p, dp = _legendre_with_derivative(count, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= _NEWTON_TOL:
            break
    else:
        raise RuntimeError("Newton iteration for Legendre roots did not converge")
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    return QuadratureRule(nodes=x[order], weights=w[order], interval=(-1.0, 1.0))


def map_to_interval(rule: QuadratureRule, a: float, b: float) -> QuadratureRule:
    """Affine image of a rule on [-1, 1] onto [a, b]; weights scale by (b-a)/2."""
    if not a < b:
        raise ValueError("interval endpoints must satisfy a < b")
    nodes = a + (b - a) * (rule.nodes + 1.0) / 2.0
    weights = rule.weights * (b - a) / 2.0
    return QuadratureRule(nodes=nodes, weights=weights, interval=(float(a), float(b)))
