"""Self-verification suites: closed-form identities and transcription gates.

Each suite sweeps an identity that must hold by construction and reports the
worst deviation it saw.  A fresh build passes everything; a failure points
at a broken formula (or a deliberately perturbed one -- the derivative-image
suite must notice a 1e-6 relative perturbation of its gamma-ratio hook).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fracbasis import BasisSpec, boundary_row, frac_deriv_matrix, frac_integral_matrix
from .oracle import (
    exact_boundary_check,
    exact_solution,
    termwise_frac_deriv_oracle,
    termwise_frac_integral_oracle,
    verify_exact,
)
from .problems import BUILTINS
from .quadrature import gauss_legendre, map_to_interval
from .specfun import JacobiIndex, jacobi_eval, jacobi_eval_explicit

__all__ = ["SuiteResult", "run_all_suites"]

SWEEP_ALPHAS = (0.3, 0.5, 0.75, 1.0)
SWEEP_ORDERS = (0.1, 0.25, 0.5, 0.9)
SWEEP_INTERVALS = ((0.0, 1.0), (1.0, 3.0))
SWEEP_MAX_DEGREE = 8
SWEEP_POINTS = 50


@dataclass(frozen=True)
class SuiteResult:
    """Worst deviation seen by one suite, with its pass threshold."""

    name: str
    worst: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.worst <= self.tolerance


def _sweep_points(a: float, b: float) -> np.ndarray:
    # Interior points biased away from the left endpoint, endpoint b included.
    return a + (0.01 + 0.99 * np.arange(SWEEP_POINTS) / (SWEEP_POINTS - 1)) * (b - a)


def derivative_image_deviation() -> float:
    """Worst relative gap between derivative images and the monomial oracle."""
    worst = 0.0
    for a, b in SWEEP_INTERVALS:
        xs = _sweep_points(a, b)
        for alpha in SWEEP_ALPHAS:
            spec = BasisSpec(alpha=alpha, a=a, b=b, n=SWEEP_MAX_DEGREE)
            for order in SWEEP_ORDERS:
                images = frac_deriv_matrix(spec, xs, order)
                for k in range(SWEEP_MAX_DEGREE + 1):
                    oracle = np.array(
                        [termwise_frac_deriv_oracle(spec, k, float(x), order) for x in xs]
                    )
                    gap = np.abs(images[:, k] - oracle) / np.maximum(1.0, np.abs(oracle))
                    worst = max(worst, float(np.max(gap)))
    return worst


def integral_image_deviation() -> float:
    """Worst relative gap between integral images and the monomial oracle."""
    worst = 0.0
    for a, b in SWEEP_INTERVALS:
        xs = _sweep_points(a, b)
        for alpha in SWEEP_ALPHAS:
            spec = BasisSpec(alpha=alpha, a=a, b=b, n=SWEEP_MAX_DEGREE)
            for order in SWEEP_ORDERS:
                images = frac_integral_matrix(spec, xs, order)
                for k in range(SWEEP_MAX_DEGREE + 1):
                    oracle = np.array(
                        [termwise_frac_integral_oracle(spec, k, float(x), order) for x in xs]
                    )
                    gap = np.abs(images[:, k] - oracle) / np.maximum(1.0, np.abs(oracle))
                    worst = max(worst, float(np.max(gap)))
    return worst


def jacobi_cross_deviation(max_degree: int = 9) -> float:
    """Recurrence vs explicit-sum Jacobi values on the index families in use.

    The explicit alternating sum cancels increasingly past degree ~10, so
    the sweep stops where it is still a trustworthy oracle.
    """
    worst = 0.0
    ts = np.linspace(-1.0, 1.0, 41)
    pairs = []
    for alpha in SWEEP_ALPHAS:
        pairs.append((0.0, alpha))
        pairs.append((alpha, 0.0))
        pairs.append((alpha - 1.0, 1.0))
        for order in SWEEP_ORDERS:
            pairs.append((order, alpha - order))
            pairs.append((-order, alpha + order))
    for p, q in pairs:
        for degree in range(max_degree + 1):
            idx = JacobiIndex(p, q, degree)
            for t in ts:
                ref = jacobi_eval_explicit(idx, float(t))
                val = jacobi_eval(idx, float(t))
                worst = max(worst, abs(val - ref) / max(1.0, abs(ref)))
    return worst


def boundary_row_deviation() -> float:
    """Boundary row against the integral image evaluated at the endpoint."""
    rng = np.random.default_rng(20260810)
    worst = 0.0
    for alpha in (0.1, 0.3, 0.5, 0.7, 0.9, 0.99):
        for a, b in SWEEP_INTERVALS:
            spec = BasisSpec(alpha=alpha, a=a, b=b, n=6)
            row = boundary_row(spec)
            c = rng.normal(size=spec.size)
            lhs = float(row @ c)
            rhs = float((frac_integral_matrix(spec, b, 1.0 - alpha) @ c)[0])
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst


def quadrature_exactness_deviation() -> float:
    """Mapped rules against exact monomial integrals on [0, 1]."""
    worst = 0.0
    for count in (2, 4, 8, 16, 32):
        rule = map_to_interval(gauss_legendre(count), 0.0, 1.0)
        for m in range(2 * count):
            approx = float(rule.weights @ rule.nodes**m)
            worst = max(worst, abs(approx - 1.0 / (m + 1)))
    return worst


def _plot_solutions():
    return {name: exact_solution(name, **b.plot_params) for name, b in BUILTINS.items()}


def exact_boundary_deviation() -> float:
    """Worst boundary-value deviation of the closed forms at plot parameters."""
    return max(exact_boundary_check(sol) for sol in _plot_solutions().values())


def optimal_value_deviation(quad_count: int = 40) -> float:
    """Worst deviation of the functional along each closed form from its optimum."""
    worst = 0.0
    for sol in _plot_solutions().values():
        rule = map_to_interval(gauss_legendre(quad_count), sol.a, sol.b)
        worst = max(worst, verify_exact(sol, rule))
    return worst


def run_all_suites() -> list[SuiteResult]:
    """Every identity suite with its pass threshold, in report order."""
    return [
        SuiteResult("jacobi-recurrence-vs-explicit", jacobi_cross_deviation(), 1e-9),
        SuiteResult("derivative-images-vs-monomial-oracle", derivative_image_deviation(), 1e-9),
        SuiteResult("integral-images-vs-monomial-oracle", integral_image_deviation(), 1e-9),
        SuiteResult("boundary-row-vs-integral-image", boundary_row_deviation(), 1e-11),
        SuiteResult("quadrature-monomial-exactness", quadrature_exactness_deviation(), 1e-13),
        SuiteResult("exact-solution-boundary-values", exact_boundary_deviation(), 1e-7),
        SuiteResult("exact-solution-optimal-values", optimal_value_deviation(), 1e-6),
    ]
