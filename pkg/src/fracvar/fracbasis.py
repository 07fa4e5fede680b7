"""The fractional Jacobi trial basis and its fractional-calculus images.

The trial functions are (x-a)^alpha P_i^(0, alpha)(t(x)) with
t(x) = 2(x-a)/(b-a) - 1.  Their Riemann-Liouville derivatives and integrals
(left-sided, based at a) are again scaled Jacobi polynomials:

    D^s: gamma(i+alpha+1)/gamma(i+alpha-s+1) (x-a)^(alpha-s) P_i^(s, alpha-s)(t)
    I^s: gamma(i+alpha+1)/gamma(i+alpha+s+1) (x-a)^(alpha+s) P_i^(-s, alpha+s)(t)

so objective assembly never needs numerical fractional calculus.  Batch
builders return one (points x degrees) table; evaluation at x = b uses the
closed-form endpoint value instead of the recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import JacobiIndex, gamma, jacobi_at_one, jacobi_table, pochhammer

__all__ = [
    "BasisSpec",
    "basis_element",
    "basis_matrix",
    "boundary_row",
    "eval_frac_deriv",
    "eval_frac_integral",
    "eval_y",
    "frac_deriv_matrix",
    "frac_integral_matrix",
]

# Test hook: scales the gamma-ratio factor of the derivative images by
# (1 + value).  The verification suite must detect a 1e-6 perturbation.
_DERIV_RATIO_PERTURBATION = 0.0


@dataclass(frozen=True)
class BasisSpec:
    """Fractional Jacobi basis: order alpha in (0, 1], interval [a, b], degree n.

    The basis has n+1 elements; every element vanishes like (x-a)^alpha at
    the left endpoint.
    """

    alpha: float
    a: float
    b: float
    n: int

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")
        if not self.a < self.b:
            raise ValueError("interval endpoints must satisfy a < b")
        if self.n < 0 or self.n != int(self.n):
            raise ValueError("truncation degree n must be a nonnegative integer")

    @property
    def size(self) -> int:
        return self.n + 1


def _as_points(spec: BasisSpec, x) -> np.ndarray:
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xv < spec.a) or np.any(xv > spec.b):
        raise ValueError("evaluation points must lie in [a, b]")
    return xv


def _unit_points(spec: BasisSpec, xv: np.ndarray) -> np.ndarray:
    t = 2.0 * (xv - spec.a) / (spec.b - spec.a) - 1.0
    return np.clip(t, -1.0, 1.0)


def _jacobi_columns(a_idx: float, b_idx: float, t: np.ndarray, max_degree: int) -> np.ndarray:
    """Jacobi table over t; rows at t == 1 use the closed endpoint value."""
    table = jacobi_table(a_idx, b_idx, t, max_degree)
    at_one = t == 1.0
    if np.any(at_one):
        endpoint = np.array(
            [jacobi_at_one(JacobiIndex(a_idx, b_idx, i)) for i in range(max_degree + 1)]
        )
        table[at_one, :] = endpoint
    return table


def _coeffs(spec: BasisSpec, c) -> np.ndarray:
    cv = np.asarray(c, dtype=float)
    if cv.ndim != 1 or cv.size != spec.size:
        raise ValueError(f"coefficient vector must have length {spec.size}, got shape {cv.shape}")
    return cv


def basis_matrix(spec: BasisSpec, x) -> np.ndarray:
    """Table of basis values, shape (len(x), n+1)."""
    xv = _as_points(spec, x)
    t = _unit_points(spec, xv)
    table = _jacobi_columns(0.0, spec.alpha, t, spec.n)
    return np.power(xv - spec.a, spec.alpha)[:, None] * table


def frac_deriv_matrix(spec: BasisSpec, x, order: float) -> np.ndarray:
    """Table of Riemann-Liouville derivative images of order `order`.

    Orders in (0, 1] are supported (order 1 is the classical derivative of
    the alpha = 1 basis).  At x = a the image carries (x-a)^(alpha-order):
    zero when alpha > order, finite when alpha == order, and undefined when
    alpha < order (domain error).
    """
    if not 0.0 < order <= 1.0:
        raise ValueError("derivative order must lie in (0, 1]")
    xv = _as_points(spec, x)
    exponent = spec.alpha - order
    if exponent < 0.0 and np.any(xv == spec.a):
        raise ValueError(
            "derivative image is singular at x = a when the derivative order exceeds alpha"
        )
    t = _unit_points(spec, xv)
    table = _jacobi_columns(order, spec.alpha - order, t, spec.n)
    ratios = np.array(
        [gamma(i + spec.alpha + 1.0) / gamma(i + spec.alpha - order + 1.0) for i in range(spec.size)]
    )
    ratios = ratios * (1.0 + _DERIV_RATIO_PERTURBATION)
    return np.power(xv - spec.a, exponent)[:, None] * table * ratios[None, :]


def frac_integral_matrix(spec: BasisSpec, x, order: float) -> np.ndarray:
    """Table of Riemann-Liouville integral images of order `order` in (0, 1)."""
    if not 0.0 < order < 1.0:
        raise ValueError("integral order must lie in (0, 1)")
    xv = _as_points(spec, x)
    t = _unit_points(spec, xv)
    table = _jacobi_columns(-order, spec.alpha + order, t, spec.n)
    ratios = np.array(
        [gamma(i + spec.alpha + 1.0) / gamma(i + spec.alpha + order + 1.0) for i in range(spec.size)]
    )
    return np.power(xv - spec.a, spec.alpha + order)[:, None] * table * ratios[None, :]


def basis_element(spec: BasisSpec, i: int, x: float) -> float:
    """Value of the i-th basis element (x-a)^alpha P_i^(0, alpha)(t(x))."""
    if not 0 <= i <= spec.n:
        raise IndexError(f"basis index {i} out of range 0..{spec.n}")
    return float(basis_matrix(spec, x)[0, i])


def eval_y(spec: BasisSpec, c, x: float) -> float:
    """Value of the expansion with coefficients c at x."""
    cv = _coeffs(spec, c)
    return float((basis_matrix(spec, x) @ cv)[0])


def eval_frac_deriv(spec: BasisSpec, c, x: float, order: float) -> float:
    """Riemann-Liouville derivative of the expansion, order in (0, 1], at x."""
    cv = _coeffs(spec, c)
    return float((frac_deriv_matrix(spec, x, order) @ cv)[0])


def eval_frac_integral(spec: BasisSpec, c, x: float, order: float) -> float:
    """Riemann-Liouville integral of the expansion, order in (0, 1), at x."""
    cv = _coeffs(spec, c)
    return float((frac_integral_matrix(spec, x, order) @ cv)[0])


def boundary_row(spec: BasisSpec) -> np.ndarray:
    """Row r with r . c = I^(1-alpha) of the expansion evaluated at x = b.

    In closed form r_i = (b-a) gamma(i+alpha+1)/gamma(i+2) (alpha)_i / i!,
    using the exact endpoint values of the integral-image polynomials.
    """
    out = np.empty(spec.size)
    for i in range(spec.size):
        out[i] = (
            (spec.b - spec.a)
            * gamma(i + spec.alpha + 1.0)
            / gamma(i + 2.0)
            * pochhammer(spec.alpha, i)
            / math.factorial(i)
        )
    return out
