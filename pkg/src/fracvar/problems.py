"""Variational problem definitions and finite-dimensional assembly.

A problem asks to minimize

    J[y] = integral_a^b F(x, y, D^alpha y, I^beta y) dx

subject to the boundary value I^(1-alpha) y(b) = y_b.  Expanding y in the
fractional Jacobi basis turns J into a function of the coefficient vector
(assembled here with a Gauss-Legendre rule) and the boundary value into one
linear equation.

The module also ships the closed-form family

    F = (g(x) dy + g'(x) iy + h'(x))^2,   I^beta y(b) = epsilon,

whose global minimizer is known analytically; its optimal objective value is
slope^2 (b - a) where slope is the constant value the integrand takes along
the minimizer.  The five built-in examples (ex1..ex5) and the g = 1, h = 0
special case (remark3) are registered in BUILTINS together with the
parameter sets used for the reference plots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fracbasis import (
    BasisSpec,
    basis_matrix,
    boundary_row,
    frac_deriv_matrix,
    frac_integral_matrix,
)
from .quadrature import QuadratureRule

__all__ = [
    "BUILTINS",
    "BuiltinProblem",
    "IntegrandError",
    "LeitmannConstants",
    "LeitmannFamily",
    "ProblemSpec",
    "assemble_objective",
    "constraint",
    "leitmann_constants",
    "leitmann_residuals",
    "leitmann_to_problem",
    "optimal_objective",
]

Integrand = Callable[[float, float, float, float], float]
ScalarFunc = Callable[[float], float]

DEFAULT_QUAD_COUNT = 40


class IntegrandError(RuntimeError):
    """Integrand evaluation failed at a quadrature node."""


@dataclass(frozen=True)
class LeitmannFamily:
    """Problem family with squared-affine integrand and known minimizer.

    g and h are C^1 on [a, b] with g nonvanishing; gp and hp are their
    derivatives, supplied analytically by the caller.  beta_order is the
    fractional-integral order in (0, 1); the derivative order of the
    matching general problem is 1 - beta_order.  epsilon is the boundary
    value of I^beta_order y at b.
    """

    g: ScalarFunc
    h: ScalarFunc
    gp: ScalarFunc
    hp: ScalarFunc
    beta_order: float
    epsilon: float
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.beta_order < 1.0:
            raise ValueError("beta_order must lie in (0, 1)")
        if not self.a < self.b:
            raise ValueError("interval endpoints must satisfy a < b")
        # g must not vanish on [a, b]; sample since g is only a callable.
        sample = np.linspace(self.a, self.b, 33)
        values = np.array([self.g(x) for x in sample])
        if np.any(np.abs(values) < 1e-12 * max(1.0, float(np.max(np.abs(values))))):
            raise ValueError("g must be nonvanishing on [a, b]")


@dataclass(frozen=True)
class LeitmannConstants:
    """Constants of the closed-form minimizer.

    slope is the constant value of the optimal integrand (the minimizer
    makes d/dx [g I^beta y + h] constant), so the optimal objective equals
    slope^2 (b - a).  slope x + intercept is the resulting linear function
    g I^beta y + h.
    """

    slope: float
    intercept: float


@dataclass(frozen=True)
class ProblemSpec:
    """General problem data: orders, interval, boundary value and integrand.

    beta = 0 means "no fractional integral term": the iy argument of the
    integrand is then fed y itself.  The integrand must be defined for all
    x in [a, b] and all finite (y, dy, iy), and free of shared mutable
    state.  leitmann carries the originating family when there is one,
    which lets solvers use the exact least-squares path.
    """

    alpha: float
    beta: float
    a: float
    b: float
    y_b: float
    integrand: Integrand
    quad_count: int = DEFAULT_QUAD_COUNT
    leitmann: LeitmannFamily | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")
        if not 0.0 <= self.beta < 1.0:
            raise ValueError("beta must lie in [0, 1)")
        if not self.a < self.b:
            raise ValueError("interval endpoints must satisfy a < b")
        if self.quad_count < 1:
            raise ValueError("quad_count must be positive")


def leitmann_constants(fam: LeitmannFamily) -> LeitmannConstants:
    """Slope and intercept of the family's closed-form minimizer."""
    width = fam.b - fam.a
    gb_eps = fam.g(fam.b) * fam.epsilon
    slope = (gb_eps + fam.h(fam.b) - fam.h(fam.a)) / width
    intercept = (fam.b * fam.h(fam.a) - fam.a * fam.h(fam.b) - fam.a * gb_eps) / width
    return LeitmannConstants(slope=slope, intercept=intercept)


def optimal_objective(fam: LeitmannFamily) -> float:
    """Exact minimum of the family's functional: slope^2 (b - a)."""
    return leitmann_constants(fam).slope ** 2 * (fam.b - fam.a)


def leitmann_to_problem(fam: LeitmannFamily, quad_count: int = DEFAULT_QUAD_COUNT) -> ProblemSpec:
    """General-problem view of a family: alpha = 1 - beta_order, squared integrand."""

    def integrand(x: float, y: float, dy: float, iy: float) -> float:
        r = fam.g(x) * dy + fam.gp(x) * iy + fam.hp(x)
        return r * r

    return ProblemSpec(
        alpha=1.0 - fam.beta_order,
        beta=fam.beta_order,
        a=fam.a,
        b=fam.b,
        y_b=fam.epsilon,
        integrand=integrand,
        quad_count=quad_count,
        leitmann=fam,
    )


def _check_assembly_inputs(spec: ProblemSpec, basis: BasisSpec, rule: QuadratureRule) -> None:
    if (basis.a, basis.b) != (spec.a, spec.b):
        raise ValueError("basis interval must equal the problem interval")
    if basis.alpha != spec.alpha:
        raise ValueError("basis order must equal the problem's derivative order")
    if rule.interval != (spec.a, spec.b):
        raise ValueError("quadrature rule must be mapped to the problem interval")


def _operator_tables(spec: ProblemSpec, basis: BasisSpec, rule: QuadratureRule):
    """Per-node tables of y, D^alpha y and I^beta y for every basis element."""
    nodes = rule.nodes
    values = basis_matrix(basis, nodes)
    derivs = frac_deriv_matrix(basis, nodes, spec.alpha)
    integrals = values if spec.beta == 0.0 else frac_integral_matrix(basis, nodes, spec.beta)
    return values, derivs, integrals


def assemble_objective(
    spec: ProblemSpec, basis: BasisSpec, rule: QuadratureRule
) -> Callable[[np.ndarray], float]:
    """Quadrature approximation of J as a plain function of the coefficients.

    The returned callable is deterministic (fixed ascending-node summation)
    and pure as long as the integrand is.  Integrand failures are re-raised
    as IntegrandError carrying the offending node index.
    """
    _check_assembly_inputs(spec, basis, rule)
    values, derivs, integrals = _operator_tables(spec, basis, rule)
    nodes = rule.nodes
    weights = rule.weights
    integrand = spec.integrand
    size = basis.size

    def objective(c) -> float:
        cv = np.asarray(c, dtype=float)
        if cv.shape != (size,):
            raise ValueError(f"coefficient vector must have length {size}")
        y = values @ cv
        dy = derivs @ cv
        iy = integrals @ cv
        total = 0.0
        for j in range(nodes.size):
            try:
                fj = integrand(float(nodes[j]), float(y[j]), float(dy[j]), float(iy[j]))
            except Exception as exc:
                raise IntegrandError(
                    f"integrand evaluation failed at node {j} (x={nodes[j]!r})"
                ) from exc
            total += weights[j] * fj
        return total

    return objective


def leitmann_residuals(
    spec: ProblemSpec, basis: BasisSpec, rule: QuadratureRule
) -> tuple[np.ndarray, np.ndarray]:
    """Per-node affine residuals of a family problem: J(c) = sum_j w_j (M c + d)_j^2.

    M[j, i] = g(x_j) D_i(x_j) + g'(x_j) I_i(x_j) and d[j] = h'(x_j), so each
    node residual is affine in the coefficients.
    """
    if spec.leitmann is None:
        raise ValueError("residual form requires a problem built from a LeitmannFamily")
    _check_assembly_inputs(spec, basis, rule)
    fam = spec.leitmann
    _, derivs, integrals = _operator_tables(spec, basis, rule)
    gv = np.array([fam.g(float(x)) for x in rule.nodes])
    gpv = np.array([fam.gp(float(x)) for x in rule.nodes])
    hpv = np.array([fam.hp(float(x)) for x in rule.nodes])
    matrix = gv[:, None] * derivs + gpv[:, None] * integrals
    return matrix, hpv


def constraint(spec: ProblemSpec, basis: BasisSpec) -> tuple[np.ndarray, float]:
    """Boundary condition as one linear equation row . c = y_b."""
    if (basis.a, basis.b) != (spec.a, spec.b) or basis.alpha != spec.alpha:
        raise ValueError("basis must match the problem interval and order")
    return boundary_row(basis), spec.y_b


# ---------------------------------------------------------------------------
# Built-in problem catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BuiltinProblem:
    """Named family constructor plus the parameter set used for its plot."""

    name: str
    description: str
    family: Callable[..., LeitmannFamily]
    parameters: tuple[str, ...]
    plot_params: dict[str, float]


def example1_family(
    alpha: float, p: float = 5.0, epsilon: float = 1.0, a: float = 0.0, b: float = 1.0
) -> LeitmannFamily:
    """g = h = 1/(1 + x^p)."""

    def g(x: float) -> float:
        return 1.0 / (1.0 + x**p)

    def gp(x: float) -> float:
        return -p * x ** (p - 1.0) / (1.0 + x**p) ** 2

    return LeitmannFamily(g=g, h=g, gp=gp, hp=gp, beta_order=1.0 - alpha, epsilon=epsilon, a=a, b=b)


def example2_family(
    alpha: float, nu: float = 1.0, epsilon: float = -1.0, a: float = 0.0, b: float = 1.0
) -> LeitmannFamily:
    """g = h = exp(-nu x)."""

    def g(x: float) -> float:
        return math.exp(-nu * x)

    def gp(x: float) -> float:
        return -nu * math.exp(-nu * x)

    return LeitmannFamily(g=g, h=g, gp=gp, hp=gp, beta_order=1.0 - alpha, epsilon=epsilon, a=a, b=b)


def example3_family(
    alpha: float, epsilon: float = 1.0, a: float = 0.0, b: float = 1.0
) -> LeitmannFamily:
    """g = h = 1/(1 + sin x)."""

    def g(x: float) -> float:
        return 1.0 / (1.0 + math.sin(x))

    def gp(x: float) -> float:
        return -math.cos(x) / (1.0 + math.sin(x)) ** 2

    return LeitmannFamily(g=g, h=g, gp=gp, hp=gp, beta_order=1.0 - alpha, epsilon=epsilon, a=a, b=b)


def example4_family(
    alpha: float,
    p: float = 6.0,
    nu: float = 1.0,
    epsilon: float = 1.0,
    a: float = 0.0,
    b: float = 1.0,
) -> LeitmannFamily:
    """g = 1/(1 + x^p), h = exp(-nu x)."""

    def g(x: float) -> float:
        return 1.0 / (1.0 + x**p)

    def gp(x: float) -> float:
        return -p * x ** (p - 1.0) / (1.0 + x**p) ** 2

    def h(x: float) -> float:
        return math.exp(-nu * x)

    def hp(x: float) -> float:
        return -nu * math.exp(-nu * x)

    return LeitmannFamily(g=g, h=h, gp=gp, hp=hp, beta_order=1.0 - alpha, epsilon=epsilon, a=a, b=b)


def example5_family(
    alpha: float, epsilon: float = 0.0, a: float = 0.0, b: float = 1.0
) -> LeitmannFamily:
    """g = 1/(1 + sin x), h = cos x."""

    def g(x: float) -> float:
        return 1.0 / (1.0 + math.sin(x))

    def gp(x: float) -> float:
        return -math.cos(x) / (1.0 + math.sin(x)) ** 2

    return LeitmannFamily(
        g=g, h=math.cos, gp=gp, hp=lambda x: -math.sin(x), beta_order=1.0 - alpha,
        epsilon=epsilon, a=a, b=b,
    )


def remark3_family(
    alpha: float, epsilon: float = 1.0, a: float = 0.0, b: float = 1.0
) -> LeitmannFamily:
    """g = 1, h = 0: minimize the squared derivative alone."""
    one = lambda x: 1.0  # noqa: E731
    zero = lambda x: 0.0  # noqa: E731
    return LeitmannFamily(
        g=one, h=zero, gp=zero, hp=zero, beta_order=1.0 - alpha, epsilon=epsilon, a=a, b=b
    )


BUILTINS: dict[str, BuiltinProblem] = {
    "ex1": BuiltinProblem(
        "ex1", "g = h = 1/(1 + x^p)", example1_family,
        ("alpha", "p", "epsilon", "a", "b"),
        {"alpha": 0.5, "p": 5.0, "epsilon": 1.0},
    ),
    "ex2": BuiltinProblem(
        "ex2", "g = h = exp(-nu x)", example2_family,
        ("alpha", "nu", "epsilon", "a", "b"),
        {"alpha": 0.5, "nu": 1.0, "epsilon": -1.0},
    ),
    "ex3": BuiltinProblem(
        "ex3", "g = h = 1/(1 + sin x)", example3_family,
        ("alpha", "epsilon", "a", "b"),
        {"alpha": 0.75, "epsilon": 1.0},
    ),
    "ex4": BuiltinProblem(
        "ex4", "g = 1/(1 + x^p), h = exp(-nu x)", example4_family,
        ("alpha", "p", "nu", "epsilon", "a", "b"),
        {"alpha": 0.5, "p": 6.0, "nu": 1.0, "epsilon": 1.0},
    ),
    "ex5": BuiltinProblem(
        "ex5", "g = 1/(1 + sin x), h = cos x", example5_family,
        ("alpha", "epsilon", "a", "b"),
        {"alpha": 0.75, "epsilon": 0.0},
    ),
    "remark3": BuiltinProblem(
        "remark3", "g = 1, h = 0 (squared fractional derivative)", remark3_family,
        ("alpha", "epsilon", "a", "b"),
        {"alpha": 0.5, "epsilon": 1.0},
    ),
}
