"""Independent ground truth for testing and verification.

Two unrelated instruments live here:

* Termwise monomial-rule operators.  A basis element expands into a finite
  sum of monomials (x-a)^(m+alpha); applying the Riemann-Liouville monomial
  rules term by term gives the fractional derivative/integral without ever
  touching the Jacobi-image formulas, so these are genuinely independent
  checks of the image path (they share only scalar special functions).

* Closed-form exact minimizers of the built-in family problems.  Each is
  represented as a sum of fractional power series sum_k coef_k x^power_k,
  which makes the solution value, its fractional derivative and its
  fractional integral all available term by term.  Two gate checks guard
  the transcriptions: the boundary value of I^(1-alpha) y at b must give
  back epsilon, and the functional evaluated along the exact solution must
  equal slope^2 (b - a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

from . import problems
from .fracbasis import BasisSpec
from .problems import LeitmannFamily, leitmann_constants
from .quadrature import QuadratureRule
from .specfun import SeriesConvergenceError, gamma, pochhammer, recip_gamma

__all__ = [
    "ExactSolution",
    "exact_boundary_check",
    "exact_eval",
    "exact_solution",
    "family_for",
    "termwise_frac_deriv_oracle",
    "termwise_frac_integral_oracle",
    "verify_exact",
]

SERIES_MAX_TERMS = 500


# ---------------------------------------------------------------------------
# Termwise monomial-rule operators
# ---------------------------------------------------------------------------


def _monomial_coefficients(spec: BasisSpec, k: int) -> list[float]:
    """Coefficients q_m of the basis element as sum_m q_m (x-a)^(m+alpha) / (b-a)^m."""
    coeffs = []
    for m in range(k + 1):
        coeffs.append(
            (-1.0) ** (k - m)
            * pochhammer(1.0 + spec.alpha, k + m)
            / (math.factorial(m) * math.factorial(k - m) * pochhammer(1.0 + spec.alpha, m))
        )
    return coeffs


def termwise_frac_deriv_oracle(spec: BasisSpec, k: int, x: float, order: float) -> float:
    """D^order of basis element k at x, via the monomial expansion.

    Expands the element into monomials and applies
    D^s (x-a)^(m+alpha) = gamma(m+alpha+1)/gamma(m+alpha-s+1) (x-a)^(m+alpha-s)
    term by term.  Only trustworthy for k <= 12 (alternating sum).
    """
    total = 0.0
    base = x - spec.a
    width = spec.b - spec.a
    for m, q in enumerate(_monomial_coefficients(spec, k)):
        ratio = gamma(m + spec.alpha + 1.0) * recip_gamma(m + spec.alpha - order + 1.0)
        total += q * ratio * base ** (m + spec.alpha - order) / width**m
    return total


def termwise_frac_integral_oracle(spec: BasisSpec, k: int, x: float, order: float) -> float:
    """I^order of basis element k at x, via the monomial expansion."""
    total = 0.0
    base = x - spec.a
    width = spec.b - spec.a
    for m, q in enumerate(_monomial_coefficients(spec, k)):
        ratio = gamma(m + spec.alpha + 1.0) / gamma(m + spec.alpha + order + 1.0)
        total += q * ratio * base ** (m + spec.alpha + order) / width**m
    return total


# ---------------------------------------------------------------------------
# Closed-form exact minimizers
# ---------------------------------------------------------------------------

#: One fractional power term coef * x**power.  A component is either a
#: finite list of terms (summed in full) or a generator yielding an infinite
#: series (summed with truncation).
Term = tuple[float, float]
Component = list[Term] | Iterator[Term]


@dataclass(frozen=True)
class ExactSolution:
    """Closed-form minimizer of one built-in problem.

    kind is a BUILTINS key.  The formulas are written for a left endpoint
    at 0 (they contain plain powers of x); remark3 additionally carries a
    correction term proportional to the left endpoint.  Values are defined
    on (a, b] only: every solution has an x^(alpha-1)-type singular term
    at 0.
    """

    kind: str
    alpha: float
    epsilon: float
    p: float | None = None
    nu: float | None = None
    a: float = 0.0
    b: float = 1.0
    series_tol: float = 1e-14

    def __post_init__(self) -> None:
        if self.kind not in problems.BUILTINS:
            raise ValueError(f"unknown solution kind {self.kind!r}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.kind != "remark3" and self.a != 0.0:
            raise ValueError("the closed-form solutions are written for a left endpoint at 0")
        if not self.a < self.b:
            raise ValueError("interval endpoints must satisfy a < b")
        # Fill g-exponent / decay-rate defaults from the plot parameter sets.
        builtin = problems.BUILTINS[self.kind]
        if "p" in builtin.parameters and self.p is None:
            object.__setattr__(self, "p", builtin.plot_params["p"])
        if "nu" in builtin.parameters and self.nu is None:
            object.__setattr__(self, "nu", builtin.plot_params["nu"])


def exact_solution(kind: str, **params) -> ExactSolution:
    """Build an ExactSolution for a BUILTINS key, e.g. exact_solution("ex2", alpha=0.5, nu=1.0, epsilon=-1.0)."""
    return ExactSolution(kind=kind, **params)


def family_for(sol: ExactSolution) -> LeitmannFamily:
    """The LeitmannFamily whose minimizer this solution is."""
    builtin = problems.BUILTINS[sol.kind]
    params: dict[str, float] = {"alpha": sol.alpha, "epsilon": sol.epsilon, "a": sol.a, "b": sol.b}
    if "p" in builtin.parameters:
        params["p"] = sol.p
    if "nu" in builtin.parameters:
        params["nu"] = sol.nu
    return builtin.family(**params)


def _slope(sol: ExactSolution) -> float:
    return leitmann_constants(family_for(sol)).slope


def _components(sol: ExactSolution) -> list[Component]:
    """The solution as a list of fractional power series components."""
    al = sol.alpha
    slope = _slope(sol)

    if sol.kind == "remark3":
        width = sol.b - sol.a
        return [
            [
                (sol.epsilon / (width * gamma(1.0 + al)), al),
                (-sol.epsilon * sol.a / (width * gamma(al)), al - 1.0),
            ]
        ]

    if sol.kind == "ex1":
        p = float(sol.p)
        return [
            [
                (slope * gamma(p + 2.0) / gamma(p + al + 1.0), p + al),
                (slope / gamma(al + 1.0), al),
                (gamma(p + 1.0) / gamma(al + p), p + al - 1.0),
            ]
        ]

    if sol.kind == "ex2":
        nu = float(sol.nu)

        def scaled_exp_like() -> Iterator[Term]:
            k = 0
            while True:
                yield slope * (k + 1.0) * nu**k * recip_gamma(k + al + 1.0), k + al
                k += 1

        def ml_one() -> Iterator[Term]:
            k = 0
            while True:
                yield nu**k * recip_gamma(k + al), k + al - 1.0
                k += 1

        return [scaled_exp_like(), ml_one(), [(-1.0 / gamma(al), al - 1.0)]]

    if sol.kind == "ex3":

        def sine_part() -> Iterator[Term]:
            k = 0
            while True:
                yield slope * (2.0 * k + 2.0) * (-1.0) ** k * recip_gamma(2.0 * k + al + 2.0), 2.0 * k + al + 1.0
                k += 1

        def ml_two() -> Iterator[Term]:
            k = 0
            while True:
                yield (-1.0) ** k * recip_gamma(2.0 * k + al + 1.0), 2.0 * k + al
                k += 1

        return [sine_part(), [(slope / gamma(1.0 + al), al)], ml_two()]

    if sol.kind == "ex4":
        p = float(sol.p)
        nu = float(sol.nu)

        def exp_singular() -> Iterator[Term]:
            k = 0
            while True:
                yield -((-nu) ** k) * recip_gamma(k + al), k + al - 1.0
                k += 1

        def shifted_exp() -> Iterator[Term]:
            # gamma(k+p+1)/gamma(k+p+al) grows only like k^(1-al); evaluate
            # the ratio in log space so large k cannot overflow it.
            k = 0
            while True:
                ratio = math.exp(math.lgamma(k + p + 1.0) - math.lgamma(k + p + al))
                yield -ratio * (-nu) ** k / math.factorial(k), k + p + al - 1.0
                k += 1

        return [
            [
                (slope * gamma(p + 2.0) / gamma(p + al + 1.0), p + al),
                (slope / gamma(al + 1.0), al),
                (1.0 / gamma(al), al - 1.0),
                (gamma(p + 1.0) / gamma(al + p), p + al - 1.0),
            ],
            exp_singular(),
            shifted_exp(),
        ]

    if sol.kind == "ex5":

        def sine_part() -> Iterator[Term]:
            k = 0
            while True:
                yield slope * (2.0 * k + 2.0) * (-1.0) ** k * recip_gamma(2.0 * k + al + 2.0), 2.0 * k + al + 1.0
                k += 1

        def ml_two() -> Iterator[Term]:
            k = 0
            while True:
                yield (-1.0) ** k * recip_gamma(2.0 * k + 1.0 + al), 2.0 * k + al
                k += 1

        def ml_two_scaled() -> Iterator[Term]:
            k = 0
            while True:
                yield -((-4.0) ** k) * recip_gamma(2.0 * k + 1.0 + al), 2.0 * k + al
                k += 1

        def ml_two_singular() -> Iterator[Term]:
            k = 0
            while True:
                yield -((-1.0) ** k) * recip_gamma(2.0 * k + al), 2.0 * k + al - 1.0
                k += 1

        return [
            sine_part(),
            [(slope / gamma(1.0 + al), al), (1.0 / gamma(al), al - 1.0)],
            ml_two(),
            ml_two_scaled(),
            ml_two_singular(),
        ]

    raise ValueError(f"unknown solution kind {sol.kind!r}")


def _sum_component(component, x: float, tol: float) -> float:
    """Sum one component at x.

    Finite components (lists) are summed in full; series components
    (generators) are truncated once the next term falls below tol relative
    to the partial sum, with a hard cap of SERIES_MAX_TERMS terms.
    """
    if isinstance(component, (list, tuple)):
        return math.fsum(coef * x**power for coef, power in component)
    total = 0.0
    for count, (coef, power) in enumerate(component):
        term = coef * x**power
        if not math.isfinite(term) or not math.isfinite(total):
            break  # diverged in floating point; report via the cap error
        if count > 0 and abs(term) <= tol * (1.0 + abs(total)):
            return total
        total += term
        if count + 1 >= SERIES_MAX_TERMS:
            break
    raise SeriesConvergenceError(
        f"exact-solution series did not converge in {SERIES_MAX_TERMS} terms at x={x!r}"
    )


def _deriv_term(term: Term, order: float) -> Term:
    """Riemann-Liouville derivative of coef * x^power (based at 0).

    Powers with power + 1 - order at a gamma pole are annihilated (the
    classical D^s x^(s-1) = 0 rule), which the reciprocal gamma encodes.
    """
    coef, power = term
    return coef * gamma(power + 1.0) * recip_gamma(power + 1.0 - order), power - order


def _integral_term(term: Term, order: float) -> Term:
    """Riemann-Liouville integral of coef * x^power (based at 0)."""
    coef, power = term
    return coef * gamma(power + 1.0) / gamma(power + 1.0 + order), power + order


def _map_component(component, transform: Callable[[Term], Term]):
    if isinstance(component, (list, tuple)):
        return [transform(term) for term in component]
    return (transform(term) for term in component)


def exact_eval(sol: ExactSolution, x: float) -> float:
    """Value of the closed-form minimizer at x in (a, b]."""
    if not sol.a < x <= sol.b:
        raise ValueError("exact solutions are defined on (a, b] only")
    return sum(_sum_component(comp, x, sol.series_tol) for comp in _components(sol))


def _eval_transformed(sol: ExactSolution, x: float, transform: Callable[[Term], Term]) -> float:
    return sum(
        _sum_component(_map_component(comp, transform), x, sol.series_tol)
        for comp in _components(sol)
    )


def exact_boundary_check(sol: ExactSolution) -> float:
    """Deviation of I^(1-alpha) of the exact solution at b from epsilon.

    Computed term by term with the monomial integral rule; a large value
    flags a transcription problem in the closed form.
    """
    order = 1.0 - sol.alpha
    value = _eval_transformed(sol, sol.b, lambda t: _integral_term(t, order))
    return abs(value - sol.epsilon)


def verify_exact(sol: ExactSolution, rule: QuadratureRule) -> float:
    """Deviation of the functional along the exact solution from its optimum.

    The integrand along the minimizer is identically the constant slope, so
    the functional must equal slope^2 (b - a).  The fractional derivative
    and integral entering the integrand are evaluated term by term from the
    closed form (never through the trial basis).
    """
    fam = family_for(sol)
    target = problems.optimal_objective(fam)
    deriv_order = 1.0 - fam.beta_order
    total = 0.0
    for x, w in zip(rule.nodes, rule.weights):
        xv = float(x)
        dy = _eval_transformed(sol, xv, lambda t: _deriv_term(t, deriv_order))
        iy = _eval_transformed(sol, xv, lambda t: _integral_term(t, fam.beta_order))
        r = fam.g(xv) * dy + fam.gp(xv) * iy + fam.hp(xv)
        total += w * r * r
    return abs(total - target)
