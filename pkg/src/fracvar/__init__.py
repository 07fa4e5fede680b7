"""Numerical solution of Riemann-Liouville fractional variational problems.

The unknown trajectory is expanded in a fractional Jacobi basis whose
fractional derivatives and integrals are available in closed form, turning
the functional into a finite-dimensional minimization under one linear
boundary equation.  Built-in problem families with known minimizers provide
end-to-end accuracy checks.
"""

from .fracbasis import (
    BasisSpec,
    basis_element,
    basis_matrix,
    boundary_row,
    eval_frac_deriv,
    eval_frac_integral,
    eval_y,
)
from .oracle import (
    ExactSolution,
    exact_boundary_check,
    exact_eval,
    exact_solution,
    family_for,
    termwise_frac_deriv_oracle,
    termwise_frac_integral_oracle,
    verify_exact,
)
from .problems import (
    BUILTINS,
    IntegrandError,
    LeitmannConstants,
    LeitmannFamily,
    ProblemSpec,
    assemble_objective,
    constraint,
    leitmann_constants,
    leitmann_residuals,
    leitmann_to_problem,
    optimal_objective,
)
from .quadrature import QuadratureRule, gauss_legendre, map_to_interval
from .solvers import (
    SingularSystemError,
    SolveReport,
    solve_lls,
    solve_problem,
    solve_qn,
)
from .specfun import (
    JacobiIndex,
    SeriesConvergenceError,
    gamma,
    jacobi_at_one,
    jacobi_eval,
    jacobi_eval_explicit,
    mittag_leffler,
    pochhammer,
)

__version__ = "0.1.0"

__all__ = [
    "BUILTINS",
    "BasisSpec",
    "ExactSolution",
    "IntegrandError",
    "JacobiIndex",
    "LeitmannConstants",
    "LeitmannFamily",
    "ProblemSpec",
    "QuadratureRule",
    "SeriesConvergenceError",
    "SingularSystemError",
    "SolveReport",
    "assemble_objective",
    "basis_element",
    "basis_matrix",
    "boundary_row",
    "constraint",
    "eval_frac_deriv",
    "eval_frac_integral",
    "eval_y",
    "exact_boundary_check",
    "exact_eval",
    "exact_solution",
    "family_for",
    "gamma",
    "gauss_legendre",
    "jacobi_at_one",
    "jacobi_eval",
    "jacobi_eval_explicit",
    "leitmann_constants",
    "leitmann_residuals",
    "leitmann_to_problem",
    "map_to_interval",
    "mittag_leffler",
    "optimal_objective",
    "pochhammer",
    "solve_lls",
    "solve_problem",
    "solve_qn",
    "termwise_frac_deriv_oracle",
    "termwise_frac_integral_oracle",
    "verify_exact",
]
