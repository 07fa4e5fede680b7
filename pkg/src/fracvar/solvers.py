"""Minimization of the assembled objective under one linear equality.

Two paths:

* `solve_lls` -- exact solution when every node residual is affine in the
  coefficients (true for every squared-affine family problem).  One
  coefficient is eliminated through the constraint, pivoting on the largest
  row entry, and the reduced weighted normal equations are solved by a dense
  symmetric factorization.
* `solve_qn` -- general path.  The feasible set is parameterized as
  c = c_p + N z with c_p the minimum-norm feasible point and N an
  orthonormal null-space basis of the constraint row; the reduced function
  is minimized by BFGS with central-difference gradients.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg
import scipy.optimize

from .fracbasis import BasisSpec
from .problems import ProblemSpec, assemble_objective, constraint, leitmann_residuals
from .quadrature import gauss_legendre, map_to_interval

__all__ = [
    "PATH_LLS",
    "PATH_QN",
    "SingularSystemError",
    "SolveReport",
    "solve_lls",
    "solve_problem",
    "solve_qn",
]

PATH_LLS = "linear-least-squares"
PATH_QN = "quasi-newton"

#: Condition-number guard for the reduced normal equations.
CONDITION_LIMIT = 1e14

QN_GRAD_TOL = 1e-9
QN_MAX_ITER = 500
QN_FD_STEP = 1e-6


class SingularSystemError(RuntimeError):
    """Reduced normal equations are numerically singular (degree too large
    for the quadrature count)."""


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a constrained minimization."""

    coefficients: np.ndarray
    objective_value: float
    constraint_residual: float
    iterations: int
    converged: bool
    path: str


def _weighted_sum_of_squares(weights: np.ndarray, residuals: np.ndarray) -> float:
    total = 0.0
    for j in range(residuals.size):
        total += weights[j] * residuals[j] * residuals[j]
    return total


def solve_lls(node_matrix, node_offsets, weights, row, rhs: float) -> SolveReport:
    """Exact minimizer of sum_j w_j (M c + d)_j^2 subject to row . c = rhs.

    The pivot coefficient (largest-magnitude row entry, ties to the lowest
    index) is eliminated through the constraint; the remaining unknowns
    solve the reduced normal equations.  Raises SingularSystemError when the
    reduced normal matrix has condition estimate beyond CONDITION_LIMIT.
    """
    matrix = np.asarray(node_matrix, dtype=float)
    offsets = np.asarray(node_offsets, dtype=float)
    w = np.asarray(weights, dtype=float)
    r = np.asarray(row, dtype=float)
    if matrix.ndim != 2:
        raise ValueError("node matrix must be two-dimensional")
    npar = matrix.shape[1]
    if r.shape != (npar,) or not np.any(r != 0.0):
        raise ValueError("constraint row must be a nonzero vector matching the unknown count")

    pivot = int(np.argmax(np.abs(r)))
    particular = np.zeros(npar)
    particular[pivot] = rhs / r[pivot]
    free = [i for i in range(npar) if i != pivot]
    elim = np.zeros((npar, npar - 1))
    for col, i in enumerate(free):
        elim[i, col] = 1.0
        elim[pivot, col] = -r[i] / r[pivot]

    if free:
        reduced = matrix @ elim
        base = matrix @ particular + offsets
        normal = reduced.T @ (w[:, None] * reduced)
        target = -reduced.T @ (w * base)
        cond = np.linalg.cond(normal)
        if not np.isfinite(cond) or cond > CONDITION_LIMIT:
            raise SingularSystemError(
                f"reduced normal matrix condition {cond:.3e} exceeds {CONDITION_LIMIT:.0e}; "
                "lower the degree or raise the quadrature count"
            )
        z = scipy.linalg.solve(normal, target, assume_a="sym")
        coeffs = particular + elim @ z
    else:
        coeffs = particular

    residuals = matrix @ coeffs + offsets
    return SolveReport(
        coefficients=coeffs,
        objective_value=_weighted_sum_of_squares(w, residuals),
        constraint_residual=abs(float(r @ coeffs) - rhs),
        iterations=1,
        converged=True,
        path=PATH_LLS,
    )


def _nullspace_basis(row: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane row . c = 0 (Gram-Schmidt against row)."""
    npar = row.size
    unit = row / np.linalg.norm(row)
    columns: list[np.ndarray] = []
    for i in range(npar):
        v = np.zeros(npar)
        v[i] = 1.0
        v -= (unit @ v) * unit
        for q in columns:
            v -= (q @ v) * q
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            columns.append(v / norm)
        if len(columns) == npar - 1:
            break
    return np.column_stack(columns) if columns else np.zeros((npar, 0))


def _central_gradient(fun: Callable[[np.ndarray], float], z: np.ndarray) -> np.ndarray:
    grad = np.empty_like(z)
    for i in range(z.size):
        h = QN_FD_STEP * max(1.0, abs(z[i]))
        zp = z.copy()
        zm = z.copy()
        zp[i] += h
        zm[i] -= h
        grad[i] = (fun(zp) - fun(zm)) / (2.0 * h)
    return grad


def solve_qn(objective, constraint_pair, init=None) -> SolveReport:
    """BFGS minimization of the objective restricted to the feasible set.

    The start is z = 0 (the minimum-norm feasible point) unless an initial
    coefficient vector is given, in which case its feasible projection is
    used.  Stops when the central-difference gradient infinity-norm drops
    below QN_GRAD_TOL or after QN_MAX_ITER iterations; a line-search failure
    is reported through the converged flag, keeping the best iterate.
    """
    row, rhs = constraint_pair
    r = np.asarray(row, dtype=float)
    if not np.any(r != 0.0):
        raise ValueError("constraint row must be nonzero")
    particular = rhs * r / float(r @ r)
    basis = _nullspace_basis(r)

    if basis.shape[1] == 0:
        value = float(objective(particular))
        return SolveReport(
            coefficients=particular,
            objective_value=value,
            constraint_residual=abs(float(r @ particular) - rhs),
            iterations=0,
            converged=True,
            path=PATH_QN,
        )

    def reduced(z: np.ndarray) -> float:
        return float(objective(particular + basis @ z))

    if init is not None:
        z0 = basis.T @ (np.asarray(init, dtype=float) - particular)
    else:
        z0 = np.zeros(basis.shape[1])

    result = scipy.optimize.minimize(
        reduced,
        z0,
        method="BFGS",
        jac=lambda z: _central_gradient(reduced, z),
        options={"gtol": QN_GRAD_TOL, "norm": np.inf, "maxiter": QN_MAX_ITER},
    )
    coeffs = particular + basis @ result.x
    grad_norm = float(np.max(np.abs(_central_gradient(reduced, result.x))))
    return SolveReport(
        coefficients=coeffs,
        objective_value=float(objective(coeffs)),
        constraint_residual=abs(float(r @ coeffs) - rhs),
        iterations=int(result.nit),
        converged=bool(result.success) or grad_norm <= QN_GRAD_TOL,
        path=PATH_QN,
    )


def solve_problem(spec: ProblemSpec, degree: int, method: str = "auto") -> SolveReport:
    """Assemble and solve a problem at the given truncation degree.

    method "auto" picks the exact least-squares path for problems built
    from a LeitmannFamily and the quasi-Newton path otherwise; "lls" and
    "qn" force a path.
    """
    basis = BasisSpec(alpha=spec.alpha, a=spec.a, b=spec.b, n=degree)
    rule = map_to_interval(gauss_legendre(spec.quad_count), spec.a, spec.b)
    pair = constraint(spec, basis)
    if method == "auto":
        method = "lls" if spec.leitmann is not None else "qn"
    if method == "lls":
        matrix, offsets = leitmann_residuals(spec, basis, rule)
        return solve_lls(matrix, offsets, rule.weights, pair[0], pair[1])
    if method == "qn":
        return solve_qn(assemble_objective(spec, basis, rule), pair)
    raise ValueError(f"unknown solve method {method!r}")
