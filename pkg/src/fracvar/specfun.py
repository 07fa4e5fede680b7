"""Scalar special functions used throughout the package.

Gamma, the rising factorial, Jacobi polynomials and the Mittag-Leffler
function.  Everything here is a pure function of its arguments and safe to
call from any number of threads.

Jacobi polynomials are evaluated with the classical three-term recurrence,
which is the numerically stable production path.  The explicit alternating
sum over monomials is provided as well (`jacobi_eval_explicit`), but only as
an independent cross-check: the alternating sum cancels catastrophically for
large degree and should not be trusted past degree ~20.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GAMMA_OVERFLOW",
    "JacobiIndex",
    "SeriesConvergenceError",
    "gamma",
    "recip_gamma",
    "pochhammer",
    "jacobi_table",
    "jacobi_eval",
    "jacobi_eval_explicit",
    "jacobi_at_one",
    "mittag_leffler",
]

#: Largest argument for which gamma(x) still fits in a double.
GAMMA_OVERFLOW = 171.624376956302725

#: Mittag-Leffler series controls: relative term tolerance and term cap.
ML_TOLERANCE = 1e-16
ML_MAX_TERMS = 500


class SeriesConvergenceError(RuntimeError):
    """A series evaluation hit its term cap before meeting its tolerance."""


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function for real, non-pole arguments.

    Raises ValueError at the poles (0, -1, -2, ...) and OverflowError for
    arguments beyond GAMMA_OVERFLOW.
    """
    if _is_nonpositive_integer(x):
        raise ValueError(f"gamma has a pole at nonpositive integer x={x!r}")
    return math.gamma(x)


def recip_gamma(x: float) -> float:
    """1/gamma(x), with the usual convention that 1/gamma = 0 at the poles.

    Entire in x, so this never raises: large positive arguments underflow
    cleanly to zero.
    """
    if _is_nonpositive_integer(x):
        return 0.0
    try:
        return 1.0 / math.gamma(x)
    except OverflowError:
        return 0.0


def pochhammer(a: float, i: int) -> float:
    """Rising factorial (a)_i = a (a+1) ... (a+i-1), with (a)_0 = 1.

    Computed as a direct product for small i; for long products with a > 0
    it switches to a gamma ratio to keep the rounding error flat.
    """
    if i < 0:
        raise ValueError("pochhammer order must be a nonnegative integer")
    if i <= 30 or a <= 0.0:
        out = 1.0
        for j in range(i):
            out *= a + j
        return out
    return math.exp(math.lgamma(a + i) - math.lgamma(a))


@dataclass(frozen=True)
class JacobiIndex:
    """Index pair and degree of a Jacobi polynomial P_n^(a_idx, b_idx).

    Both indices must exceed -1 (the orthogonality range on (-1, 1) under
    the weight (1-t)^a_idx (1+t)^b_idx).
    """

    a_idx: float
    b_idx: float
    degree: int

    def __post_init__(self) -> None:
        if not (self.a_idx > -1.0 and self.b_idx > -1.0):
            raise ValueError("Jacobi indices must both be greater than -1")
        if self.degree < 0 or self.degree != int(self.degree):
            raise ValueError("degree must be a nonnegative integer")


def jacobi_table(a_idx: float, b_idx: float, t, max_degree: int) -> np.ndarray:
    """All Jacobi polynomial values P_0 .. P_max_degree at the points t.

    Parameters
    ----------
    a_idx, b_idx : float
        Jacobi indices, both > -1.
    t : array_like
        Evaluation points, assumed to lie in [-1, 1].
    max_degree : int
        Highest degree to evaluate.

    Returns
    -------
    ndarray of shape (len(t), max_degree + 1)
        Column i holds P_i at every point.
    """
    if not (a_idx > -1.0 and b_idx > -1.0):
        raise ValueError("Jacobi indices must both be greater than -1")
    p = float(a_idx)
    q = float(b_idx)
    tv = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((tv.size, max_degree + 1))
    out[:, 0] = 1.0
    if max_degree >= 1:
        out[:, 1] = 0.5 * (p + q + 2.0) * tv + 0.5 * (p - q)
    for m in range(2, max_degree + 1):
        s = 2.0 * m + p + q
        c1 = 2.0 * m * (m + p + q) * (s - 2.0)
        c2 = (s - 1.0) * (p * p - q * q)
        c3 = (s - 2.0) * (s - 1.0) * s
        c4 = 2.0 * (m + p - 1.0) * (m + q - 1.0) * s
        out[:, m] = ((c2 + c3 * tv) * out[:, m - 1] - c4 * out[:, m - 2]) / c1
    return out


def jacobi_eval(idx: JacobiIndex, t: float) -> float:
    """P_n^(a_idx, b_idx)(t) by the three-term recurrence.

    Arguments slightly outside [-1, 1] (within 1e-12) are clamped; anything
    beyond that is a domain error.
    """
    if abs(t) > 1.0 + 1e-12:
        raise ValueError(f"t={t!r} lies outside [-1, 1]")
    tc = min(1.0, max(-1.0, t))
    table = jacobi_table(idx.a_idx, idx.b_idx, tc, idx.degree)
    return float(table[0, idx.degree])


def jacobi_eval_explicit(idx: JacobiIndex, t: float) -> float:
    """P_n^(a_idx, b_idx)(t) as the explicit alternating sum over ((t+1)/2)^k.

    Independent of the recurrence path; accurate only for low degree, so it
    serves as a test oracle rather than a production evaluator.
    """
    n = idx.degree
    p = idx.a_idx
    q = idx.b_idx
    u = 0.5 * (t + 1.0)
    den_n = pochhammer(1.0 + q + p, n)
    total = 0.0
    for k in range(n + 1):
        coef = (
            (-1.0) ** (n - k)
            * pochhammer(1.0 + q, n)
            * pochhammer(1.0 + p + q, n + k)
            / (math.factorial(k) * math.factorial(n - k) * pochhammer(1.0 + q, k) * den_n)
        )
        total += coef * u**k
    return total


def jacobi_at_one(idx: JacobiIndex) -> float:
    """Endpoint value P_n^(a_idx, b_idx)(1) = (a_idx + 1)_n / n! in closed form."""
    return pochhammer(idx.a_idx + 1.0, idx.degree) / math.factorial(idx.degree)


def _ml_term(x: float, k: int, z: float) -> float:
    """k-th Mittag-Leffler series term x^k / gamma(z), overflow-safe."""
    if _is_nonpositive_integer(z):
        return 0.0
    if x == 0.0:
        return recip_gamma(z) if k == 0 else 0.0
    log_mag = k * math.log(abs(x)) - math.lgamma(z)
    sign = -1.0 if (x < 0.0 and k % 2 == 1) else 1.0
    if z < 0.0 and math.floor(z) % 2 != 0:
        sign = -sign
    try:
        return sign * math.exp(log_mag)
    except OverflowError:
        return sign * math.inf


def mittag_leffler(a: float, b: float, x: float) -> float:
    """Two-parameter Mittag-Leffler function, sum over x^k / gamma(a k + b).

    Direct series summation: terms are accumulated until the next term drops
    below ML_TOLERANCE relative to the partial sum, with a hard cap of
    ML_MAX_TERMS terms.  Raises SeriesConvergenceError at the cap.
    """
    if a <= 0.0:
        raise ValueError("mittag_leffler requires a positive first order")
    total = _ml_term(x, 0, b)
    for k in range(1, ML_MAX_TERMS):
        term = _ml_term(x, k, a * k + b)
        if not math.isfinite(term) or not math.isfinite(total):
            break  # diverged in floating point; report via the cap error
        if abs(term) <= ML_TOLERANCE * (1.0 + abs(total)):
            return total
        total += term
    raise SeriesConvergenceError(
        f"Mittag-Leffler series did not converge in {ML_MAX_TERMS} terms "
        f"(a={a!r}, b={b!r}, x={x!r})"
    )
