"""Figure rendering for the command-line reports.

Every run that emits a CSV also renders the matching matplotlib figures to
files next to it: the solution comparison (closed form vs numerical, one
curve per degree), the pointwise error per degree, and the error-decay
summary of a convergence sweep.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["save_convergence_figure", "save_error_figure", "save_solution_figure"]


def save_solution_figure(path, x, numeric: dict[int, np.ndarray], exact=None, title: str = "") -> None:
    """Numerical solutions per degree, with the closed form when available."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    if exact is not None:
        ax.plot(x, exact, "k-", lw=2.2, label="exact", alpha=0.7)
    for n in sorted(numeric):
        ax.plot(x, numeric[n], "--", lw=1.4, label=f"n = {n}")
    ax.set_xlabel("x")
    ax.set_ylabel("y(x)")
    if title:
        ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_error_figure(path, x, errors: dict[int, np.ndarray], title: str = "") -> None:
    """Pointwise error of each numerical solution against the closed form."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for n in sorted(errors):
        ax.plot(x, errors[n], lw=1.4, label=f"n = {n}")
    ax.set_xlabel("x")
    ax.set_ylabel("error")
    if title:
        ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_convergence_figure(path, degrees, max_errors, title: str = "") -> None:
    """Maximum grid error against the truncation degree, log scale."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    errs = np.asarray(max_errors, dtype=float)
    positive = errs > 0.0
    floor = 1e-17
    ax.semilogy(degrees, np.where(positive, errs, floor), "o-", lw=1.4)
    ax.set_xlabel("degree n")
    ax.set_ylabel("max grid error")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
