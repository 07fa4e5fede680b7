"""Command-line front end.

Three subcommands:

* ``fracvar solve``        -- solve one problem at one or more degrees and
  write, per degree, a solution CSV (x, y_n, y_exact, error) plus a run
  report (plain text and JSON); comparison/error figures are rendered next
  to the CSVs.
* ``fracvar verify``       -- run every identity suite and print a
  pass/fail table with worst-case deviations.
* ``fracvar convergence``  -- sweep degrees and emit an error/objective CSV
  with a decay figure.

Configuration comes from a flat ``key=value`` file plus command-line flags;
flags win.  Exit codes: 0 success, 1 validation error, 2 solver failure,
3 verification-suite failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .expressions import ExpressionError, parse_function
from .fracbasis import BasisSpec, basis_matrix
from .oracle import ExactSolution, exact_eval, exact_solution
from .problems import (
    BUILTINS,
    LeitmannFamily,
    ProblemSpec,
    leitmann_to_problem,
    optimal_objective,
)
from .solvers import SingularSystemError, SolveReport, solve_problem

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SOLVER = 2
EXIT_VERIFY = 3

#: CSV timing resolution.  Wall time is quantized this coarsely in the
#: convergence CSV so that identical configs yield byte-identical CSV
#: bodies; precise timings go into the run report instead.
TIMING_RESOLUTION_MS = 10.0

_PARAM_KEYS = ("alpha", "p", "nu", "epsilon", "a", "b")
_EXPR_KEYS = ("g", "gp", "h", "hp")

_GRID_NOTE = (
    "note: the evaluation grid excludes x = a; the closed-form solutions "
    "carry an x^(alpha-1)-type term that is singular at the left endpoint."
)


class ValidationError(ValueError):
    """Bad configuration or command line."""


class SolverFailure(RuntimeError):
    """The optimizer failed or did not converge."""


@dataclass
class RunConfig:
    """Merged run configuration for solve/convergence."""

    problem: str
    parameters: dict[str, float]
    degrees: list[int]
    quad_count: int = 40
    grid_points: int = 200
    output_path: str = ""
    expressions: dict[str, str] = field(default_factory=dict)
    figures: bool = True


def _fmt(value: float) -> str:
    return "%.17g" % value


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


def parse_config_file(path: str) -> dict[str, str]:
    """Flat key=value file; blank lines and # comments ignored."""
    out: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _parse_degrees(text: str) -> list[int]:
    try:
        degrees = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"bad degrees list {text!r}") from exc
    if not degrees:
        raise ValidationError("degrees list must not be empty")
    if any(n < 0 for n in degrees):
        raise ValidationError("degrees must be nonnegative")
    return degrees


def _to_float(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ValidationError(f"parameter {key} must be a number, got {text!r}") from exc


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge hard defaults, per-problem plot defaults, config file and flags."""
    file_cfg = parse_config_file(args.config) if args.config else {}

    def pick(key: str, flag_value):
        if flag_value is not None:
            return str(flag_value)
        return file_cfg.get(key)

    problem = pick("problem", args.problem)
    if problem is None:
        raise ValidationError("no problem selected (use --problem or a config file)")
    if problem != "custom" and problem not in BUILTINS:
        names = ", ".join([*BUILTINS, "custom"])
        raise ValidationError(f"unknown problem {problem!r}; choose one of: {names}")

    params: dict[str, float] = {}
    for key in _PARAM_KEYS:
        raw = pick(key, getattr(args, key))
        if raw is not None:
            params[key] = _to_float(key, raw)

    beta_order = pick("beta_order", args.beta_order)
    if beta_order is not None:
        border = _to_float("beta_order", beta_order)
        if not 0.0 < border < 1.0:
            raise ValidationError("beta-order must lie in (0, 1)")
        if "alpha" in params and abs(params["alpha"] + border - 1.0) > 1e-12:
            raise ValidationError(
                "alpha and beta-order are inconsistent (they must sum to 1)"
            )
        params["alpha"] = 1.0 - border

    if problem != "custom":
        builtin = BUILTINS[problem]
        for key, value in builtin.plot_params.items():
            params.setdefault(key, value)
        for key in params:
            if key not in builtin.parameters:
                raise ValidationError(f"parameter {key!r} is not accepted by problem {problem}")
    params.setdefault("a", 0.0)
    params.setdefault("b", 1.0)

    expressions = {}
    for key in _EXPR_KEYS:
        raw = pick(key, getattr(args, key))
        if raw is not None:
            expressions[key] = raw

    def pick_default(key, flag_value, fallback):
        value = pick(key, flag_value)
        return fallback if value is None else value

    degrees_text = pick_default("degrees", args.degrees, "3,6")
    quad_text = pick_default("quad", args.quad, "40")
    grid_text = pick_default("grid", args.grid, "200")
    out_text = pick_default("out", args.out, str(Path("fracvar-results") / problem))

    quad_count = int(_to_float("quad", quad_text))
    if not 1 <= quad_count <= 256:
        raise ValidationError("quad must lie in [1, 256]")
    grid_points = int(_to_float("grid", grid_text))
    if grid_points < 1:
        raise ValidationError("grid must be a positive integer")

    config = RunConfig(
        problem=problem,
        parameters=params,
        degrees=_parse_degrees(degrees_text),
        quad_count=quad_count,
        grid_points=grid_points,
        output_path=out_text,
        expressions=expressions,
        figures=not args.no_figures,
    )
    _validate_problem_inputs(config)
    return config


def _validate_problem_inputs(cfg: RunConfig) -> None:
    p = cfg.parameters
    if not p["a"] < p["b"]:
        raise ValidationError("interval endpoints must satisfy a < b")
    alpha = p.get("alpha")
    if alpha is None:
        raise ValidationError("alpha (or beta-order) is required")
    if not 0.0 < alpha < 1.0:
        raise ValidationError("alpha must lie in (0, 1)")
    if cfg.problem == "custom":
        missing = [k for k in _EXPR_KEYS if k not in cfg.expressions]
        if missing:
            raise ValidationError(
                "custom problems need expressions for " + ", ".join(missing)
            )
        if "epsilon" not in p:
            raise ValidationError("custom problems need epsilon")
        for key in ("p", "nu"):
            if key in p:
                raise ValidationError(f"parameter {key!r} has no meaning for custom problems")
    else:
        if p["a"] != 0.0:
            raise ValidationError(
                "built-in problems require a = 0 (their closed-form solutions "
                "are written for a left endpoint at 0)"
            )
        if cfg.expressions:
            raise ValidationError("g/gp/h/hp expressions are only for --problem custom")


def _build_family(cfg: RunConfig) -> tuple[LeitmannFamily, ExactSolution | None, str]:
    p = cfg.parameters
    if cfg.problem == "custom":
        try:
            funcs = {key: parse_function(cfg.expressions[key]) for key in _EXPR_KEYS}
        except ExpressionError as exc:
            raise ValidationError(f"bad expression: {exc}") from exc
        try:
            family = LeitmannFamily(
                g=funcs["g"],
                h=funcs["h"],
                gp=funcs["gp"],
                hp=funcs["hp"],
                beta_order=1.0 - p["alpha"],
                epsilon=p["epsilon"],
                a=p["a"],
                b=p["b"],
            )
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise ValidationError(f"invalid custom problem data: {exc}") from exc
        description = "custom: " + ", ".join(f"{k}={cfg.expressions[k]}" for k in _EXPR_KEYS)
        return family, None, description

    builtin = BUILTINS[cfg.problem]
    kwargs = {key: p[key] for key in builtin.parameters if key in p}
    family = builtin.family(**kwargs)
    sol_kwargs = {k: v for k, v in kwargs.items()}
    sol = exact_solution(cfg.problem, **sol_kwargs)
    return family, sol, builtin.description


def _grid(cfg: RunConfig) -> np.ndarray:
    a, b = cfg.parameters["a"], cfg.parameters["b"]
    j = np.arange(1, cfg.grid_points + 1, dtype=float)
    return a + j * (b - a) / cfg.grid_points


def _params_line(cfg: RunConfig) -> str:
    return ", ".join(f"{k}={_fmt(v)}" for k, v in sorted(cfg.parameters.items()))


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def _solve_degree(spec: ProblemSpec, degree: int) -> tuple[SolveReport, float]:
    start = time.perf_counter()
    try:
        report = solve_problem(spec, degree)
    except SingularSystemError as exc:
        raise SolverFailure(f"degree {degree}: {exc}") from exc
    except (ZeroDivisionError, OverflowError, FloatingPointError) as exc:
        raise SolverFailure(f"degree {degree}: numerical failure: {exc}") from exc
    elapsed_ms = 1e3 * (time.perf_counter() - start)
    if not report.converged:
        raise SolverFailure(f"degree {degree}: solver did not converge")
    return report, elapsed_ms


def _write_solution_csv(path: Path, x: np.ndarray, y_n: np.ndarray, y_ex) -> None:
    lines = ["x,y_n,y_exact,error"]
    for j in range(x.size):
        if y_ex is None:
            lines.append(f"{_fmt(x[j])},{_fmt(y_n[j])},,")
        else:
            lines.append(
                f"{_fmt(x[j])},{_fmt(y_n[j])},{_fmt(y_ex[j])},{_fmt(y_n[j] - y_ex[j])}"
            )
    with open(path, "w", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def _write_reports(
    base: Path,
    cfg: RunConfig,
    description: str,
    degree: int,
    report: SolveReport,
    target: float,
    max_error,
    wall_ms: float,
    csv_name: str,
) -> None:
    gap = report.objective_value - target
    txt = [
        "fracvar solve report",
        "====================",
        f"generated: {_now()}",
        _GRID_NOTE,
        "",
        f"problem:      {cfg.problem} ({description})",
        f"parameters:   {_params_line(cfg)}",
        f"degree:       {degree}  ({degree + 1} basis functions)",
        f"quadrature:   {cfg.quad_count} Gauss-Legendre nodes",
        f"grid points:  {cfg.grid_points}",
        f"solver path:  {report.path}",
        f"converged:    {'yes' if report.converged else 'NO'}",
        f"iterations:   {report.iterations}",
        f"wall time:    {wall_ms:.3f} ms",
        "",
        f"objective value      = {_fmt(report.objective_value)}",
        f"optimal target       = {_fmt(target)}   (squared slope times interval length)",
        f"objective gap        = {_fmt(gap)}",
        f"constraint residual  = {_fmt(report.constraint_residual)}",
    ]
    if max_error is not None:
        txt.append(f"max grid error       = {_fmt(max_error)}")
    txt.append("")
    txt.append("coefficients:")
    for i, c in enumerate(report.coefficients):
        txt.append(f"  c[{i}] = {_fmt(c)}")
    txt.append("")
    txt.append(f"solution csv: {csv_name}")
    base.with_suffix(".txt").write_text("\n".join(txt) + "\n")

    payload = {
        "generated": _now(),
        "problem": cfg.problem,
        "description": description,
        "parameters": cfg.parameters,
        "degree": degree,
        "quad_count": cfg.quad_count,
        "grid_points": cfg.grid_points,
        "solver_path": report.path,
        "converged": report.converged,
        "iterations": report.iterations,
        "wall_time_ms": wall_ms,
        "objective_value": report.objective_value,
        "optimal_target": target,
        "objective_gap": gap,
        "constraint_residual": report.constraint_residual,
        "max_grid_error": max_error,
        "coefficients": [float(c) for c in report.coefficients],
        "solution_csv": csv_name,
    }
    base.with_suffix(".json").write_text(json.dumps(payload, indent=2) + "\n")


def cmd_solve(cfg: RunConfig) -> int:
    family, sol, description = _build_family(cfg)
    spec = leitmann_to_problem(family, quad_count=cfg.quad_count)
    target = optimal_objective(family)
    x = _grid(cfg)
    y_ex = np.array([exact_eval(sol, float(v)) for v in x]) if sol is not None else None

    out = Path(cfg.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)

    numeric: dict[int, np.ndarray] = {}
    for degree in cfg.degrees:
        report, wall_ms = _solve_degree(spec, degree)
        basis = BasisSpec(alpha=spec.alpha, a=spec.a, b=spec.b, n=degree)
        y_n = basis_matrix(basis, x) @ report.coefficients
        numeric[degree] = y_n
        max_error = float(np.max(np.abs(y_n - y_ex))) if y_ex is not None else None

        csv_path = Path(f"{out}_n{degree}.csv")
        _write_solution_csv(csv_path, x, y_n, y_ex)
        _write_reports(
            Path(f"{out}_n{degree}_report"),
            cfg,
            description,
            degree,
            report,
            target,
            max_error,
            wall_ms,
            csv_path.name,
        )
        line = (
            f"n={degree}: objective={report.objective_value:.12g} "
            f"gap={report.objective_value - target:+.3e} "
            f"residual={report.constraint_residual:.3e}"
        )
        if max_error is not None:
            line += f" max_error={max_error:.3e}"
        print(line)
        print(f"  wrote {csv_path}")

    if cfg.figures:
        from . import figures  # deferred: keeps verify/solve-only runs light

        title = f"{cfg.problem}: {_params_line(cfg)}"
        figures.save_solution_figure(f"{out}_solution.png", x, numeric, y_ex, title)
        print(f"  wrote {out}_solution.png")
        if y_ex is not None:
            errors = {n: y - y_ex for n, y in numeric.items()}
            figures.save_error_figure(f"{out}_error.png", x, errors, title)
            print(f"  wrote {out}_error.png")
    return EXIT_OK


# ---------------------------------------------------------------------------
# convergence
# ---------------------------------------------------------------------------


def cmd_convergence(cfg: RunConfig) -> int:
    if cfg.problem == "custom":
        raise ValidationError("convergence sweeps need a problem with a closed-form solution")
    family, sol, description = _build_family(cfg)
    spec = leitmann_to_problem(family, quad_count=cfg.quad_count)
    target = optimal_objective(family)
    x = _grid(cfg)
    y_ex = np.array([exact_eval(sol, float(v)) for v in x])

    out = Path(cfg.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)

    rows = []
    precise_times = []
    for degree in sorted(cfg.degrees):
        report, wall_ms = _solve_degree(spec, degree)
        basis = BasisSpec(alpha=spec.alpha, a=spec.a, b=spec.b, n=degree)
        y_n = basis_matrix(basis, x) @ report.coefficients
        max_error = float(np.max(np.abs(y_n - y_ex)))
        quantized_ms = TIMING_RESOLUTION_MS * round(wall_ms / TIMING_RESOLUTION_MS)
        rows.append((degree, max_error, report.objective_value,
                     report.objective_value - target, quantized_ms))
        precise_times.append((degree, wall_ms))
        print(
            f"n={degree}: max_error={max_error:.3e} objective={report.objective_value:.12g} "
            f"gap={report.objective_value - target:+.3e}"
        )

    csv_path = Path(f"{out}_convergence.csv")
    lines = ["n,max_interior_error,objective_value,objective_gap,solve_time_ms"]
    for degree, err, obj, gap, ms in rows:
        lines.append(f"{degree},{_fmt(err)},{_fmt(obj)},{_fmt(gap)},{_fmt(ms)}")
    with open(csv_path, "w", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
    print(f"  wrote {csv_path}")

    report_path = Path(f"{out}_convergence_report.txt")
    txt = [
        "fracvar convergence report",
        "==========================",
        f"generated: {_now()}",
        _GRID_NOTE,
        "timing: solve_time_ms in the CSV is quantized to "
        f"{TIMING_RESOLUTION_MS:.0f} ms so CSV bodies are byte-reproducible; "
        "precise wall times follow.",
        "",
        f"problem:     {cfg.problem} ({description})",
        f"parameters:  {_params_line(cfg)}",
        f"quadrature:  {cfg.quad_count} Gauss-Legendre nodes",
        "",
    ]
    for degree, wall_ms in precise_times:
        txt.append(f"n={degree}: solve time {wall_ms:.3f} ms")
    report_path.write_text("\n".join(txt) + "\n")

    if cfg.figures:
        from . import figures

        figures.save_convergence_figure(
            f"{out}_convergence.png",
            [r[0] for r in rows],
            [r[1] for r in rows],
            f"{cfg.problem}: max grid error vs degree",
        )
        print(f"  wrote {out}_convergence.png")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify() -> int:
    from .verification import run_all_suites  # deferred: the suites are heavy

    results = run_all_suites()
    width = max(len(r.name) for r in results)
    print(f"{'suite'.ljust(width)}  {'worst':>12}  {'tolerance':>10}  status")
    failures = 0
    for r in results:
        status = "pass" if r.passed else "FAIL"
        if not r.passed:
            failures += 1
        print(f"{r.name.ljust(width)}  {r.worst:>12.3e}  {r.tolerance:>10.1e}  {status}")
    if failures:
        print(f"{failures} suite(s) exceeded tolerance", file=sys.stderr)
        return EXIT_VERIFY
    print("all identity suites passed")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """argparse with the validation exit code (1) instead of its default 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value config file; flags override it")
    parser.add_argument("--problem", help="ex1..ex5, remark3 or custom")
    parser.add_argument("--alpha", type=float, help="derivative order in (0, 1)")
    parser.add_argument(
        "--beta-order", dest="beta_order", type=float,
        help="fractional-integral order in (0, 1); equivalent to alpha = 1 - beta-order",
    )
    parser.add_argument("--p", type=float, help="g-exponent of ex1/ex4")
    parser.add_argument("--nu", type=float, help="decay rate of ex2/ex4")
    parser.add_argument("--epsilon", type=float, help="boundary value")
    parser.add_argument("--a", type=float, help="left endpoint")
    parser.add_argument("--b", type=float, help="right endpoint")
    parser.add_argument("--degrees", help="comma-separated truncation degrees (default 3,6)")
    parser.add_argument("--quad", type=int, help="Gauss-Legendre node count (default 40)")
    parser.add_argument("--grid", type=int, help="output grid points (default 200)")
    parser.add_argument("--out", help="output path prefix")
    for key in _EXPR_KEYS:
        parser.add_argument(f"--{key}", help=f"custom-problem expression for {key}(x)")
    parser.add_argument("--no-figures", action="store_true", help="skip figure rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracvar", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"fracvar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    solve = sub.add_parser("solve", help="solve a problem and write solution CSVs/reports")
    _add_run_options(solve)
    sub.add_parser("verify", help="run the identity suites")
    conv = sub.add_parser("convergence", help="sweep degrees and write a convergence CSV")
    _add_run_options(conv)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return cmd_verify()
        cfg = build_config(args)
        if args.command == "solve":
            return cmd_solve(cfg)
        return cmd_convergence(cfg)
    except ValidationError as exc:
        print(f"fracvar: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverFailure as exc:
        print(f"fracvar: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except Exception as exc:  # runtime failure while solving/evaluating
        print(f"fracvar: error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
