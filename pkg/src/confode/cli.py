"""Command-line front door: solve, verify, sample.

Exit codes are a stable contract:

    0  success
    1  usage, parse, or configuration error
    2  solver failure (root non-convergence, Wronskian breakdown)
    3  verification failure (residual above tolerance)

``verify`` accepts either equation text (which it solves first) or a
solution document produced by ``solve --json`` — input starting with ``{``
is treated as JSON.  With no positional source and no ``--file``, verify
reads standard input, so ``solve --json | verify`` works as a pipe.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .chareq import RootFindingError
from .conformable import DomainError, QuadratureError, log_grid, operator_residual
from .eqparse import EquationSyntaxError, problem_from_source
from .solver import (
    GeneralSolution,
    SolverError,
    format_solution,
    solution_from_doc,
    solution_to_doc,
    solve_problem,
)
from .ualgebra import ZERO, SubstMap, eval_expr, format_t, scale

DEFAULT_TOL = 1e-6
DEFAULT_GRID_LO = 0.01
DEFAULT_GRID_HI = 3.0
DEFAULT_GRID_COUNT = 50


class ConfigError(ValueError):
    """Bad flag combination or malformed flag value."""


class _Parser(argparse.ArgumentParser):
    # usage errors must exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


@dataclass(frozen=True)
class RunConfig:
    alphas: tuple[float, ...]
    source: str | None          # equation text, when given
    doc: dict | None            # parsed solution JSON, when given
    json_out: bool
    ic: tuple[float, tuple[float, ...]] | None
    trange: tuple[float, float, int] | None
    tol: float
    columns: str


def build_parser() -> _Parser:
    p = _Parser(prog="confode", description=(
        "Closed-form general solutions to sequential linear conformable "
        "fractional differential equations with constant coefficients."))
    sub = p.add_subparsers(dest="command", required=True)
    for name, doc in (("solve", "solve an equation and print the general solution"),
                      ("verify", "check a solution numerically on a grid"),
                      ("sample", "evaluate a solution to CSV")):
        sp = sub.add_parser(name, help=doc)
        group = sp.add_mutually_exclusive_group(required=True)
        group.add_argument("--alpha", type=float, help="derivative order in (0, 1]")
        group.add_argument("--alpha-list",
                           help="comma-separated alpha values to sweep")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--ic", help="initial conditions t0:v0,v1,...")
        sp.add_argument("--range", dest="trange", help="t grid lo:hi:count")
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="verification tolerance (relative)")
        sp.add_argument("--columns", choices=("basic", "full"), default="basic",
                        help="sample: emit per-basis columns with 'full'")
        sp.add_argument("--file", help="read the equation/solution from a file")
        sp.add_argument("source", nargs="?",
                        help="equation text, or solution JSON for verify")
    return p


def _parse_alphas(ns) -> tuple[float, ...]:
    if ns.alpha is not None:
        alphas = (ns.alpha,)
    else:
        try:
            alphas = tuple(float(v) for v in ns.alpha_list.split(","))
        except ValueError as err:
            raise ConfigError(f"bad --alpha-list: {err}") from err
        if not alphas:
            raise ConfigError("--alpha-list is empty")
    for a in alphas:
        if not (0.0 < a <= 1.0):
            raise ConfigError(f"alpha must lie in (0, 1], got {a}")
    return alphas


def _parse_ic(text: str):
    try:
        head, tail = text.split(":", 1)
        t0 = float(head)
        targets = tuple(float(v) for v in tail.split(","))
    except ValueError as err:
        raise ConfigError(f"bad --ic (want t0:v0,v1,...): {err}") from err
    if t0 <= 0.0:
        raise ConfigError(f"initial point must be positive, got {t0}")
    return t0, targets


def _parse_range(text: str):
    try:
        lo_s, hi_s, n_s = text.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError as err:
        raise ConfigError(f"bad --range (want lo:hi:count): {err}") from err
    if lo <= 0.0:
        raise ConfigError(f"range start must be positive, got {lo}")
    if hi <= lo:
        raise ConfigError(f"range must be increasing, got {lo}:{hi}")
    if n < 2:
        raise ConfigError(f"range needs at least 2 points, got {n}")
    return lo, hi, n


def config_from_args(ns) -> RunConfig:
    alphas = _parse_alphas(ns)
    if ns.source is not None and ns.file is not None:
        raise ConfigError("give the equation either inline or via --file, not both")
    text = ns.source
    if ns.file is not None:
        try:
            with open(ns.file, encoding="utf-8") as fh:
                text = fh.read().strip()
        except OSError as err:
            raise ConfigError(f"cannot read --file: {err}") from err
    if text is None:
        if ns.command == "verify":
            text = sys.stdin.read().strip()
        else:
            raise ConfigError("missing equation (positional argument or --file)")
    doc = None
    source = text
    if text.lstrip().startswith("{"):
        if ns.command != "verify":
            raise ConfigError("solution JSON input is only accepted by verify")
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise ConfigError(f"bad solution JSON: {err}") from err
        source = None
    if ns.tol <= 0.0:
        raise ConfigError(f"tolerance must be positive, got {ns.tol}")
    return RunConfig(
        alphas=alphas,
        source=source,
        doc=doc,
        json_out=ns.json,
        ic=None if ns.ic is None else _parse_ic(ns.ic),
        trange=None if ns.trange is None else _parse_range(ns.trange),
        tol=ns.tol,
        columns=ns.columns,
    )


# ---------------------------------------------------------------------------
# solve


def _solve_one(cfg: RunConfig, alpha: float) -> GeneralSolution:
    spec = problem_from_source(cfg.source, alpha)
    if cfg.ic is None:
        return solve_problem(spec)
    t0, targets = cfg.ic
    if len(targets) != spec.order:
        raise ConfigError(
            f"--ic needs {spec.order} target values for this equation, "
            f"got {len(targets)}")
    return solve_problem(spec, t0=t0, targets=targets)


def _print_solution_text(sol: GeneralSolution) -> None:
    subst = SubstMap(sol.spec.alpha)
    print(f"alpha = {sol.spec.alpha!r}")
    print("basis:")
    for i, e in enumerate(sol.basis.elements):
        print(f"  y{i + 1}(t) = {format_t(e, subst)}")
    if sol.particular is not None:
        print(f"particular: v(t) = {format_t(sol.particular, subst)}")
    if sol.constants is not None:
        pretty = ", ".join(f"c{i + 1} = {c!r}" for i, c in enumerate(sol.constants))
        print(f"constants: {pretty}")
    print(format_solution(sol))


def cmd_solve(cfg: RunConfig) -> int:
    docs = []
    for alpha in cfg.alphas:
        sol = _solve_one(cfg, alpha)
        if cfg.json_out:
            docs.append(solution_to_doc(sol))
        else:
            _print_solution_text(sol)
    if cfg.json_out:
        print(json.dumps(docs[0] if len(docs) == 1 else docs, indent=2))
    return 0


# ---------------------------------------------------------------------------
# verify


def _verify_grid(cfg: RunConfig) -> list[float]:
    if cfg.trange is not None:
        lo, hi, count = cfg.trange
        return log_grid(max(DEFAULT_GRID_LO, lo), hi, count)
    return log_grid(DEFAULT_GRID_LO, DEFAULT_GRID_HI, DEFAULT_GRID_COUNT)


def _max_residual(sol: GeneralSolution, y, forcing, grid):
    coeffs = list(sol.spec.coeffs)
    worst, worst_t = -1.0, grid[0]
    for t in grid:
        r = operator_residual(coeffs, sol.spec.alpha, y, forcing, t)
        if r > worst:
            worst, worst_t = r, t
    return worst, worst_t


def _verify_one(sol: GeneralSolution, grid, tol: float) -> dict:
    elements = []
    overall, overall_t, overall_what = -1.0, grid[0], ""
    for i, e in enumerate(sol.basis.elements):
        r, t = _max_residual(sol, e, ZERO, grid)
        elements.append({"index": i, "max_residual": r, "worst_t": t})
        if r > overall:
            overall, overall_t, overall_what = r, t, f"basis element {i + 1}"
    particular = None
    if sol.particular is not None:
        r, t = _max_residual(sol, sol.particular, sol.spec.forcing, grid)
        particular = {"max_residual": r, "worst_t": t}
        if r > overall:
            overall, overall_t, overall_what = r, t, "particular solution"
    combined = None
    if sol.constants is not None:
        y = sol.particular if sol.particular is not None else ZERO
        for c, e in zip(sol.constants, sol.basis.elements):
            y = y + scale(e, c)
        r, t = _max_residual(sol, y, sol.spec.forcing, grid)
        combined = {"max_residual": r, "worst_t": t}
        if r > overall:
            overall, overall_t, overall_what = r, t, "fitted solution"
    return {
        "alpha": sol.spec.alpha,
        "order": sol.spec.order,
        "tol": tol,
        "grid": {"t_lo": grid[0], "t_hi": grid[-1], "count": len(grid)},
        "elements": elements,
        "particular": particular,
        "combined": combined,
        "max_residual": overall,
        "worst_t": overall_t,
        "worst_part": overall_what,
        "ok": overall < tol,
    }


def cmd_verify(cfg: RunConfig) -> int:
    grid = _verify_grid(cfg)
    reports = []
    if cfg.doc is not None:
        reports.append(_verify_one(solution_from_doc(cfg.doc), grid, cfg.tol))
    else:
        for alpha in cfg.alphas:
            spec = problem_from_source(cfg.source, alpha)
            reports.append(_verify_one(solve_problem(spec), grid, cfg.tol))
    if cfg.json_out:
        print(json.dumps(reports[0] if len(reports) == 1 else reports, indent=2))
    else:
        for rep in reports:
            state = "ok" if rep["ok"] else "FAIL"
            print(f"alpha = {rep['alpha']!r}: max residual {rep['max_residual']:.3e} "
                  f"({rep['worst_part']} at t = {rep['worst_t']:.6g}) "
                  f"tol {rep['tol']:.1e} -> {state}")
    return 0 if all(rep["ok"] for rep in reports) else 3


# ---------------------------------------------------------------------------
# sample


def cmd_sample(cfg: RunConfig) -> int:
    if cfg.trange is None:
        raise ConfigError("sample needs --range lo:hi:count")
    if len(cfg.alphas) != 1:
        raise ConfigError("sample needs a single --alpha")
    lo, hi, count = cfg.trange
    sol = _solve_one(cfg, cfg.alphas[0])
    subst = SubstMap(sol.spec.alpha)
    constants = sol.constants
    if constants is None:
        constants = tuple(0.0 for _ in sol.basis.elements)

    header = ["t", "y"]
    if cfg.columns == "full":
        header += [f"y_basis_{i + 1}" for i in range(sol.basis.n)]
        if sol.particular is not None:
            header.append("y_particular")
    print(",".join(header))
    step = (hi - lo) / (count - 1)
    for i in range(count):
        t = hi if i == count - 1 else lo + i * step
        basis_vals = [eval_expr(e, t, subst) for e in sol.basis.elements]
        part_val = (eval_expr(sol.particular, t, subst)
                    if sol.particular is not None else 0.0)
        y = sum(c * v for c, v in zip(constants, basis_vals)) + part_val
        row = [t, y]
        if cfg.columns == "full":
            row += basis_vals
            if sol.particular is not None:
                row.append(part_val)
        print(",".join(repr(float(v)) for v in row))
    return 0


# ---------------------------------------------------------------------------
# entry


def _report_error(json_out: bool, kind: str, message: str) -> None:
    if json_out:
        print(json.dumps({"error": {"kind": kind, "message": message}}),
              file=sys.stderr)
    else:
        print(f"confode: {kind}: {message}", file=sys.stderr)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    json_out = bool(getattr(ns, "json", False))
    try:
        cfg = config_from_args(ns)
    except ConfigError as err:
        _report_error(json_out, "config error", str(err))
        return 1
    command = {"solve": cmd_solve, "verify": cmd_verify, "sample": cmd_sample}[ns.command]
    try:
        return command(cfg)
    except (ConfigError, EquationSyntaxError, ValueError) as err:
        _report_error(json_out, "config error", str(err))
        return 1
    except (RootFindingError, SolverError, DomainError, QuadratureError) as err:
        _report_error(json_out, "solver error", str(err))
        return 2


if __name__ == "__main__":
    sys.exit(main())
