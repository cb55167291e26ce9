"""Command line interface and the problem-file / CSV / report formats.

Problem files are JSON. Scalars may be integers, decimal numbers, or
rational strings like "-2/3"; decimals are parsed exactly (0.5 becomes the
rational 1/2), so a problem file always yields an exact piecemealing.

Keys: interval ([lo, hi]), maps (list of {a, d, e, f}; a shear entry c may
appear only as 0), order (1 or 2, default 1), y0 (default 0), yprime0
(order 2 only), A (target total integral, optional), initial (name or
{type, coeffs}), grid (nodes per segment, default 512), tol (default
1e-10), max_iter (default 200).

CSV output: header "x,y", one node per line, LF endings, 17 significant
digits; an internal breakpoint appears twice when the left and right values
differ there.

Exit codes: 0 success; 2 invalid input; 3 no admissible total integral;
4 iteration did not converge; 5 not contractive.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .analysis import Diagnostics, SolutionKind, solve_system
from .errors import (
    ArgumentOutOfRangeError,
    DegenerateMapError,
    DomainError,
    DomainMismatchError,
    InitialIntegralMismatchError,
    LConditionViolatedError,
    MissingTargetAError,
    NoAdmissibleAError,
    NonConvergentError,
    NotContractiveError,
    OrderingError,
    ProblemFileError,
    ShapeMismatchError,
    ShearUnsupportedError,
    ShiftMismatchError,
    TargetMismatchError,
    TilingError,
)
from .funcrep import SegmentedFunction
from .piecemeal import AffineGraphMap, Piecemealing
from .solver import (
    DEFAULT_MAX_ITER,
    DEFAULT_NODES,
    DEFAULT_TOL,
    SsdeProblem,
    build_initial,
    iterate_and_record,
    residual,
    solve,
    solve_transition,
)

_INVALID_INPUT = (
    ProblemFileError,
    TilingError,
    ShiftMismatchError,
    DegenerateMapError,
    ShearUnsupportedError,
    DomainMismatchError,
    ArgumentOutOfRangeError,
    OrderingError,
    LConditionViolatedError,
    MissingTargetAError,
    TargetMismatchError,
    InitialIntegralMismatchError,
    ShapeMismatchError,
    DomainError,
    NonConvergentError,
    ValueError,
    OSError,
)

_TOP_KEYS = {
    "interval",
    "maps",
    "order",
    "y0",
    "yprime0",
    "A",
    "initial",
    "grid",
    "tol",
    "max_iter",
}
_MAP_KEYS = {"a", "d", "e", "f", "c"}


def _scalar(value, what):
    """Exact scalar from a parsed JSON value (int, Fraction, or 'p/q')."""
    if isinstance(value, bool):
        raise ProblemFileError(f"{what} must be a number or rational string")
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ProblemFileError(f"{what}: bad rational string {value!r}") from exc
    if isinstance(value, float):
        return value
    raise ProblemFileError(f"{what} must be a number or rational string, got {value!r}")


@dataclass
class ProblemSpec:
    """A parsed problem file: the problem plus run parameters."""

    problem: SsdeProblem
    initial: object
    grid: int
    tol: float
    max_iter: int


def load_problem(path) -> ProblemSpec:
    """Parse and validate a problem file; see the module docstring."""
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh, parse_float=Fraction)
        except json.JSONDecodeError as exc:
            raise ProblemFileError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ProblemFileError(f"{path}: top level must be an object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ProblemFileError(f"{path}: unknown keys {sorted(unknown)}")

    interval = raw.get("interval")
    if not isinstance(interval, list) or len(interval) != 2:
        raise ProblemFileError("interval must be a [lo, hi] pair")
    lo = _scalar(interval[0], "interval lo")
    hi = _scalar(interval[1], "interval hi")

    maps_raw = raw.get("maps")
    if not isinstance(maps_raw, list) or not maps_raw:
        raise ProblemFileError("maps must be a nonempty list")
    maps = []
    for i, entry in enumerate(maps_raw, start=1):
        if not isinstance(entry, dict):
            raise ProblemFileError(f"map {i} must be an object")
        unknown = set(entry) - _MAP_KEYS
        if unknown:
            raise ProblemFileError(f"map {i}: unknown keys {sorted(unknown)}")
        if "c" in entry:
            c = _scalar(entry["c"], f"map {i} shear c")
            if c != 0:
                raise ShearUnsupportedError(
                    f"map {i}: shear c = {c}; only diagonal maps (c = 0) are supported"
                )
        missing = {"a", "d", "e", "f"} - set(entry)
        if missing:
            raise ProblemFileError(f"map {i}: missing keys {sorted(missing)}")
        maps.append(
            AffineGraphMap(
                _scalar(entry["a"], f"map {i} scale a"),
                _scalar(entry["d"], f"map {i} scale d"),
                _scalar(entry["e"], f"map {i} shift e"),
                _scalar(entry["f"], f"map {i} shift f"),
            )
        )
    piecemealing = Piecemealing.validate((lo, hi), maps)

    order = raw.get("order", 1)
    if order not in (1, 2):
        raise ProblemFileError("order must be 1 or 2")
    y0 = _scalar(raw.get("y0", 0), "y0")
    yprime0 = _scalar(raw["yprime0"], "yprime0") if "yprime0" in raw else None
    target = _scalar(raw["A"], "A") if "A" in raw else None
    try:
        problem = SsdeProblem(
            piecemealing=piecemealing, order=order, y0=y0, yprime0=yprime0, target_A=target
        )
    except ValueError as exc:
        raise ProblemFileError(str(exc)) from exc

    initial = raw.get("initial")
    if initial is not None and not isinstance(initial, (str, dict)):
        raise ProblemFileError("initial must be a name or {type, coeffs} object")
    if isinstance(initial, dict):
        unknown = set(initial) - {"type", "coeffs"}
        if unknown:
            raise ProblemFileError(f"initial: unknown keys {sorted(unknown)}")
        if "coeffs" in initial:
            if not isinstance(initial["coeffs"], list):
                raise ProblemFileError("initial coeffs must be a list")
            initial = {
                "type": initial.get("type", "constant"),
                "coeffs": [_scalar(c, "initial coeff") for c in initial["coeffs"]],
            }

    grid = raw.get("grid", DEFAULT_NODES)
    if not isinstance(grid, int) or grid < 2:
        raise ProblemFileError("grid must be an integer >= 2")
    tol_raw = raw.get("tol", DEFAULT_TOL)
    tol = float(tol_raw)
    if not tol > 0:
        raise ProblemFileError("tol must be positive")
    max_iter = raw.get("max_iter", DEFAULT_MAX_ITER)
    if not isinstance(max_iter, int) or max_iter < 1:
        raise ProblemFileError("max_iter must be a positive integer")

    return ProblemSpec(problem=problem, initial=initial, grid=grid, tol=tol, max_iter=max_iter)


# -- output formatting ------------------------------------------------------


def fmt(value) -> str:
    """17-significant-digit floats; rationals as p/q; ints plain."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(value)
    if value is None:
        return "none"
    return format(float(value), ".17g")


def _fmt_family(p, q) -> str:
    if q == 0:
        return fmt(p)
    if q == 1:
        qa = "A"
    elif q == -1:
        qa = "-A"
    else:
        qa = f"{fmt(q)}*A"
    if p == 0:
        return qa
    sign = " - " if (qa.startswith("-")) else " + "
    return f"{fmt(p)}{sign}{qa.lstrip('-')}"


def _json_value(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    return v


def canonical_problem_json(path) -> str:
    """Re-serialize a problem file in canonical form (rationals reduced)."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh, parse_float=Fraction)
    spec = load_problem(path)  # validation side effects
    pm = spec.problem.piecemealing
    out = {
        "interval": [
            _json_value(pm.exact_breakpoints[0]),
            _json_value(pm.exact_breakpoints[-1]),
        ],
        "order": spec.problem.order,
        "y0": _json_value(spec.problem.y0),
        "maps": [
            {
                "a": _json_value(m.exact[0]),
                "d": _json_value(m.exact[1]),
                "e": _json_value(m.exact[2]),
                "f": _json_value(m.exact[3]),
            }
            for m in pm.maps
        ],
        "grid": spec.grid,
        "tol": spec.tol,
        "max_iter": spec.max_iter,
    }
    if spec.problem.yprime0 is not None:
        out["yprime0"] = _json_value(spec.problem.yprime0)
    if spec.problem.target_A is not None:
        out["A"] = _json_value(spec.problem.target_A)
    if raw.get("initial") is not None:
        init = raw["initial"]
        if isinstance(init, dict) and "coeffs" in init:
            init = dict(init)
            init["coeffs"] = [_json_value(_scalar(c, "coeff")) for c in init["coeffs"]]
        out["initial"] = init
    return json.dumps(out, indent=2) + "\n"


def write_csv(f: SegmentedFunction, stream):
    """Emit a segmented function's nodes as CSV; see the module docstring."""
    stream.write("x,y\n")
    for j in range(f.n_segments):
        nodes = f.nodes(j)
        vals = f.segment_values(j)
        start = 0
        if j > 0 and f.values[int(f.offsets[j]) - 1] == vals[0]:
            start = 1  # continuous join: the left segment already emitted it
        for k in range(start, len(nodes)):
            stream.write(f"{nodes[k]:.17g},{vals[k]:.17g}\n")


def write_xy_csv(xs, ys, stream):
    stream.write("x,y\n")
    for x, y in zip(xs, ys):
        stream.write(f"{x:.17g},{y:.17g}\n")


def write_report(report, stream):
    """Key-value text form of a SolveReport."""
    stream.write(f"converged = {fmt(report.converged)}\n")
    stream.write(f"iterations = {report.iterations}\n")
    stream.write(f"residual = {fmt(report.residual)}\n")
    stream.write(f"residual_excluded_nodes = {report.residual_excluded_nodes}\n")
    stream.write(f"A_achieved = {fmt(report.A_achieved)}\n")
    stream.write(f"contraction_factor = {fmt(report.contraction)}\n")
    stream.write(f"a_posteriori_bound = {fmt(report.a_posteriori_bound)}\n")
    stream.write(f"experimental = {fmt(report.experimental)}\n")
    stream.write(f"deltas = {', '.join(fmt(d) for d in report.deltas)}\n")


# -- commands ---------------------------------------------------------------


def cmd_analyze(args) -> int:
    if args.echo:
        sys.stdout.write(canonical_problem_json(args.problem))
        return 0
    spec = load_problem(args.problem)
    problem = spec.problem
    pm = problem.piecemealing
    diag = Diagnostics.from_piecemealing(pm)
    if pm.is_exact:
        bp = ", ".join(fmt(b) for b in pm.exact_breakpoints)
    else:
        bp = ", ".join(fmt(float(b)) for b in pm.breakpoints)
    print(f"breakpoints = {bp}")
    print(f"width = {fmt(diag.width)}")
    print(f"l_condition_sum = {fmt(diag.l_condition_sum)}")
    print(f"contraction_factor = {fmt(diag.contraction_factor)}")
    print(f"negative_mass = {fmt(diag.negative_mass)}")
    print(f"forcing_mass = {fmt(diag.forcing_mass)}")
    if problem.order != 1:
        print("order = 2")
        return 0
    system = solve_system(pm, problem.y0)
    print(f"kind = {system.kind.value}")
    print(f"alpha = {fmt(system.alpha)}")
    print(f"beta = {fmt(system.beta)}")
    if system.kind is SolutionKind.UNIQUE:
        print(f"A = {fmt(system.A)}")
        for k, value in enumerate(system.boundary_values, start=1):
            print(f"y_{k} = {fmt(value)}")
        return 0
    if system.kind is SolutionKind.FAMILY:
        for k, (p, q) in enumerate(system.family, start=1):
            print(f"y_{k} = {_fmt_family(p, q)}")
        return 0
    return 3


def cmd_solve(args) -> int:
    spec = load_problem(args.problem)
    grid = args.grid if args.grid is not None else spec.grid
    tol = args.tol if args.tol is not None else spec.tol
    max_iter = args.max_iter if args.max_iter is not None else spec.max_iter
    report = solve(
        spec.problem,
        initial=spec.initial,
        nodes_per_segment=grid,
        tol=tol,
        max_iter=max_iter,
        force=args.force,
    )
    print(f"converged = {fmt(report.converged)}")
    print(f"iterations = {report.iterations}")
    print(f"delta_last = {fmt(report.deltas[-1]) if report.deltas else 'none'}")
    print(f"residual = {fmt(report.residual)}")
    print(f"A_achieved = {fmt(report.A_achieved)}")
    print(f"contraction_factor = {fmt(report.contraction)}")
    print(f"a_posteriori_bound = {fmt(report.a_posteriori_bound)}")
    print(f"experimental = {fmt(report.experimental)}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            write_csv(report.solution, fh)
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            write_report(report, fh)
    return 0 if report.converged else 4


def cmd_iterate(args) -> int:
    spec = load_problem(args.problem)
    grid = args.grid if args.grid is not None else spec.grid
    record = iterate_and_record(
        spec.problem,
        initial=spec.initial,
        steps=args.steps,
        nodes_per_segment=grid,
        force=args.force,
    )
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for i, it in enumerate(record.iterates):
        with open(outdir / f"f_{i}.csv", "w", encoding="utf-8", newline="\n") as fh:
            write_csv(it, fh)
    k = len(record.iterates) - 1
    if record.p_of_last is not None:
        with open(outdir / f"p_of_f_{k}.csv", "w", encoding="utf-8", newline="\n") as fh:
            write_csv(record.p_of_last, fh)
        with open(outdir / f"second_diff_f_{k}.csv", "w", encoding="utf-8", newline="\n") as fh:
            write_xy_csv(record.second_diff_nodes, record.second_diff_values, fh)
    print(f"iterates = {len(record.iterates)}")
    print(f"deltas = {', '.join(fmt(d) for d in record.deltas)}")
    return 0


def cmd_residual(args) -> int:
    spec = load_problem(args.problem)
    grid = args.grid if args.grid is not None else spec.grid
    y = build_initial(spec.problem, spec.initial, grid)
    print(f"residual = {fmt(residual(spec.problem, y))}")
    return 0


def cmd_bump(args) -> int:
    from .solver import bump  # local import keeps module init light

    a, b, c, d = args.a, args.b, args.c, args.d
    if not (a < b < c < d):
        raise OrderingError(f"bump knots must satisfy a < b < c < d, got {(a, b, c, d)}")
    report = solve_transition()
    lo = a - (b - a)
    hi = d + (d - c)
    xs = np.linspace(lo, hi, args.grid + 1)
    ys = bump(xs, a, b, c, d, step=report.solution)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            write_xy_csv(xs, ys, fh)
    else:
        write_xy_csv(xs, ys, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssde",
        description="Analyze and solve self-similar differential equations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="validate a problem file and print its boundary system")
    p.add_argument("problem", help="problem JSON file")
    p.add_argument("--echo", action="store_true", help="print the canonical problem JSON and exit")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("solve", help="iterate to the fixed point and report")
    p.add_argument("problem")
    p.add_argument("--out", help="write the solution CSV here")
    p.add_argument("--report", help="write the full report here")
    p.add_argument("--grid", type=int, help="nodes per segment (overrides the file)")
    p.add_argument("--tol", type=float, help="convergence tolerance (overrides the file)")
    p.add_argument("--max-iter", type=int, dest="max_iter", help="iteration cap")
    p.add_argument("--force", action="store_true", help="iterate even when not contractive")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("iterate", help="run a fixed number of steps, writing every iterate")
    p.add_argument("problem")
    p.add_argument("steps", type=int)
    p.add_argument("--outdir", default=".", help="directory for f_0.csv .. f_k.csv")
    p.add_argument("--grid", type=int)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("residual", help="residual of the file's initial function")
    p.add_argument("problem")
    p.add_argument("--grid", type=int)
    p.set_defaults(func=cmd_residual)

    p = sub.add_parser("bump", help="sample a smooth plateau built from the solved transition")
    p.add_argument("a", type=float)
    p.add_argument("b", type=float)
    p.add_argument("c", type=float)
    p.add_argument("d", type=float)
    p.add_argument("--grid", type=int, default=DEFAULT_NODES, help="sample count")
    p.add_argument("--out", help="write the CSV here instead of stdout")
    p.set_defaults(func=cmd_bump)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NoAdmissibleAError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except NotContractiveError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 5
    except _INVALID_INPUT as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
