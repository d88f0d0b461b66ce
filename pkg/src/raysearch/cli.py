"""Command-line front end.

Exit status: 0 success, 1 usage error, 2 infeasible / goal not hit,
3 verification failure. Errors go to stderr as a single line
``error[<kind>]: <message>``.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import warnings
from typing import Sequence

from . import analysis as an
from . import verify as verify_mod
from .error_models import ErrorModel
from .exceptions import RaySearchError
from .strategies import LEFT, RIGHT, StrategySpec
from .walk_sim import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_ITER,
    ErrorAssignment,
    GoalSpec,
    competitive_ratio,
    execute_line_walk,
    execute_mray_walk,
    write_trace_csv,
)

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_VERIFY = 0, 1, 2, 3
SWEEP_COLUMNS = ("model", "delta", "m", "doubling", "optimal", "mray", "sim_doubling", "sim_optimal")
SWEEP_SIM_J = 20


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x, digits: int) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return f"{x:.{digits}g}"
    return str(x)


def _emit(rows: list[dict], columns: Sequence[str], args) -> None:
    fmt = args.format or ("csv" if args.out else "table")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c), 12) for c in columns])
        text = buf.getvalue()
    else:
        cells = [[_fmt(r.get(c), 6) for c in columns] for r in rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) if cells else len(c)
                  for i, c in enumerate(columns)]
        lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
        lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _model(args) -> ErrorModel:
    return ErrorModel.parse(args.model, args.delta)


def _float_range(text: str) -> list[float]:
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"delta range must be a:b:s, got {text!r}") from None
    if not step > 0 or b < a:
        raise UsageError(f"delta range needs step > 0 and a <= b, got {text!r}")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + k * step, 12) for k in range(count)]


def _int_list(text: str | None) -> list[int | None]:
    if text is None:
        return [None]
    if ":" in text:
        a, b = (int(x) for x in text.split(":"))
        return list(range(a, b + 1))
    return [int(x) for x in text.split(",")]


def _goal(args) -> GoalSpec:
    text = args.goal
    if text.startswith("just-beyond:"):
        return GoalSpec.beyond_step(int(text.split(":", 1)[1]), args.epsilon)
    side = LEFT if args.side == "left" else RIGHT
    return GoalSpec.absolute(float(text), side=side, ray=args.ray)


def _run_walk(args):
    model = _model(args)
    m = args.m
    default = f"mray:{m}" if m else "doubling"
    s = StrategySpec.parse(args.strategy or default, model)
    goal = _goal(args)
    if m:
        rule = (ErrorAssignment.error_free() if args.assignment == "error-free"
                else ErrorAssignment.mray_worst_case(beta=args.beta))
        return execute_mray_walk(s, int(m), rule, model, goal, args.max_iter)
    if args.assignment == "error-free":
        rule = ErrorAssignment.error_free()
    else:
        side = s.direction(goal.just_beyond) if goal.just_beyond else goal.side
        rule = ErrorAssignment.worst_case(side)
    return execute_line_walk(s, rule, model, goal, args.max_iter)


# ---------------------------------------------------------------------------
# commands


def cmd_factor(args) -> int:
    model = _model(args)
    reports = [an.doubling_factor(model), an.optimal_factor(model)]
    for m in _int_list(args.m):
        if m is not None:
            reports.append(an.mray_factor(model, m))
    _emit([r.row() for r in reports], an.FACTOR_COLUMNS, args)
    return EXIT_OK


def cmd_simulate(args) -> int:
    trace = _run_walk(args)
    out = sys.stdout
    print(f"hit: {'yes' if trace.hit else 'no'}", file=out)
    print(f"hit_step: {trace.hit_step if trace.hit else '-'}", file=out)
    print(f"goal_distance: {trace.distance:.6g}", file=out)
    print(f"path_length: {trace.path_length:.12g}", file=out)
    tail = trace.drift_per_iteration[-5:]
    start = trace.iterations - len(tail) + 1
    print("drift_tail: " + ", ".join(f"D{start + i}={x:.6g}" for i, x in enumerate(tail)), file=out)
    if not trace.hit:
        print("ratio: -", file=out)
        return EXIT_INFEASIBLE
    print(f"ratio: {competitive_ratio(trace):.12g}", file=out)
    return EXIT_OK


def cmd_trace_export(args) -> int:
    trace = _run_walk(args)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_trace_csv(trace, fh)
    else:
        write_trace_csv(trace, sys.stdout)
    return EXIT_OK if trace.hit else EXIT_INFEASIBLE


def _sim_ratio(model: ErrorModel, s: StrategySpec) -> float | None:
    try:
        trace = execute_line_walk(s, ErrorAssignment.worst_case(RIGHT), model,
                                  GoalSpec.beyond_step(2 * SWEEP_SIM_J), max_iter=2 * SWEEP_SIM_J + 4)
    except RaySearchError:
        return None
    return competitive_ratio(trace) if trace.hit else None


def cmd_sweep(args) -> int:
    deltas = _float_range(args.delta_range) if args.delta_range else [args.delta]
    rows = []
    for delta in deltas:
        model = ErrorModel.parse(args.model, delta)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            dbl = an.doubling_factor(model)
        opt = an.optimal_factor(model)
        for m in _int_list(args.m):
            row = {"model": model.kind.value, "delta": delta, "m": m,
                   "doubling": dbl.factor, "optimal": opt.factor}
            if m is not None:
                row["mray"] = an.mray_factor(model, m).factor
            if args.simulate:
                row["sim_doubling"] = _sim_ratio(model, StrategySpec.doubling())
                row["sim_optimal"] = _sim_ratio(model, StrategySpec.optimal_line(model))
            rows.append(row)
    _emit(rows, SWEEP_COLUMNS, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    ok = True
    for res in verify_mod.run_all(quick=args.quick):
        print(res.line())
        ok &= res.passed
    if args.quick:
        print("[SKIP]  4 brute-force adversary structure (--quick)")
    print("ALL PASS" if ok else "FAILURES")
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="raysearch", description="Line and m-ray search with movement errors.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, walk=False):
        sp.add_argument("--model", default="percentual", choices=["percentual", "multiplicative"])
        sp.add_argument("--delta", type=float, default=0.0)
        sp.add_argument("--m", default=None, help="number of rays (sweep/factor accept a:b or a,b,...)")
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=["table", "csv"], default=None)
        if walk:
            sp.add_argument("--strategy", default=None,
                            help="doubling | geometric:<alpha> | mray:<m> | optimal | file:<path>")
            sp.add_argument("--goal", default="just-beyond:4", help="d | just-beyond:<j>")
            sp.add_argument("--side", choices=["left", "right"], default="right")
            sp.add_argument("--ray", type=int, default=0)
            sp.add_argument("--assignment", choices=["worst-case", "error-free"], default="worst-case")
            sp.add_argument("--beta", type=float, default=None, help="m-ray short-step error")
            sp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
            sp.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)

    sp = sub.add_parser("factor", help="closed-form competitive factors")
    common(sp)
    sp.set_defaults(func=cmd_factor)

    sp = sub.add_parser("simulate", help="run one walk and report its ratio")
    common(sp, walk=True)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("trace-export", help="run one walk and write its trace as CSV")
    common(sp, walk=True)
    sp.set_defaults(func=cmd_trace_export)

    sp = sub.add_parser("sweep", help="factor grid over delta (and m)")
    common(sp)
    sp.add_argument("--delta-range", default=None, help="a:b:s, inclusive")
    sp.add_argument("--simulate", action="store_true", help="add simulated worst-case columns")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="run the acceptance checks")
    sp.add_argument("--quick", action="store_true", help="skip exhaustive enumeration")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "m", None) is not None and args.command in ("simulate", "trace-export"):
            args.m = int(args.m)
        return args.func(args)
    except UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RaySearchError, ValueError) as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OverflowError as exc:
        print(f"error[OverflowError]: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
