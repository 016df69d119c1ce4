"""Command-line front end.

    retrialcap evaluate --c 100 --g 3 --m 0
    retrialcap sweep --c 100 --g 5 --m 5 --axis mu_r 0.1 2.0 0.1
    retrialcap optimize o3 --pd0 1e-3 --pb0 1e-2
    retrialcap validate --seed 1
    retrialcap dump-q --c 2 --g 1 --m 1 --output q.txt

Exit codes: 0 ok, 2 usage/validation, 3 infeasible optimisation, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product

from .errors import CapacityError, DomainError, SolverError, StructuralError
from .generator import build_generator, dump_coordinates
from .measures import evaluate
from .model import DEFAULT_RATES, ModelParams
from .optimize import (
    QosTargets,
    solve_o1_algI,
    solve_o1_algII,
    solve_o2_algIII,
    solve_o3,
    solve_o4_algV,
)
from .validate import FAULTS, run_validation

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_NUMERIC = 0, 2, 3, 4

PARAM_FIELDS = ("c", "g", "m", "lambda_n", "lambda_h", "nu", "p", "mu_r")
INT_FIELDS = ("c", "g", "m")
MEASURE_FIELDS = ("P_b", "P_d", "M_b", "M_o", "M_s")
COLUMNS = PARAM_FIELDS + MEASURE_FIELDS
PROBLEMS = ("o1-algI", "o1-algII", "o2", "o3", "o4")


class UsageError(Exception):
    pass


# ------------------------------------------------------------- parsing ------


def read_config(path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _add_model_args(p: argparse.ArgumentParser, sweepable: bool = False) -> None:
    g = p.add_argument_group("model")
    for name in PARAM_FIELDS:
        flag = "--" + name.replace("_", "-")
        kind = "integer" if name in INT_FIELDS else "real"
        default = "" if name in INT_FIELDS else f" (default {DEFAULT_RATES[name]:g})"
        g.add_argument(flag, dest=name, default=None, help=f"{kind}{default}")
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--method", choices=("replace-column", "gth"), default="replace-column")


def _add_output_args(p: argparse.ArgumentParser, default: str) -> None:
    p.add_argument("--format", choices=("csv", "json"), default=default)
    p.add_argument("--output", "-o", help="write here instead of stdout")


def _coerce(name: str, value):
    if value is None:
        return None
    try:
        if name in INT_FIELDS:
            f = float(value)
            if not f.is_integer():
                raise ValueError
            return int(f)
        return float(value)
    except (TypeError, ValueError):
        kind = "an integer" if name in INT_FIELDS else "a number"
        raise UsageError(f"--{name.replace('_', '-')}: expected {kind}, got {value!r}") from None


def _model_values(args, optional=()) -> dict:
    values = {}
    if getattr(args, "config", None):
        values.update({k: v for k, v in read_config(args.config).items() if k in PARAM_FIELDS})
    for name in PARAM_FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    values = {k: _coerce(k, v) for k, v in values.items()}
    for name, default in DEFAULT_RATES.items():
        values.setdefault(name, default)
    missing = [n for n in INT_FIELDS if n not in values and n not in optional]
    if missing:
        raise UsageError("missing required parameter(s): " + ", ".join("--" + n for n in missing))
    return values


def _params(values: dict) -> ModelParams:
    try:
        return ModelParams(**values)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


# -------------------------------------------------------------- output ------


def _fmt(value):
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def render(records: list[dict], fmt: str, columns=None, single: bool = False) -> str:
    if fmt == "json":
        payload = records[0] if single and len(records) == 1 else records
        return json.dumps(payload, indent=2) + "\n"
    columns = columns or list(records[0])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for rec in records:
        w.writerow([_fmt(rec.get(c)) for c in columns])
    return buf.getvalue()


def emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _record(params: ModelParams, method) -> dict:
    pm = evaluate(params, method)
    rec = {f: getattr(params, f) for f in PARAM_FIELDS}
    rec.update(pm.as_dict())
    return rec


# ---------------------------------------------------------- subcommands -----


def run_evaluate(args) -> int:
    params = _params(_model_values(args))
    emit(render([_record(params, args.method)], args.format, COLUMNS, single=True), args.output)
    return EXIT_OK


def axis_values(name: str, start: str, stop: str, step: str) -> list:
    if name not in PARAM_FIELDS:
        raise UsageError(f"unknown sweep axis {name!r}; choose from {', '.join(PARAM_FIELDS)}")
    a, b, h = (_coerce(name if name in INT_FIELDS else "lambda_n", v) for v in (start, stop, step))
    if not h > 0:
        raise UsageError(f"axis {name}: step must be > 0")
    if b < a:
        return []
    n = int(math.floor((b - a) / h + 1e-9)) + 1
    if name in INT_FIELDS:
        return [a + i * h for i in range(n)]
    return [float(f"{a + i * h:.12g}") for i in range(n)]


def _jobs(args) -> int:
    raw = args.jobs if args.jobs is not None else os.environ.get("RETRIALCAP_JOBS", "1")
    try:
        jobs = int(raw)
    except ValueError:
        raise UsageError(f"--jobs / RETRIALCAP_JOBS must be an integer, got {raw!r}") from None
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")
    return jobs


def _evaluate_point(item):
    values, method = item
    return _record(ModelParams(**values), method)


def run_sweep(args) -> int:
    if not args.axis:
        raise UsageError("sweep needs at least one --axis NAME START STOP STEP")
    if len(args.axis) > 2:
        raise UsageError("sweep supports at most two axes")
    names = [a[0] for a in args.axis]
    if len(set(names)) != len(names):
        raise UsageError("sweep axes must be distinct")
    base = _model_values(args, optional=names)
    axes = [axis_values(*a) for a in args.axis]
    points = []
    for combo in product(*axes):
        values = dict(base, **dict(zip(names, combo)))
        _params(values)
        points.append(values)
    if not points:
        raise UsageError("sweep grid is empty")

    jobs = _jobs(args)
    items = [(v, args.method) for v in points]
    if jobs == 1:
        records = [_evaluate_point(it) for it in items]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_evaluate_point, items))
    emit(render(records, args.format, COLUMNS), args.output)
    return EXIT_OK


def _targets(args) -> QosTargets:
    try:
        return QosTargets(args.pd0, args.pb0)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"optimize {args.problem} needs " + ", ".join("--" + n.replace("_", "-") for n in missing))


def run_optimize(args) -> int:
    targets = _targets(args)
    rates = {k: v for k, v in _model_values(args, optional=INT_FIELDS).items() if k not in INT_FIELDS}
    common = dict(rates=rates, linear=args.linear)
    prob = args.problem
    if prob in ("o1-algI", "o1-algII", "o2"):
        _need(args, "c")
        if args.x is None and not (prob == "o1-algII" and args.m is not None) and args.g is None:
            raise UsageError(f"optimize {prob} needs --x")
    if prob in ("o1-algI", "o1-algII"):
        _need(args, "pd0")
    if prob == "o2":
        _need(args, "pb0")
    if prob in ("o3", "o4"):
        _need(args, "pd0", "pb0")
    if prob == "o4":
        _need(args, "x")
    if args.trace and args.format != "json":
        raise UsageError("--trace output requires --format json")
    c = _coerce("c", args.c)
    g = _coerce("g", args.g)
    m = _coerce("m", args.m)
    x = args.x if args.x is not None else 0

    if prob == "o1-algI":
        res = solve_o1_algI(c, x, targets, args.m_cap, g=g, **common)
    elif prob == "o1-algII":
        res = solve_o1_algII(c, x, targets, m=m, **common)
    elif prob == "o2":
        res = solve_o2_algIII(c, x, targets, args.m_cap, g=g, **common)
    elif prob == "o3":
        res = solve_o3(
            targets,
            args.strategy,
            range(args.m_min, args.m_max + 1),
            range(args.c_min, args.c_max + 1),
            **common,
        )
    else:
        res = solve_o4_algV(targets, x, range(max(args.c_min, 2), args.c_max + 1), **common)

    rec = res.as_dict(with_trace=args.trace)
    if args.format == "json":
        emit(json.dumps(rec, indent=2) + "\n", args.output)
    else:
        rec["notes"] = " | ".join(rec["notes"])
        emit(render([rec], "csv", ["problem", "feasible", "c", "g", "m", "P_b", "P_d", "notes"]), args.output)
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def run_validate(args) -> int:
    results = run_validation(seed=args.seed, fault=args.inject_fault, quick=args.quick)
    if args.format == "json":
        text = json.dumps([r.__dict__ for r in results], indent=2) + "\n"
    else:
        passed = sum(r.passed for r in results)
        text = "".join(r.line() + "\n" for r in results)
        text += f"{passed}/{len(results)} checks passed\n"
    if args.reference_report:
        from .reference import report

        text += "".join(r.line() + "\n" for r in report())
    emit(text, args.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_USAGE


def run_dump_q(args) -> int:
    params = _params(_model_values(args))
    Qg = build_generator(params)
    dump_coordinates(Qg, args.output or sys.stdout)
    return EXIT_OK


# ---------------------------------------------------------------- main ------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="retrialcap", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="performance measures for one parameter set")
    _add_model_args(p)
    _add_output_args(p, "json")
    p.set_defaults(func=run_evaluate)

    p = sub.add_parser("sweep", help="measures over a one- or two-axis grid")
    _add_model_args(p)
    _add_output_args(p, "csv")
    p.add_argument("--axis", nargs=4, action="append", metavar=("NAME", "START", "STOP", "STEP"))
    p.add_argument("--jobs", type=str, default=None, help="worker processes (env RETRIALCAP_JOBS)")
    p.set_defaults(func=run_sweep)

    p = sub.add_parser("optimize", help="capacity-planning problems")
    p.add_argument("problem", choices=PROBLEMS)
    _add_model_args(p)
    _add_output_args(p, "json")
    p.add_argument("--x", type=float, help="percentage of c used to set g (or m)")
    p.add_argument("--pd0", type=float, help="dropping-probability bound")
    p.add_argument("--pb0", type=float, help="blocking-probability bound")
    p.add_argument("--m-cap", type=int, default=None, help="orbit-size ceiling (default 2c)")
    p.add_argument("--m-min", type=int, default=0)
    p.add_argument("--m-max", type=int, default=0, help="o3 orbit range upper end (default 0)")
    p.add_argument("--c-min", type=int, default=1)
    p.add_argument("--c-max", type=int, default=500)
    p.add_argument("--strategy", choices=("exhaustive", "paperIV"), default="exhaustive")
    p.add_argument("--linear", action="store_true", help="full scans instead of bisection")
    p.add_argument("--trace", action="store_true", help="include every evaluated point")
    p.set_defaults(func=run_optimize)

    p = sub.add_parser("validate", help="run the oracle self-checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-fault", choices=FAULTS, default=None)
    p.add_argument("--quick", action="store_true", help="shorter simulation horizon")
    p.add_argument("--reference-report", action="store_true", help="append the reference-value comparison")
    _add_output_args(p, "csv")
    p.set_defaults(func=run_validate)

    p = sub.add_parser("dump-q", help="write the generator as 'row col value' lines")
    _add_model_args(p)
    p.add_argument("--output", "-o")
    p.set_defaults(func=run_dump_q)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"retrialcap {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, StructuralError, CapacityError) as exc:
        print(f"retrialcap {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"retrialcap {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
