"""Command-line front end.

    dyadic-weights check --periodic 0.6,0.7 --depth 12 --p 2
    dyadic-weights counterexample --p 6 --out cert.json
    dyadic-weights lambda-sweep --input weight.json --p 2 --lambda 0:1:0.1 --format csv
    dyadic-weights paraproduct --periodic 0.6,0.7 --depth 8,10,12 --p 2 --lambda 0.5,1

Exit codes: 0 ok, 2 bad input, 3 invariant violation, 4 internal verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile

from .classes import ap_functional, buckley_functional, class_report, rhp_functional
from .dyadic import HaarSeries, WeightTree, haar_coeffs_from_tree, power_weight, tree_from_haar_coeffs
from .errors import DyadicError, SplitOutOfRange
from .paraexp import lambda_op
from .paraproduct import MAX_DEPTH, SWEEP_COLUMNS, resolvent_sweep
from .periodic import (
    PeriodicSpec,
    build_counterexample,
    periodic_weight,
    rhp_constant_periodic,
    truncated_rhp_functional,
)

log = logging.getLogger(__name__)

MAX_TREE_DEPTH = 24
EXIT_OK, EXIT_BAD_INPUT, EXIT_INVARIANT, EXIT_VERIFY = 0, 2, 3, 4


class BadInput(Exception):
    pass


class VerificationFailed(Exception):
    pass


def parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise BadInput(f"cannot parse number list {text!r}") from exc


def parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise BadInput(f"cannot parse integer list {text!r}") from exc


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (stop included) or a comma list."""
    if ":" not in text:
        return parse_floats(text)
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise BadInput(f"grid must be start:stop:step, got {text!r}") from exc
    if step <= 0 or stop < start:
        raise BadInput(f"empty grid {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def load_input(args):
    """Return a WeightTree, PeriodicSpec or HaarSeries from the command line."""
    if args.periodic and args.input:
        raise BadInput("give either --input or --periodic, not both")
    if args.periodic:
        return PeriodicSpec(tuple(parse_floats(args.periodic)))
    if not args.input:
        raise BadInput("an input weight is required (--input PATH or --periodic LIST)")
    try:
        with open(args.input) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise BadInput(f"cannot read {args.input}: {exc}") from exc
    if not isinstance(data, dict):
        raise BadInput("input JSON must be an object")
    try:
        if "splits" in data:
            return WeightTree.from_dict(data)
        if "coeffs" in data:
            return HaarSeries.from_dict(data).check_paraexp()
        if "s" in data:
            return PeriodicSpec.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SplitOutOfRange):
            raise
        raise BadInput(f"malformed input: {exc}") from exc
    raise BadInput("input JSON has none of 'splits', 'coeffs', 's'")


def tree_at(obj, depth: int) -> WeightTree:
    if isinstance(obj, PeriodicSpec):
        return periodic_weight(obj, depth)
    if isinstance(obj, HaarSeries):
        obj = tree_from_haar_coeffs(obj)
    if depth > obj.depth:
        raise BadInput(f"requested depth {depth} exceeds the input depth {obj.depth}")
    return obj.truncate(depth)


def default_depth(obj) -> int:
    return 12 if isinstance(obj, PeriodicSpec) else obj.depth


def check_depths(depths, cap):
    for d in depths:
        if not 1 <= d <= cap:
            raise BadInput(f"depth {d} outside [1, {cap}]")
    return depths


def check_ps(ps):
    if not ps:
        raise BadInput("at least one exponent p is required")
    for p in ps:
        if not p > 1:
            raise BadInput(f"exponent p must exceed 1, got {p}")
    return ps


def check_lambdas(lams):
    for lam in lams:
        if not -1 <= lam <= 1:
            raise BadInput(f"lambda must lie in [-1, 1], got {lam}")
    return lams


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if not math.isfinite(value):
            raise VerificationFailed(f"non-finite value {value} in output")
        return f"{value:.17g}"
    return str(value)


def to_csv(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def to_json(obj) -> str:
    try:
        return json.dumps(obj, indent=2, allow_nan=False) + "\n"
    except ValueError as exc:
        raise VerificationFailed(f"non-finite value in output: {exc}") from exc


def emit(text: str, path: str | None):
    """Write to ``path`` atomically, or to stdout."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_check(args) -> str:
    obj = load_input(args)
    depths = check_depths(parse_ints(args.depth) if args.depth else [default_depth(obj)], MAX_TREE_DEPTH)
    ps = check_ps(parse_floats(args.p))
    reports = [class_report(tree_at(obj, d), ps) for d in depths]
    if args.format == "csv":
        rows = [row for r in reports for row in r.csv_rows()]
        return to_csv(rows, reports[0].CSV_COLUMNS)
    out = {"reports": [r.to_dict() for r in reports]}
    if isinstance(obj, PeriodicSpec):
        limits = {}
        for p in ps:
            try:
                limits[str(p)] = rhp_constant_periodic(obj, p)
            except DyadicError:
                limits[str(p)] = None
        out["rhp_constant_periodic"] = limits
    return to_json(out)


def cmd_counterexample(args) -> str:
    ps = check_ps(parse_floats(args.p))
    if len(ps) != 1:
        raise BadInput("counterexample takes a single exponent")
    p = ps[0]
    max_depth = check_depths(parse_ints(args.depth), MAX_TREE_DEPTH)[-1] if args.depth else MAX_TREE_DEPTH
    cert = build_counterexample(p, delta_margin=args.delta_margin, overshoot=args.overshoot)
    problems = cert.problems()
    n = cert.n
    limit = rhp_constant_periodic(cert.spec_P, p)
    rows = []
    for depth in range(n + 2, max_depth + 1, n):
        rows.append({
            "depth": depth,
            "rhp_omega": rhp_functional(periodic_weight(cert.spec_P, depth), p),
            "rhp_omega_lambda": rhp_functional(periodic_weight(cert.spec_Plam, depth), p),
            "rhp_constant_periodic": limit,
        })
    if not rows:
        raise BadInput(f"depth {max_depth} is too shallow for period {n}")
    for row in rows:
        if row["rhp_omega"] > limit + 1e-6:
            problems.append(f"depth {row['depth']}: RH_p functional of w exceeds its exact constant")
    growth = (
        truncated_rhp_functional(cert.spec_Plam, p, max_depth)
        / truncated_rhp_functional(cert.spec_Plam, p, n + 2)
    )
    status = "FAIL" if problems else "PASS"
    log.info("certificate for p=%s: n=%d lambda=%.6f %s", p, n, cert.lam, status)
    if problems:
        raise VerificationFailed("; ".join(problems))
    if args.format == "csv":
        return to_csv(rows, ("depth", "rhp_omega", "rhp_omega_lambda", "rhp_constant_periodic"))
    return to_json({
        "certificate": cert.to_dict(),
        "verification": {
            "status": status,
            "divergence_factor": growth,
            "divergence_depths": [n + 2, max_depth],
        },
        "depth_sweep": rows,
    })


LAMBDA_SWEEP_COLUMNS = ("lambda", "p", "depth", "rhp_functional", "ap_functional", "buckley_functional")
BASELINE_COLUMNS = ("power_rhp_functional", "power_ap_functional")


def cmd_lambda_sweep(args) -> str:
    obj = load_input(args)
    depth = check_depths(parse_ints(args.depth) if args.depth else [default_depth(obj)], MAX_TREE_DEPTH)[-1]
    ps = check_ps(parse_floats(args.p))
    lams = check_lambdas(parse_grid(args.lam))
    tree = tree_at(obj, depth)
    rows = []
    for lam in lams:
        moved = lambda_op(tree, lam)
        baseline = power_weight(tree, lam) if args.baseline and 0 <= lam <= 1 else None
        for p in ps:
            row = {
                "lambda": lam,
                "p": p,
                "depth": depth,
                "rhp_functional": rhp_functional(moved, p),
                "ap_functional": ap_functional(moved, p),
                "buckley_functional": buckley_functional(moved, p),
            }
            if baseline is not None:
                row["power_rhp_functional"] = rhp_functional(baseline, p)
                row["power_ap_functional"] = ap_functional(baseline, p)
            rows.append(row)
    columns = LAMBDA_SWEEP_COLUMNS + (BASELINE_COLUMNS if args.baseline else ())
    if args.format == "csv":
        return to_csv(rows, columns)
    return to_json({"rows": rows})


def cmd_paraproduct(args) -> str:
    obj = load_input(args)
    depths = check_depths(parse_ints(args.depth) if args.depth else [min(default_depth(obj), MAX_DEPTH)], MAX_DEPTH)
    ps = check_ps(parse_floats(args.p))
    lams = check_lambdas(parse_grid(args.lam))
    if isinstance(obj, HaarSeries):
        series = obj
    else:
        series = haar_coeffs_from_tree(tree_at(obj, max(depths)) if isinstance(obj, PeriodicSpec) else obj)
    rows = []
    for p in ps:
        rows.extend(resolvent_sweep(series, p, depths, lams, trials=args.trials, seed=args.seed))
    if args.format == "csv":
        return to_csv(rows, SWEEP_COLUMNS)
    return to_json({"rows": rows})


COMMANDS = {
    "check": cmd_check,
    "counterexample": cmd_counterexample,
    "lambda-sweep": cmd_lambda_sweep,
    "paraproduct": cmd_paraproduct,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dyadic-weights", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, lam_default=None):
        sp.add_argument("--input", help="JSON weight tree, Haar series or periodic spec")
        sp.add_argument("--periodic", help="comma-separated periodic splits s1,s2,...")
        sp.add_argument("--depth", help="depth, or comma list of depths")
        sp.add_argument("--p", default="2", help="comma list of exponents")
        sp.add_argument("--lambda", dest="lam", default=lam_default, help="start:stop:step or comma list")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="output path (stdout if omitted)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    common(sub.add_parser("check", help="class constants of a weight"))
    ce = sub.add_parser("counterexample", help="RH_p counterexample certificate")
    common(ce)
    ce.add_argument("--delta-margin", type=float, default=0.5)
    ce.add_argument("--overshoot", type=float, default=0.5)
    ls = sub.add_parser("lambda-sweep", help="class functionals of w_lambda over a lambda grid")
    common(ls, lam_default="0:1:0.1")
    ls.add_argument("--baseline", action="store_true", help="add pointwise-power columns")
    pp = sub.add_parser("paraproduct", help="resolvent norm bounds next to RH_p functionals")
    common(pp, lam_default="0:1:0.25")
    pp.add_argument("--trials", type=int, default=16)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        text = COMMANDS[args.command](args)
        emit(text, args.out)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except SplitOutOfRange as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (DyadicError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
