"""Command line interface: ``circnorm {exact,estimate,sweep,verify}``.

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 verification failure, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import estimator as est
from . import norms
from . import verify as ver
from .circulant import Circulant, TwoParamCirculant

SWEEP_FIELDS = ("n", "a", "b", "p", "lower", "upper_thm4", "upper_thm5",
                "upper_combined", "estimate", "gap_ratio", "certificate")


def fmt(x) -> str:
    """15 significant digits, '.' separator, ``inf`` for infinity."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.15g}"


def _exponent(text):
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if math.isnan(p) or p < 1:
        raise argparse.ArgumentTypeError(f"p must satisfy 1 <= p <= inf, got {text}")
    return p


def _finite(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text}")
    return x


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _row(text):
    try:
        return tuple(_finite(t) for t in text.split(","))
    except argparse.ArgumentTypeError:
        raise argparse.ArgumentTypeError(f"bad first row: {text!r}")


def _add_family(parser, required=True):
    parser.add_argument("--n", type=_positive_int, required=required, help="dimension")
    parser.add_argument("--a", type=_finite, required=required, help="diagonal value")
    parser.add_argument("--b", type=_finite, required=required, help="off-diagonal value (>= 0)")


def _add_estimator(parser):
    parser.add_argument("--restarts", type=_positive_int, default=16)
    parser.add_argument("--max-iter", type=_positive_int, default=10000)
    parser.add_argument("--tol", type=_finite, default=1e-12)
    parser.add_argument("--seed", type=_seed, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="circnorm", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="closed-form norm or certified interval for A(n,a,b)")
    _add_family(p)
    p.add_argument("--p", type=_exponent, required=True, help="exponent in [1, inf]")

    p = sub.add_parser("estimate", help="numerical p-norm estimate by dual power iteration")
    _add_family(p, required=False)
    p.add_argument("--first-row", type=_row, help="comma-separated first row (instead of --n/--a/--b)")
    p.add_argument("--p", type=_exponent, required=True)
    p.add_argument("--witness", action="store_true", help="also print the maximizing vector")
    _add_estimator(p)

    p = sub.add_parser("sweep", help="bounds and estimates over a geometric p grid")
    _add_family(p)
    p.add_argument("--p-min", type=_finite, default=2.0)
    p.add_argument("--p-max", type=_finite, default=16.0)
    p.add_argument("--p-steps", type=_positive_int, default=8)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_estimator(p)

    p = sub.add_parser("verify", help="run the randomized self-check suites")
    p.add_argument("--max-n", type=int, default=16)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--cases", type=int, default=200)
    return ap


def _family(parser, args) -> TwoParamCirculant:
    try:
        return TwoParamCirculant(args.n, args.a, args.b)
    except ValueError as exc:
        parser.error(str(exc))


def _options(parser, args) -> est.EstimatorOptions:
    try:
        return est.EstimatorOptions(args.restarts, args.max_iter, args.tol, args.seed)
    except ValueError as exc:
        parser.error(str(exc))


def format_result(r: norms.NormResult) -> str:
    if r.is_exact:
        return f"EXACT {fmt(r.value)} ({r.certificate})"
    return f"INTERVAL [{fmt(r.lower)}, {fmt(r.upper)}] ({r.certificate})"


def cmd_exact(parser, args, out) -> int:
    c = _family(parser, args)
    r = norms.norm_p(c, args.p)
    print(format_result(r), file=out)
    return 0


def cmd_estimate(parser, args, out) -> int:
    if args.first_row is not None:
        if any(v is not None for v in (args.n, args.a, args.b)):
            parser.error("use either --first-row or --n/--a/--b, not both")
        c = Circulant(args.first_row)
    else:
        if any(v is None for v in (args.n, args.a, args.b)):
            parser.error("--n, --a and --b are required without --first-row")
        c = _family(parser, args)
    rep = est.estimate_norm_p(c, args.p, _options(parser, args))
    print(f"ESTIMATE {fmt(rep.value)} converged={str(rep.converged).lower()} "
          f"iterations={rep.iterations_used} restarts={rep.restarts_run}", file=out)
    if args.witness:
        print("WITNESS " + ",".join(fmt(v) for v in rep.witness), file=out)
    return 0


def p_grid(p_min, p_max, steps):
    if steps == 1:
        return [p_min]
    return [float(p) for p in np.geomspace(p_min, p_max, steps)]


def sweep_rows(c: TwoParamCirculant, grid, opts) -> list[dict]:
    rows = []
    for p in grid:
        r = norms.norm_p(c, p)
        u4, u5 = norms.upper_thm4(c, p), norms.upper_thm5(c, p)
        # the combined upper end is the interval's own upper end (exact value if closed form)
        upper = r.upper
        e = est.estimate_norm_p(c, p, opts).value
        rows.append({
            "n": c.n, "a": c.a, "b": c.b, "p": p,
            "lower": r.lower, "upper_thm4": u4, "upper_thm5": u5,
            "upper_combined": upper, "estimate": e,
            "gap_ratio": upper / r.lower if r.lower > 0 else 1.0,
            "certificate": str(r.certificate),
        })
    return rows


def cmd_sweep(parser, args, out) -> int:
    c = _family(parser, args)
    if args.p_min < 2:
        parser.error("--p-min must be >= 2")
    if args.p_max < args.p_min:
        parser.error("--p-max must be >= --p-min")
    rows = sweep_rows(c, p_grid(args.p_min, args.p_max, args.p_steps), _options(parser, args))
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(SWEEP_FIELDS)
        for row in rows:
            w.writerow([row[k] if k == "certificate" else fmt(row[k]) for k in SWEEP_FIELDS])
    else:
        data = [{k: (row[k] if isinstance(row[k], (str, int)) else float(fmt(row[k])))
                 for k in SWEEP_FIELDS} for row in rows]
        json.dump(data, out, indent=2)
        out.write("\n")
    return 0


def cmd_verify(parser, args, out) -> int:
    if not 1 <= args.max_n <= 256:
        parser.error("--max-n must be in [1, 256]")
    if args.cases < 1:
        parser.error("--cases must be >= 1")
    results = ver.run_all(args.max_n, args.seed, args.cases)
    for res in results:
        status = "PASS" if res.ok else "FAIL"
        print(f"{status} {res.name} {res.passed}/{res.total}", file=out)
        for case in res.failures[:10]:
            print(f"  failing case [{res.name}]: {json.dumps(case, default=float)}", file=sys.stderr)
    ok = all(r.ok for r in results)
    print("ALL PASS" if ok else "VERIFICATION FAILED", file=out)
    return 0 if ok else 1


COMMANDS = {"exact": cmd_exact, "estimate": cmd_estimate, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv=None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return COMMANDS[args.command](parser, args, out or sys.stdout)


if __name__ == "__main__":
    raise SystemExit(main())
