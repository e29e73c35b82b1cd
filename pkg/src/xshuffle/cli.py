"""Command-line interface: ``xshuffle <command> ...``.

Exit codes: 0 success, 1 usage error, 2 cap exceeded, 3 failed invariant or
disagreeing methods.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import counting, extremal, oracle, series
from .errors import CapExceeded, InvariantFailure, ParseError
from .perm import format_cycles, parse_cycles

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_INVARIANT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Usage(Exception):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _default_threads() -> int:
    raw = os.environ.get("XSHUFFLE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _rational(p: Fraction) -> str:
    return f"{p.numerator}/{p.denominator}"


def _emit_rows(args, header: list[str], rows: list[list], payload):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(header)
        out.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        for row in rows:
            print("  ".join(str(x) for x in row))


def cmd_mult(args) -> int:
    perm = parse_cycles(args.perm, args.n)
    results = {}
    if args.method in ("structured", "both"):
        results["structured"] = counting.n_structured(perm, cap=args.tree_cap)
    if args.method in ("oracle", "both"):
        q = oracle.CountQuery.of(oracle.Kind.N, perm)
        results["oracle"] = oracle.eval_oracle(q, cap=args.cap, threads=args.threads)
    values = list(results.values())
    disagree = len(set(values)) > 1
    if args.format == "json":
        payload = {"permutation": format_cycles(perm), "n": perm.n}
        payload.update({k: str(v) for k, v in results.items()})
        print(json.dumps(payload))
    elif args.format == "csv":
        print("permutation,n," + ",".join(results))
        print(f"\"{format_cycles(perm)}\",{perm.n}," + ",".join(str(v) for v in values))
    else:
        print(", ".join(str(v) for v in values))
    if disagree:
        print(f"methods disagree: {results}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_most_likely(args) -> int:
    cap = args.cap or extremal.CLASS_CAP
    if args.full_table or args.format == "csv":
        sys.stdout.write(extremal.class_table_csv(args.n, cap))
        return EXIT_OK
    best = extremal.winners(args.n, cap)
    perms = extremal.most_likely_permutations(args.n, cap)
    value = best[0].max_value
    if args.format == "json":
        print(json.dumps({
            "n": args.n,
            "maxValue": str(value),
            "winners": [format_cycles(p) for p in perms],
            "classes": [str(r.cls) for r in best],
        }))
    else:
        for p in perms:
            print(f"{format_cycles(p)}  {value}")
    return EXIT_OK


def cmd_fixed_points(args) -> int:
    mode = oracle.Mode(args.mode)
    if args.method == "limit":
        k_max = 10 if args.k_max is None else args.k_max
        dist = series.limit_distribution(mode, k_max)
        probs = list(dist.pk)
    else:
        if args.n is None:
            raise _Usage("--n is required for the egf and oracle methods")
        if args.method == "egf":
            z_max = max(series.Z_MAX, args.cap or 0)
            probs = list(series.qn_exact(args.n, mode, z_max))
        else:
            probs = oracle.fixed_point_dist_oracle(args.n, mode, args.cap, args.threads)
        if args.k_max is not None:
            probs = probs[: args.k_max + 1]
    if args.format == "json":
        print(series.distribution_to_json(probs))
        return EXIT_OK
    rows = []
    for k, p in enumerate(probs):
        if isinstance(p, Fraction):
            if p == 0 and args.format == "text":
                continue
            rows.append([k, _rational(p)])
        else:
            rows.append([k, f"{p:.10f}"])
    _emit_rows(args, ["k", "p"], rows, None)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    results = run_suite(args.suite, args.n_max)
    if args.format == "json":
        print(json.dumps([{"check": r.name, "ok": r.ok, "seconds": round(r.seconds, 4),
                           "detail": r.detail} for r in results], indent=2))
    else:
        for r in results:
            line = f"{'PASS' if r.ok else 'FAIL'}  {r.seconds:8.3f}s  {r.name}"
            if not r.ok:
                line += f"  counterexample: {r.detail}"
            print(line)
    return EXIT_OK if all(r.ok for r in results) else EXIT_INVARIANT


def cmd_table(args) -> int:
    counts = oracle.count_all(args.n, oracle.Mode(args.mode), args.cap, args.threads)
    rows = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0].image))
    if args.format == "json":
        print(json.dumps(oracle.counts_to_json(counts), indent=2))
        return EXIT_OK
    _emit_rows(args, ["permutation", "count"], [[format_cycles(p), str(c)] for p, c in rows], None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--cap", type=_positive, default=None, help="override the enumeration cap")
    common.add_argument("--tree-cap", type=_positive, default=counting.DEFAULT_TREE_CAP,
                        help="largest cycle (or cycle pair) for the structured engine")
    common.add_argument("--threads", type=_positive, default=_default_threads())

    parser = _Parser(prog="xshuffle", description="Exact multiplicities of the exchange shuffle.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mult", parents=[common], help="multiplicity N(pi) of one permutation")
    p.add_argument("perm", help='cycle notation, e.g. "(4 3)(2 1)"; "" is the identity')
    p.add_argument("--n", type=int, default=None, help="degree (default: largest element)")
    p.add_argument("--method", choices=["structured", "oracle", "both"], default="structured")
    p.set_defaults(func=cmd_mult)

    p = sub.add_parser("most-likely", parents=[common], help="most likely permutation(s) of degree n")
    p.add_argument("n", type=_positive)
    p.add_argument("--full-table", action="store_true", help="CSV of every cycle type")
    p.set_defaults(func=cmd_most_likely)

    p = sub.add_parser("fixed-points", parents=[common], help="fixed-point distribution")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--mode", choices=[m.value for m in oracle.Mode], default="uniform")
    p.add_argument("--method", choices=["egf", "oracle", "limit"], default="egf")
    p.add_argument("--k-max", type=int, default=None)
    p.set_defaults(func=cmd_fixed_points)

    p = sub.add_parser("verify", parents=[common], help="run invariant checks")
    p.add_argument("--suite", choices=["symmetry", "structure", "series", "extremal", "all"], default="all")
    p.add_argument("--n-max", type=_positive, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", parents=[common], help="multiplicity of every permutation of degree n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in oracle.Mode], default="uniform")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParseError, _Usage, ValueError) as exc:
        print(f"xshuffle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"xshuffle: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InvariantFailure, AssertionError) as exc:
        print(f"xshuffle: invariant failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
