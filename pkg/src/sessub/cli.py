"""Command-line front end: ``sessub <command> ...``.

Type arguments are file paths or, if no such file exists, inline type text.
Exit codes: 0 true/safe, 1 false/unsafe, 2 usage or parse error, 3 every
selected algorithm timed out.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import bench
from .charform import Mode, char_formula
from .generator import GenParams, gen_norec, gen_random, gen_super, gen_unfolded_pair
from .kps import to_term_automaton
from .lam import lsubtype_cf, lsubtype_direct, parse_ltype
from .lts import build_lts
from .mucalc import formula_size, print_formula
from .safety import SUBTYPE_ALGOS, safe_by_subtyping, safe_explore
from .syntax import ParseError, parse_type, print_type
from .types import Alphabet, InvalidType, Kind, dual_type, nummsg, size, unfold_measure

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_TIMEOUT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _source(arg: str) -> str:
    if os.path.isfile(arg):
        try:
            with open(arg, encoding="utf-8") as fh:
                return fh.read()
        except OSError as e:
            raise UsageError(f"{arg}: {e.strerror}") from e
    return arg


def _type(arg: str):
    text = _source(arg)
    try:
        return parse_type(text)
    except (ParseError, InvalidType) as e:
        raise UsageError(f"{arg}: {e}") from e


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _seconds(ms: int | None) -> float | None:
    return None if ms is None or ms <= 0 else ms / 1000


def cmd_check(args) -> int:
    t, u = _type(args.lhs), _type(args.rhs)
    try:
        reports = bench.run_check(t, u, args.algo, _seconds(args.timeout))
    except ValueError as e:
        raise UsageError(str(e)) from e
    if args.json:
        bench.emit_json(reports, sys.stdout)
    else:
        for r in reports:
            verdict = "timeout" if r.timeout else str(r.verdict).lower()
            print(f"{r.algorithm}: {verdict} ({r.wall_nanos / 1e6:.3f} ms)")
    done = [r.verdict for r in reports if not r.timeout]
    if not done:
        return EXIT_TIMEOUT
    return EXIT_TRUE if done[0] else EXIT_FALSE


def cmd_dual(args) -> int:
    print(print_type(dual_type(_type(args.file))))
    return EXIT_TRUE


def cmd_metrics(args) -> int:
    t = _type(args.file)
    print(f"nummsg: {nummsg(t)}")
    print(f"unfold: {unfold_measure(t)}")
    print(f"nodes: {size(t)}")
    print(f"states: {len(build_lts(t))}")
    return EXIT_TRUE


def cmd_lts(args) -> int:
    t = _type(args.file)
    automaton = to_term_automaton(t)
    lts = build_lts(t)
    print(f"{len(lts)} states, {len(lts.edges)} edges, initial q{lts.initial}")
    for i, state in enumerate(lts.states):
        desc = print_type(state) if args.full else str(automaton.labels[i])
        print(f"q{i}: {desc}")
    for i, a, j in lts.edges:
        print(f"q{i} --{a}--> q{j}")
    return EXIT_TRUE


def cmd_formula(args) -> int:
    t = _type(args.file)
    phi = char_formula(t, Mode.SUB if args.mode == "sub" else Mode.SUP, Alphabet.of(t), args.dummy_fixpoints)
    print(print_formula(phi, args.style))
    if args.stats:
        print(f"# size {formula_size(phi)}", file=sys.stderr)
    return EXIT_TRUE


def cmd_safe(args) -> int:
    t, u = _type(args.lhs), _type(args.rhs)
    if args.method == "explore":
        res = safe_explore(t, u)
        print("safe" if res.safe else "unsafe")
        if not res.safe:
            print(res.format_trace())
        return EXIT_TRUE if res.safe else EXIT_FALSE
    ok = safe_by_subtyping(t, u, args.algo)
    print("safe" if ok else "unsafe")
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_gen(args) -> int:
    p = GenParams(target_size=args.size, seed=args.seed)
    match args.family:
        case "random":
            print(print_type(gen_random(p)))
        case "norec":
            print(print_type(gen_norec(p)))
        case "super-send" | "super-recv":
            kind = Kind.INTERNAL if args.family == "super-send" else Kind.EXTERNAL
            print(print_type(gen_super(args.k, kind)))
        case "unfolded":
            for t in gen_unfolded_pair(p):
                print(print_type(t))
    return EXIT_TRUE


def cmd_bench(args) -> int:
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    try:
        rows = bench.run_bench(families, args.sizes, args.algos, _seconds(args.timeout), args.reps, args.seed, args.jobs)
    except ValueError as e:
        raise UsageError(str(e)) from e
    if args.csv == "-":
        bench.emit_csv(rows, sys.stdout)
    else:
        bench.write_csv(rows, args.csv)
        timeouts = sum(r.timeout for r in rows)
        print(f"wrote {len(rows)} rows to {args.csv} ({timeouts} timeouts)", file=sys.stderr)
    return EXIT_TRUE


def cmd_lambda(args) -> int:
    try:
        t, u = parse_ltype(_source(args.lhs)), parse_ltype(_source(args.rhs))
    except ValueError as e:
        raise UsageError(str(e)) from e
    if args.mode == "direct":
        ok = lsubtype_direct(t, u)
    else:
        ok = lsubtype_cf(t, u, args.mode.replace("-", "_"))
    print(str(ok).lower())
    return EXIT_TRUE if ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    algos = [*bench.ALGORITHMS, "all"]
    parser = argparse.ArgumentParser(prog="sessub", description="Session type subtyping toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide LHS <= RHS")
    p.add_argument("--algo", choices=algos, default="all")
    p.add_argument("--timeout", type=int, default=60_000, metavar="MS", help="per-algorithm deadline (0 = none)")
    p.add_argument("--json", action="store_true")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.set_defaults(run=cmd_check)

    for name, fn, help_ in (
        ("dual", cmd_dual, "print the dual type"),
        ("metrics", cmd_metrics, "print size metrics"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file")
        p.set_defaults(run=fn)

    p = sub.add_parser("lts", help="print the transition system")
    p.add_argument("--full", action="store_true", help="print full state terms")
    p.add_argument("file")
    p.set_defaults(run=cmd_lts)

    p = sub.add_parser("formula", help="print the characteristic formula")
    p.add_argument("--mode", choices=("sub", "sup"), default="sub")
    p.add_argument("--dummy-fixpoints", action="store_true")
    p.add_argument("--style", choices=("native", "mcrl2"), default="native")
    p.add_argument("--stats", action="store_true", help="report formula size on stderr")
    p.add_argument("file")
    p.set_defaults(run=cmd_formula)

    p = sub.add_parser("safe", help="decide safety of LHS || RHS")
    p.add_argument("--method", choices=("explore", "subtyping"), default="explore")
    p.add_argument("--algo", choices=sorted(SUBTYPE_ALGOS), default="cf")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.set_defaults(run=cmd_safe)

    p = sub.add_parser("gen", help="generate a type")
    p.add_argument("--family", choices=bench.FAMILIES, default="random")
    p.add_argument("--size", type=int, default=10)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("bench", help="run the benchmark families")
    p.add_argument("--families", default="random")
    p.add_argument("--sizes", type=_int_list, default=[10])
    p.add_argument("--algos", default="all")
    p.add_argument("--timeout", type=int, default=60_000, metavar="MS")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", required=True, metavar="PATH", help="output file, '-' for stdout")
    p.set_defaults(run=cmd_bench)

    p = sub.add_parser("lambda", help="recursive lambda-calculus types")
    lsub = p.add_subparsers(dest="lcommand", required=True)
    q = lsub.add_parser("check", help="decide LHS <= RHS")
    q.add_argument("--mode", choices=("direct", "via-top", "via-bot"), default="direct")
    q.add_argument("lhs")
    q.add_argument("rhs")
    q.set_defaults(run=cmd_lambda)
    return parser


def main(argv: list[str] | None = None) -> int:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except UsageError as e:
        print(f"sessub: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        # bad generator parameters and the like
        print(f"sessub: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
