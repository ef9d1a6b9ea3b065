"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 internal
consistency abort.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .floor import (
    InternalConsistencyError,
    beta_extract,
    classical_count,
    enumerate_all_marked,
    max_pairs,
    normalize_class,
    quad_invariant,
    welschinger_via_fd,
)
from .invariants import convert_basis, ramified_primes
from .tring import HalvingError
from .welschinger import (
    FixtureStore,
    alias_resolve,
    build_vw,
    hypothesis_guard,
    p3_aggregate,
    triangle_semantics,
)
from .wittring import DiagonalForm, FactorizationBoundError, WittClassQ


def _parse_class(text: str) -> tuple[int, int, int, int]:
    parts = [int(v) for v in text.split(",")]
    if len(parts) != 4:
        raise ValueError("--class takes four comma-separated integers")
    return tuple(parts)


def _parse_s(text: str, klass) -> int:
    if text == "m":
        return max_pairs(normalize_class(klass))
    return int(text)


def _triangle_csv(tri) -> str:
    lines = []
    for row in tri.csv_rows():
        lines.append(";".join(str(x) for x in row))
    return "\n".join(lines)


def cmd_witt(args) -> int:
    values = [Fraction(v) for v in args.form.split(",")]
    form = DiagonalForm.of(values, bound=args.prime_bound)
    cls = WittClassQ.from_diagonal(form)
    ram = sorted(cls.support)
    if args.format == "json":
        out = cls.to_json()
        out["ramified"] = ram
        print(json.dumps(out, sort_keys=True))
    else:
        print(f"form      {form}")
        print(f"class     {cls.pretty()}")
        print(f"signature {cls.signature}")
        print(f"dyadic    {cls.dyadic}")
        res = ", ".join(f"{p}: {r}" for p, r in cls.residues) or "none"
        print(f"residues  {res}")
        print(f"ramified  {ram or 'none'}")
    return 0


def cmd_wel_build(args) -> int:
    store = FixtureStore(args.data_dir)
    if args.table:
        tables = [store.load(args.table)]
    elif args.surface == "p2":
        tables = [store.load_for_surface(alias_resolve("p2", degree=args.degree))]
    elif args.surface == "p1xp1":
        if args.bidegree:
            a, b = (int(v) for v in args.bidegree.split(","))
            surface = alias_resolve("p1xp1", bidegree=(a, b))
        else:
            surface = alias_resolve("p1xp1", degree=args.degree)
        tables = [store.load_for_surface(surface)]
    elif args.surface == "p3":
        surfaces = alias_resolve("p3", degree=args.degree)
        tables = [store.load_for_surface(s) for s in surfaces]
    else:
        raise ValueError("give --surface p2|p1xp1|p3 or an explicit --table")

    invariants = [build_vw(t) for t in tables]
    total = invariants[0]
    for inv in invariants[1:]:
        total = total + inv
    guards = [hypothesis_guard(t.surface) for t in tables]

    if args.format == "json":
        print(json.dumps(total.to_json(), sort_keys=True))
    elif args.format == "csv":
        print(_triangle_csv(triangle_semantics(tables[0])))
    else:
        for t, g in zip(tables, guards):
            print(f"surface   {t.surface}   [{g.status}: {g.reason}]")
        print(f"invariant {total.pretty()}")
        print("triangle (rows indexed by u):")
        print(_triangle_csv(triangle_semantics(tables[0])))
    return 0


def cmd_fd(args) -> int:
    klass = normalize_class(_parse_class(args.klass))
    if args.action == "classical":
        print(classical_count(klass, jobs=args.jobs, cache_dir=args.cache_dir))
        return 0
    s = _parse_s(args.s, klass)
    if args.action == "list":
        entries = enumerate_all_marked(klass, s, jobs=args.jobs, cache_dir=args.cache_dir)
        for diagram, mult in entries:
            rec = diagram.to_json()
            rec["mult"] = None if mult is None else mult.to_json()
            print(json.dumps(rec, sort_keys=True))
        print(
            f"# {len(entries)} classes, {sum(1 for _, m in entries if m is not None)} essential",
            file=sys.stderr,
        )
        return 0
    if args.action == "wel":
        print(welschinger_via_fd(klass, s, jobs=args.jobs, cache_dir=args.cache_dir))
        return 0
    # quad
    result = quad_invariant(klass, s, jobs=args.jobs, cache_dir=args.cache_dir)
    if args.emit == "beta":
        inv = beta_extract(result)
        print(inv.pretty())
    elif args.emit == "int":
        print(result.value.eval_signs([-1] * s))
    else:
        print(json.dumps(result.value.to_json(), sort_keys=True))
    return 0


def cmd_verify(args) -> int:
    from .verify import run_suite

    reports = run_suite(
        args.suite, data_dir=args.data_dir, jobs=args.jobs, cache_dir=args.cache_dir
    )
    ok = all(r.passed for r in reports)
    if args.format == "json":
        print(json.dumps([r.to_json() for r in reports], sort_keys=True))
    else:
        for r in reports:
            print(r.to_text())
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="welwitt",
        description="Witt invariants of etale algebras, Welschinger-Witt "
        "invariants, and quadratic curve counts via floor diagrams.",
    )
    parser.add_argument("--data-dir", default=None, help="fixture directory override")
    parser.add_argument("--cache-dir", default=None, help="enumeration cache (or WW_CACHE_DIR)")
    parser.add_argument("--jobs", type=int, default=1, help="parallel enumeration workers")
    parser.add_argument(
        "--format", choices=("text", "json", "csv"), default="text", help="output format"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("witt", help="canonical coordinates of a diagonal form over Q")
    p.add_argument("form", help="comma-separated nonzero rationals, e.g. '2,3,-1/6'")
    p.add_argument("--prime-bound", type=int, default=10**6)
    p.set_defaults(func=cmd_witt)

    p = sub.add_parser("wel-build", help="build a Welschinger-Witt invariant from a table")
    p.add_argument("--surface", choices=("p2", "p1xp1", "p3"))
    p.add_argument("--degree", type=int)
    p.add_argument("--bidegree", help="for p1xp1: 'a,b'")
    p.add_argument("--table", help="builtin fixture name or JSON path")
    p.set_defaults(func=cmd_wel_build)

    p = sub.add_parser("fd", help="floor-diagram enumeration and counts")
    p.add_argument("action", choices=("list", "quad", "wel", "classical"))
    p.add_argument("--class", dest="klass", required=True, help="d0,d1,d2,d3")
    p.add_argument("--s", default="0", help="number of conjugate pairs, or 'm'")
    p.add_argument("--emit", choices=("tpoly", "beta", "int"), default="tpoly")
    p.set_defaults(func=cmd_fd)

    p = sub.add_parser("verify", help="run the exact verification suites")
    from .verify import SUITES

    p.add_argument("suite", choices=SUITES)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (HalvingError, InternalConsistencyError) as err:
        print(f"internal consistency failure: {err}", file=sys.stderr)
        return 3
    except (ValueError, FileNotFoundError, FactorizationBoundError, ZeroDivisionError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
