"""Fixture-driven verification suites for the shipped reference values.

Every check is an exact equality; the report carries one line per check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .floor import (
    beta_extract,
    classical_count,
    max_pairs,
    quad_invariant,
    welschinger_via_fd,
)
from .invariants import BetaInvariant, convert_basis, ramified_primes, triangle_from_multireal
from .welschinger import FixtureStore, build_vw, triangle_semantics
from .wittring import WittClassQ

SUITES = ("tables", "bases", "triangle", "fd-small", "fd-p1p1", "ramification", "all")


def _w(a: int, b: int = 0) -> WittClassQ:
    """Shorthand a<1> + b<2>."""
    return WittClassQ.from_int(a) + WittClassQ(1, 1, ()).scale(b)


# beta-rows of the plane invariants, degrees 1..6
TABLE_P2_BETA = {
    1: [1],
    2: [1, 0, 0],
    3: [0, 1, 0, 0, 0],
    4: [0, 8, 2, 1, 0, 0],
    5: [64, 0, 46, 16, 12, 4, 1, 0],
    6: [1024, 256, 1088, 848, 728, 480, 288, 132, 46],
}

# the same invariants over the exterior-power basis, degrees 1..5
TABLE_P2_LAMBDA = {
    1: [_w(1)],
    2: [_w(1), _w(0), _w(0)],
    3: [_w(0), _w(1), _w(0), _w(0), _w(0)],
    4: [_w(-13), _w(13), _w(-1), _w(1), _w(0), _w(0)],
    5: [_w(589), _w(-110, 1), _w(109), _w(-14, 1), _w(13), _w(-2, 1), _w(1), _w(0)],
}

# the symmetric-power basis rows, degrees 4 and 5
TABLE_P2_CHI = {
    4: [-2, 2, -1, 1, 0, 0],
    5: [-118, -18, 18, 1, -1, -1, 1, 0],
}

# quadric invariants: bidegree -> beta row (single effective variable)
TABLE_P1XP1_BETA = {
    (1, 2): [1, 0, 0],
    (2, 4): [16, 8, 2, 1, 0, 0],
    (3, 4): [224, 92, 78, 40, 20, 6, 1],
    (3, 5): [991, 448, 408, 248, 158, 80, 32, 8],
    (4, 5): [13056, 7552, 8128, 7248, 6376, 4864, 3328, 1920, 912],
}

TABLE_P1XP1_CHI_24 = [14, 2, -1, 1, 0, 0]

CLASSICAL_COUNTS = {1: 1, 2: 1, 3: 12, 4: 620}

INTRO_TRIANGLE_ROWS = [
    [0, 16, 40, 80, 144, 240],
    [8, 12, 20, 32, 48],
    [2, 4, 6, 8],
    [1, 1, 1],
    [0, 0],
    [0],
]


@dataclass
class VerificationReport:
    suite: str
    checks: list[tuple[str, str, str, bool]]

    def add(self, check_id: str, expected, computed) -> None:
        self.checks.append((check_id, str(expected), str(computed), expected == computed))

    @property
    def passed(self) -> bool:
        return all(ok for _, _, _, ok in self.checks)

    def to_text(self) -> str:
        lines = []
        for check_id, expected, computed, ok in self.checks:
            status = "pass" if ok else "FAIL"
            line = f"[{status}] {check_id}"
            if not ok:
                line += f"  expected {expected}  computed {computed}"
            lines.append(line)
        n_ok = sum(ok for _, _, _, ok in self.checks)
        lines.append(f"{self.suite}: {n_ok}/{len(self.checks)} checks passed")
        return "\n".join(lines)

    def to_json(self):
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [
                {"id": cid, "expected": e, "computed": c, "status": "pass" if ok else "fail"}
                for cid, e, c, ok in self.checks
            ],
        }


def _beta_row(inv: BetaInvariant) -> list:
    return inv.vector()


def suite_tables(store: FixtureStore, **_) -> VerificationReport:
    rep = VerificationReport("tables", [])
    for d, row in TABLE_P2_BETA.items():
        inv = build_vw(store.load(f"p2-d{d}"))
        row = row + [0] * (len(inv.vector()) - len(row))
        rep.add(f"table1/d{d}", row, _beta_row(inv))
    for d, row in TABLE_P2_LAMBDA.items():
        inv = convert_basis(build_vw(store.load(f"p2-d{d}")), "lambda").as_witt_mode()
        row = row + [_w(0)] * (len(inv.vector()) - len(row))
        rep.add(f"table2/d{d}", row, _beta_row(inv))
    for d, row in TABLE_P2_CHI.items():
        inv = convert_basis(build_vw(store.load(f"p2-d{d}")), "chi")
        rep.add(f"table5/d{d}", row, _beta_row(inv))
    return rep


def suite_bases(**_) -> VerificationReport:
    rep = VerificationReport("bases", [])
    rng = random.Random(20250809)
    for n in range(1, 14):
        m = n // 2
        for basis in ("lambda", "alpha", "chi"):
            b = {(i,): rng.randint(-99, 99) for i in range(m + 1)}
            inv = BetaInvariant.make((n,), b)
            back = convert_basis(convert_basis(inv, basis), "beta")
            rep.add(f"roundtrip/{basis}/n{n}", b, back.coeff_map)
            src = BetaInvariant.make((n,), {(i,): rng.randint(-99, 99) for i in range(m + 1)}, basis)
            again = convert_basis(convert_basis(src, "beta"), basis)
            rep.add(f"roundtrip/{basis}-from/n{n}", src.coeff_map, again.coeff_map)
    lam2 = convert_basis(BetaInvariant.basis_element((6,), (2,), "lambda"), "beta")
    rep.add(
        "lambda2/n6",
        {(0,): _w(-3), (1,): _w(0, 1), (2,): _w(1)},
        lam2.coeff_map,
    )
    return rep


def suite_triangle(store: FixtureStore, **_) -> VerificationReport:
    rep = VerificationReport("triangle", [])
    w = {(s,): v for s, v in enumerate([240, 144, 80, 40, 16, 0])}
    tri = triangle_from_multireal((11,), w)
    for i, row in enumerate(INTRO_TRIANGLE_ROWS):
        got = [tri.cell((u,), (i,)) for u in range(len(row))]
        rep.add(f"intro-triangle/row{i}", row, got)
    tri3 = triangle_semantics(store.load("p2-d3"))
    rep.add("d3-triangle/row1", [1, 1, 1, 1], [tri3.cell((u,), (1,)) for u in range(4)])
    rep.add("d3-triangle/row2", [0, 0, 0], [tri3.cell((u,), (2,)) for u in range(3)])
    return rep


def suite_fd_small(store: FixtureStore, jobs: int = 1, cache_dir=None) -> VerificationReport:
    rep = VerificationReport("fd-small", [])
    for d in range(1, 5):
        klass = (d, 0, 0, 0)
        inv = beta_extract(quad_invariant(klass, max_pairs(klass), jobs, cache_dir))
        row = TABLE_P2_BETA[d] + [0] * (len(inv.vector()) - len(TABLE_P2_BETA[d]))
        rep.add(f"fd-beta/d{d}", row, inv.vector())
    rep.add(
        "fd-wel/d4",
        [240, 144, 80, 40, 16, 0],
        [welschinger_via_fd((4, 0, 0, 0), s, jobs, cache_dir) for s in range(6)],
    )
    for d, count in CLASSICAL_COUNTS.items():
        rep.add(f"fd-classical/d{d}", count, classical_count((d, 0, 0, 0), jobs, cache_dir))
    return rep


def suite_fd_p1p1(store: FixtureStore, jobs: int = 1, cache_dir=None) -> VerificationReport:
    rep = VerificationReport("fd-p1p1", [])
    inv = beta_extract(quad_invariant((6, 4, 2, 0), max_pairs((6, 4, 2, 0)), jobs, cache_dir))
    rep.add("fd-p1p1/beta-2-4", TABLE_P1XP1_BETA[(2, 4)], inv.vector())
    rep.add("fd-p1p1/chi-2-4", TABLE_P1XP1_CHI_24, convert_basis(inv, "chi").vector())
    inv34 = beta_extract(quad_invariant((7, 4, 3, 0), max_pairs((7, 4, 3, 0)), jobs, cache_dir))
    rep.add("fd-p1p1/beta-3-4-full", TABLE_P1XP1_BETA[(3, 4)], inv34.vector())
    # top real count of bidegree (3,4), derived from its beta row
    from math import comb

    row = TABLE_P1XP1_BETA[(3, 4)]
    w0 = sum(2**i * comb(6, i) * c for i, c in enumerate(row))
    rep.add("fd-p1p1/wel0-3-4", w0, welschinger_via_fd((7, 4, 3, 0), 0, jobs, cache_dir))
    for a in range(1, 5):
        klass = (a + 2, a, 2, 0)
        want = ((a + 1) // 2) * 2 ** (a - 1)
        rep.add(
            f"fd-p1p1/ruling-formula-a{a}",
            want,
            welschinger_via_fd(klass, max_pairs((a + 2, a, 2, 0)), jobs, cache_dir),
        )
    return rep


def suite_ramification(store: FixtureStore, jobs: int = 1, cache_dir=None) -> VerificationReport:
    rep = VerificationReport("ramification", [])
    for klass in [(1, 0, 0, 0), (2, 0, 0, 0), (3, 0, 0, 0), (3, 2, 1, 0), (4, 2, 2, 0)]:
        inv = beta_extract(quad_invariant(klass, max_pairs(klass), jobs, cache_dir))
        rep.add(
            "ramified/" + "-".join(map(str, klass)),
            frozenset(),
            ramified_primes(inv.as_witt_mode()),
        )
    return rep


_SUITE_FUNCS = {
    "tables": suite_tables,
    "bases": suite_bases,
    "triangle": suite_triangle,
    "fd-small": suite_fd_small,
    "fd-p1p1": suite_fd_p1p1,
    "ramification": suite_ramification,
}


def run_suite(name: str, data_dir=None, jobs: int = 1, cache_dir=None) -> list[VerificationReport]:
    store = FixtureStore(data_dir)
    names = list(_SUITE_FUNCS) if name == "all" else [name]
    if any(n not in _SUITE_FUNCS for n in names):
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return [
        _SUITE_FUNCS[n](store=store, jobs=jobs, cache_dir=cache_dir) for n in names
    ]
