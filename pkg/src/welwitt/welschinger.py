"""Welschinger-Witt invariants from tables of Welschinger numbers.

A surface class records a blow-up of the plane: a partition vector n of
point multiplicities and divisor coefficients d = (d_0, ..., d_r) for
D = d_0 L - sum d_j E_j blockwise.  A table of Welschinger numbers indexed
by conjugate-pair counts determines, when beta-integral, a unique invariant
with those multireal values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .invariants import (
    BetaInvariant,
    MultiDegree,
    MultirealTriangle,
    NotBetaIntegralError,
    beta_from_multireal,
    triangle_from_multireal,
)

P2_BLOWUP = "p2_blowup"
P1XP1 = "p1xp1"
P3_AGGREGATE = "p3_aggregate"


@dataclass(frozen=True)
class SurfaceClass:
    """A divisor class on a blow-up of the plane, in canonical block form.

    Blocks with equal divisor coefficient are merged and blocks are sorted by
    descending coefficient, so the class names the coarsest compatible
    partition.  n_0 = 3 d_0 - sum n_j d_j - 1 must be nonnegative.
    """

    n: tuple[int, ...]
    d: tuple[int, ...]

    def __post_init__(self):
        if len(self.d) != len(self.n) + 1:
            raise ValueError("need one divisor coefficient per block plus d_0")
        if any(nj <= 0 for nj in self.n):
            raise ValueError("block sizes must be positive")
        if self.n0 < 0:
            raise ValueError(f"n_0 = {self.n0} is negative for {self}")

    @classmethod
    def make(cls, n, d) -> SurfaceClass:
        n = tuple(n)
        d = tuple(d)
        merged: dict[int, int] = {}
        for nj, dj in zip(n, d[1:]):
            merged[dj] = merged.get(dj, 0) + nj
        blocks = sorted(merged.items(), key=lambda kv: -kv[0])
        return cls(tuple(nj for _, nj in blocks), (d[0],) + tuple(dj for dj, _ in blocks))

    @classmethod
    def p2(cls, degree: int) -> SurfaceClass:
        return cls.make((), (degree,))

    @property
    def n0(self) -> int:
        return 3 * self.d[0] - sum(nj * dj for nj, dj in zip(self.n, self.d[1:])) - 1

    @property
    def degree(self) -> MultiDegree:
        return MultiDegree((self.n0,) + self.n)

    @property
    def points_blown_up(self) -> int:
        return sum(self.n)

    def to_json(self):
        return {"n": list(self.n), "d": list(self.d)}

    @classmethod
    def from_json(cls, data) -> SurfaceClass:
        return cls.make(data["n"], data["d"])

    def __str__(self) -> str:
        return f"X(n={list(self.n)}, d={list(self.d)})"


def alias_p1xp1(bidegree) -> SurfaceClass:
    """Bidegree (d1, d2) on the quadric as a class on the blown-up plane."""
    d1, d2 = bidegree
    if d1 < 0 or d2 < 0:
        raise ValueError("bidegree coefficients must be nonnegative")
    return SurfaceClass.make((1, 1), (d1 + d2, d1, d2))


def alias_p1xp1_symmetric(d: int) -> SurfaceClass:
    """Degree d with the two blown-up points treated as a conjugate pair."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return SurfaceClass.make((2,), (2 * d, d))


def p3_summands(d: int) -> list[tuple[int, int]]:
    """Splittings d = d1 + d2 with 0 <= d1 < d2 indexing the aggregate."""
    return [(d1, d - d1) for d1 in range(0, (d + 1) // 2) if d1 < d - d1]


def alias_resolve(kind: str, *, degree: int | None = None, bidegree=None):
    """Canonical class (or list of summand classes for the projective 3-space)."""
    if kind == "p2":
        return SurfaceClass.p2(degree)
    if kind == "p1xp1":
        if bidegree is not None:
            a, b = bidegree
            if a == b:
                raise ValueError(
                    "equal bidegree merges blocks; use the symmetric alias for a conjugate pair"
                )
            return alias_p1xp1(bidegree)
        return alias_p1xp1_symmetric(degree)
    if kind == "p3":
        return [alias_p1xp1(pair) for pair in p3_summands(degree)]
    raise ValueError(f"unknown surface kind {kind!r}")


@dataclass(frozen=True)
class WelschingerTable:
    surface: SurfaceClass
    values: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def make(cls, surface: SurfaceClass, values: dict) -> WelschingerTable:
        values = {tuple(k): int(v) for k, v in values.items()}
        missing = [s for s in surface.degree.box() if s not in values]
        if missing:
            raise ValueError(f"table for {surface} missing entries at {missing[:3]}")
        extra = set(values) - set(surface.degree.box())
        if extra:
            raise ValueError(f"table for {surface} has out-of-range entries {sorted(extra)[:3]}")
        return cls(surface, tuple(sorted(values.items())))

    @property
    def value_map(self) -> dict[tuple[int, ...], int]:
        return dict(self.values)

    def to_json(self):
        return {
            "surface": self.surface.to_json(),
            "values": [{"s": list(s), "w": w} for s, w in self.values],
        }

    @classmethod
    def from_json(cls, data) -> WelschingerTable:
        surface = SurfaceClass.from_json(data["surface"])
        return cls.make(surface, {tuple(e["s"]): e["w"] for e in data["values"]})


def build_vw(table: WelschingerTable) -> BetaInvariant:
    """The unique beta-integral invariant whose multireal values are the table."""
    try:
        return beta_from_multireal(table.surface.degree, table.value_map)
    except NotBetaIntegralError as err:
        raise NotBetaIntegralError(err.cell, err.value) from None


def triangle_semantics(table: WelschingerTable) -> MultirealTriangle:
    """The full multireal triangle; rows read off the alternating-sum counts."""
    return triangle_from_multireal(table.surface.degree, table.value_map)


@dataclass(frozen=True)
class LiftedInvariant:
    """A Welschinger-Witt invariant lifted to fixed rank, with hyperbolic padding."""

    invariant: BetaInvariant
    rank: int
    hyperbolic_padding: int


def wg_lift(inv: BetaInvariant, gw: int, wel0: int) -> LiftedInvariant:
    """Lift to the rank of the count over the complex numbers.

    Each basis coefficient lifts with rank 2^|i|; the remainder is padded by
    hyperbolic planes: padding = (gw - sum b_i 2^|i|) / 2.
    """
    if gw < 0:
        raise ValueError("the complex count must be nonnegative")
    if (gw - wel0) % 2:
        raise ValueError(f"parity mismatch: gw = {gw} vs wel(D;0) = {wel0}")
    inv = inv.as_int_mode()
    rank0 = sum(c * 2 ** sum(idx) for idx, c in inv.coeffs)
    if (gw - rank0) % 2:
        raise AssertionError("rank parity disagrees with the stated counts")
    padding = (gw - rank0) // 2
    if padding < 0:
        raise ValueError(f"negative padding: gw = {gw} < base rank {rank0}")
    return LiftedInvariant(inv, gw, padding)


@dataclass(frozen=True)
class GuardReport:
    surface: SurfaceClass
    status: str  # "quadratic-side-defined" | "welschinger-only"
    reason: str


def hypothesis_guard(surface: SurfaceClass) -> GuardReport:
    """Classify whether the quadratic count is defined for this class."""
    total = surface.points_blown_up
    deg_x = 9 - total
    if total > 6:
        return GuardReport(
            surface, "welschinger-only", f"{total} blown-up points leave degree {deg_x} < 3"
        )
    if total == 6 and surface.n0 == 5:
        return GuardReport(
            surface, "welschinger-only", "degree 3 with five point conditions is excluded"
        )
    return GuardReport(surface, "quadratic-side-defined", f"del Pezzo degree {deg_x}")


# ---------------------------------------------------------------------------
# fixtures


_DATA_DIR = Path(__file__).parent / "data"


class FixtureStore:
    """Read-only store of Welschinger tables, by builtin name or file path."""

    def __init__(self, data_dir: str | Path | None = None):
        self.data_dir = Path(data_dir) if data_dir else _DATA_DIR

    def builtin_names(self) -> list[str]:
        return sorted(p.stem for p in self.data_dir.glob("*.json"))

    def load(self, name_or_path: str | Path) -> WelschingerTable:
        path = Path(name_or_path)
        if not path.suffix:
            path = self.data_dir / f"{name_or_path}.json"
        if not path.exists():
            raise FileNotFoundError(
                f"no fixture {name_or_path!r}; builtins: {', '.join(self.builtin_names())}"
            )
        with open(path, encoding="utf-8") as fh:
            return WelschingerTable.from_json(json.load(fh))

    def load_for_surface(self, surface: SurfaceClass) -> WelschingerTable:
        for name in self.builtin_names():
            table = self.load(name)
            if table.surface == surface:
                return table
        raise FileNotFoundError(f"no builtin table for {surface}")


def p3_aggregate(d: int, store: FixtureStore | None = None) -> BetaInvariant:
    """Sum of the quadric invariants over the splittings of the degree."""
    store = store or FixtureStore()
    total = None
    for pair in p3_summands(d):
        table = store.load_for_surface(alias_p1xp1(pair))
        inv = build_vw(table)
        total = inv if total is None else total + inv
    if total is None:
        raise ValueError(f"no summands for degree {d}")
    return total
