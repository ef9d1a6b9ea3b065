"""Floor-diagram enumeration and quadratic curve counts for toric surfaces."""

from __future__ import annotations

from dataclasses import dataclass
from multiprocessing import Pool

from ..invariants import BetaInvariant
from ..tring import TPoly
from . import cache as _cache
from .diagrams import (
    InternalConsistencyError,
    MarkedDiagram,
    MarkingPartition,
    TwinTree,
    normalize_class,
)
from .engine import COMPILED, GEN_VERSION, class_budgets, enumerate_marked_raw, first_move_count

__all__ = [
    "COMPILED",
    "GEN_VERSION",
    "InternalConsistencyError",
    "MarkedDiagram",
    "MarkingPartition",
    "QuadInvariantResult",
    "TwinTree",
    "beta_extract",
    "classical_count",
    "enumerate_all_marked",
    "enumerate_marked",
    "max_pairs",
    "multiplicity",
    "normalize_class",
    "partition_marking",
    "quad_invariant",
    "welschinger_via_fd",
]


def max_pairs(klass) -> int:
    """m = floor(n/2) for the class, the largest allowed marking size."""
    return class_budgets(klass)[6] // 2


def partition_marking(marked: MarkedDiagram) -> MarkingPartition:
    """Vertex-edge pairs, twin trees, and free pairs of a marked diagram."""
    return marked.partition_marking()


def multiplicity(marked: MarkedDiagram) -> TPoly:
    """Quadratic multiplicity of an essential marked diagram."""
    return marked.multiplicity()


def _worker(args):
    klass, s, first = args
    return enumerate_marked_raw(klass, s, first)


def _enumerate_encodings(klass, s: int, jobs: int = 1):
    if jobs <= 1:
        return enumerate_marked_raw(klass, s)
    total = first_move_count(klass, s)
    with Pool(jobs) as pool:
        chunks = pool.map(_worker, [(klass, s, k) for k in range(total)])
    merged = set()
    for chunk in chunks:
        merged.update(chunk)
    return sorted(merged)


def enumerate_all_marked(klass, s: int, jobs: int = 1, cache_dir=None) -> list[tuple[MarkedDiagram, TPoly | None]]:
    """Equivalence classes of all s-marked diagrams with their multiplicities.

    Non-essential markings carry multiplicity None.  Results are validated,
    deterministic, and cached when a cache directory is configured.
    """
    klass = normalize_class(klass)
    cdir = _cache.resolve_cache_dir(cache_dir)
    if cdir is not None:
        hit = _cache.load(cdir, klass, s)
        if hit is not None:
            return hit
    out = []
    for enc in _enumerate_encodings(klass, s, jobs):
        diagram = MarkedDiagram.from_encoding(klass, s, enc)
        diagram.validate()
        mult = diagram.multiplicity() if diagram.is_essential() else None
        out.append((diagram, mult))
    if cdir is not None:
        _cache.store(cdir, klass, s, out)
    return out


def enumerate_marked(klass, s: int, jobs: int = 1, cache_dir=None) -> list[MarkedDiagram]:
    """Equivalence classes of essential s-marked floor diagrams."""
    return [d for d, mult in enumerate_all_marked(klass, s, jobs, cache_dir) if mult is not None]


@dataclass(frozen=True)
class QuadInvariantResult:
    klass: tuple[int, int, int, int]
    s: int
    value: TPoly
    ledger: tuple[tuple[MarkedDiagram, TPoly], ...]


def quad_invariant(klass, s: int, jobs: int = 1, cache_dir=None) -> QuadInvariantResult:
    """Quadratic curve count as a t-polynomial: the sum of the quadratic
    multiplicities over essential s-marked floor diagrams of the class."""
    klass = normalize_class(klass)
    entries = enumerate_all_marked(klass, s, jobs, cache_dir)
    ledger = tuple((d, mult) for d, mult in entries if mult is not None)
    value = TPoly.zero(s)
    for _, mult in ledger:
        value = value + mult
    return QuadInvariantResult(klass, s, value, ledger)


def beta_extract(result: QuadInvariantResult) -> BetaInvariant:
    """Read off integer beta-coefficients from the full multiquadratic restriction."""
    m = max_pairs(result.klass)
    if result.s != m:
        raise ValueError(f"beta extraction needs the maximal marking s = {m}")
    if not result.value.is_symmetric():
        raise InternalConsistencyError(
            f"asymmetric sum for class {result.klass}: enumeration bug"
        )
    n = class_budgets(result.klass)[6]
    coeffs = {(i,): c for i, c in enumerate(result.value.symmetric_coefficients())}
    return BetaInvariant.make((n,), coeffs, "beta", mode="int")


def welschinger_via_fd(klass, s: int, jobs: int = 1, cache_dir=None) -> int:
    """Signed real count: the quadratic invariant evaluated at all signs -1."""
    result = quad_invariant(klass, s, jobs, cache_dir)
    return result.value.eval_signs([-1] * s)


def classical_count(klass, jobs: int = 1, cache_dir=None) -> int:
    """Complex curve count: 0-marked diagrams weighted by the squared weights."""
    klass = normalize_class(klass)
    total = 0
    for diagram, _ in enumerate_all_marked(klass, 0, jobs, cache_dir):
        prod = 1
        for _, _, _, w in diagram.edges:
            prod *= w * w
        total += prod
    return total
