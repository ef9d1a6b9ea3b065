"""Exact arithmetic in Witt rings: square classes, diagonal forms, W(F_p), W(Q).

A class in W(Q) is stored in canonical coordinates (signature, dyadic bit,
finite-field residues at odd primes).  These three coordinates form a
complete invariant: a class with no odd residues lies in Z[<2>] = Z<1> + Z<2>,
where 2<2> = 2<1>, so (signature, dyadic) separates the remaining elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd


DEFAULT_PRIME_BOUND = 10**6

Rational = int | Fraction


class FactorizationBoundError(ArithmeticError):
    """Raised when an input does not factor within the trial-division bound."""


def _squarefree_part(n: int, bound: int) -> int:
    """Signed squarefree part of a nonzero integer, by trial division."""
    if n == 0:
        raise ValueError("zero has no square class")
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    p = 2
    while p * p <= n:
        if p > bound:
            raise FactorizationBoundError(
                f"residual factor {n} exceeds trial-division bound {bound}"
            )
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e % 2:
                out *= p
        p += 1 if p == 2 else 2
    # leftover is 1 or a prime
    return sign * out * n


@dataclass(frozen=True)
class SquareClass:
    """An element of Q*/(Q*)^2, stored as its signed squarefree integer."""

    value: int

    def __post_init__(self) -> None:
        if self.value == 0:
            raise ValueError("square class of zero is undefined")

    @classmethod
    def of(cls, q: Rational, bound: int = DEFAULT_PRIME_BOUND) -> SquareClass:
        q = Fraction(q)
        if q == 0:
            raise ValueError("square class of zero is undefined")
        return cls(_squarefree_part(q.numerator * q.denominator, bound))

    @property
    def sign(self) -> int:
        return -1 if self.value < 0 else 1

    @property
    def odd_primes(self) -> tuple[int, ...]:
        v = abs(self.value)
        if v % 2 == 0:
            v //= 2
        out = []
        p = 3
        while p * p <= v:
            if v % p == 0:
                out.append(p)
                v //= p
            else:
                p += 2
        if v > 1:
            out.append(v)
        return tuple(out)

    def __mul__(self, other: SquareClass) -> SquareClass:
        a, b = self.value, other.value
        g = gcd(a, b)
        return SquareClass(a * b // (g * g))

    def __str__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True)
class DiagonalForm:
    """A diagonal quadratic form <a_1, ..., a_s> with nonzero rational entries."""

    entries: tuple[SquareClass, ...]

    @classmethod
    def of(cls, values, bound: int = DEFAULT_PRIME_BOUND) -> DiagonalForm:
        return cls(tuple(SquareClass.of(v, bound) for v in values))

    @classmethod
    def hyperbolic(cls, copies: int = 1) -> DiagonalForm:
        return cls.of([1, -1] * copies)

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __add__(self, other: DiagonalForm) -> DiagonalForm:
        """Orthogonal sum."""
        return DiagonalForm(self.entries + other.entries)

    def __mul__(self, other: DiagonalForm) -> DiagonalForm:
        """Tensor product."""
        return DiagonalForm(
            tuple(a * b for a in self.entries for b in other.entries)
        )

    def __neg__(self) -> DiagonalForm:
        minus = SquareClass(-1)
        return DiagonalForm(tuple(minus * a for a in self.entries))

    def to_json(self) -> list[int]:
        return [a.value for a in self.entries]

    @classmethod
    def from_json(cls, data) -> DiagonalForm:
        return cls.of(data)

    def __str__(self) -> str:
        return "<" + ",".join(str(a.value) for a in self.entries) + ">"


def trace_form(delta: SquareClass | Rational) -> DiagonalForm:
    """Trace form <2, 2*delta> of the quadratic algebra Q[x]/(x^2 - delta)."""
    if not isinstance(delta, SquareClass):
        delta = SquareClass.of(delta)
    return DiagonalForm.of([2, 2 * delta.value])


def is_quadratic_residue(x: int, p: int) -> bool:
    x %= p
    if x == 0:
        raise ValueError(f"{x} is not a unit mod {p}")
    return pow(x, (p - 1) // 2, p) == 1


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    for u in range(2, p):
        if not is_quadratic_residue(u, p):
            return u
    raise ValueError(f"{p} is not an odd prime")


@dataclass(frozen=True)
class WFpClass:
    """Element of W(F_p), p an odd prime.

    p = 1 mod 4: a*<1> + b*<u> with a, b in Z/2 and u a fixed non-residue.
    p = 3 mod 4: a*<1> with a in Z/4 (then <u> = <-1> = 3*<1> and b is 0).
    """

    p: int
    a: int
    b: int = 0

    @classmethod
    def zero(cls, p: int) -> WFpClass:
        return cls(p, 0, 0)

    @classmethod
    def one(cls, p: int) -> WFpClass:
        return cls(p, 1, 0)

    @classmethod
    def from_unit(cls, p: int, x: int) -> WFpClass:
        """Class of the rank-one form <x> for a unit x mod p."""
        if is_quadratic_residue(x, p):
            return cls(p, 1, 0)
        if p % 4 == 1:
            return cls(p, 0, 1)
        return cls(p, 3, 0)

    def _reduce(self, a: int, b: int) -> WFpClass:
        if self.p % 4 == 1:
            return WFpClass(self.p, a % 2, b % 2)
        return WFpClass(self.p, (a - b) % 4, 0)

    def __add__(self, other: WFpClass) -> WFpClass:
        if self.p != other.p:
            raise ValueError("cannot add classes over different primes")
        return self._reduce(self.a + other.a, self.b + other.b)

    def __neg__(self) -> WFpClass:
        return self._reduce(-self.a, -self.b)

    def __mul__(self, other: WFpClass) -> WFpClass:
        if self.p != other.p:
            raise ValueError("cannot multiply classes over different primes")
        if self.p % 4 == 1:
            return self._reduce(
                self.a * other.a + self.b * other.b,
                self.a * other.b + self.b * other.a,
            )
        return self._reduce(self.a * other.a, 0)

    def scale(self, n: int) -> WFpClass:
        return self._reduce(n * self.a, n * self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def to_json(self):
        return [self.a, self.b] if self.p % 4 == 1 else self.a

    @classmethod
    def from_json(cls, p: int, data) -> WFpClass:
        if p % 4 == 1:
            return cls(p, data[0] % 2, data[1] % 2)
        return cls(p, data % 4, 0)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        if self.p % 4 == 3:
            return f"{self.a}<1>"
        u = smallest_nonresidue(self.p)
        parts = []
        if self.a:
            parts.append("<1>")
        if self.b:
            parts.append(f"<{u}>")
        return " + ".join(parts)


@dataclass(frozen=True)
class WittClassQ:
    """An element of W(Q) in canonical coordinates.

    signature: image under the (unique) signature homomorphism W(Q) -> Z.
    dyadic:    parity of the 2-adic valuation of the discriminant.
    residues:  second residue homomorphisms d_p into W(F_p), odd p, stored
               sparsely as a sorted tuple of (p, WFpClass) with nonzero class.
    """

    signature: int
    dyadic: int
    residues: tuple[tuple[int, WFpClass], ...] = ()

    @classmethod
    def zero(cls) -> WittClassQ:
        return cls(0, 0, ())

    @classmethod
    def one(cls) -> WittClassQ:
        return cls(1, 0, ())

    @classmethod
    def from_int(cls, n: int) -> WittClassQ:
        """The class n*<1>."""
        return cls(n, 0, ())

    @classmethod
    def _make(cls, signature: int, dyadic: int, res: dict[int, WFpClass]) -> WittClassQ:
        packed = tuple(
            (p, r) for p, r in sorted(res.items()) if not r.is_zero()
        )
        return cls(signature, dyadic % 2, packed)

    @classmethod
    def from_diagonal(cls, form: DiagonalForm) -> WittClassQ:
        signature = 0
        dyadic = 0
        res: dict[int, WFpClass] = {}
        for entry in form.entries:
            a = entry.value
            signature += entry.sign
            if a % 2 == 0:
                dyadic += 1
            for p in entry.odd_primes:
                unit = (a // p) % p
                r = WFpClass.from_unit(p, unit)
                res[p] = res[p] + r if p in res else r
        return cls._make(signature, dyadic, res)

    @classmethod
    def from_square_class(cls, a: SquareClass | Rational) -> WittClassQ:
        if not isinstance(a, SquareClass):
            a = SquareClass.of(a)
        return cls.from_diagonal(DiagonalForm((a,)))

    @property
    def residue_map(self) -> dict[int, WFpClass]:
        return dict(self.residues)

    @property
    def support(self) -> frozenset[int]:
        """Odd primes with nonzero residue."""
        return frozenset(p for p, _ in self.residues)

    def is_zero(self) -> bool:
        return self.signature == 0 and self.dyadic == 0 and not self.residues

    def is_integral(self) -> bool:
        """True iff the class is n*<1> for some integer n."""
        return self.dyadic == 0 and not self.residues

    def as_int(self) -> int:
        if not self.is_integral():
            raise ValueError(f"{self} is not an integer multiple of <1>")
        return self.signature

    def __add__(self, other: WittClassQ) -> WittClassQ:
        res = self.residue_map
        for p, r in other.residues:
            res[p] = res[p] + r if p in res else r
        return self._make(self.signature + other.signature, self.dyadic + other.dyadic, res)

    def __neg__(self) -> WittClassQ:
        return WittClassQ(
            -self.signature, self.dyadic, tuple((p, -r) for p, r in self.residues)
        )

    def __sub__(self, other: WittClassQ) -> WittClassQ:
        return self + (-other)

    def scale(self, n: int) -> WittClassQ:
        res = {p: r.scale(n) for p, r in self.residues}
        return self._make(n * self.signature, n * self.dyadic, res)

    def __rmul__(self, n: int) -> WittClassQ:
        if isinstance(n, int):
            return self.scale(n)
        return NotImplemented

    def _split(self) -> tuple[int, list[int]]:
        """Write the class as s*<1> + (class of a short diagonal form).

        The short part carries all residues and the dyadic bit in a bounded
        number of entries, so products stay small no matter how large the
        signature is.  Primes are processed from the largest down; a lift
        <u*p> can disturb residues at the odd primes dividing the
        non-residue u < p, so those join the worklist.
        """
        entries: list[int] = []
        pending = set(self.support)
        done: set[int] = set()
        while pending:
            p = max(pending)
            pending.discard(p)
            done.add(p)
            have = (
                WittClassQ.from_diagonal(DiagonalForm.of(entries))
                if entries
                else WittClassQ.zero()
            )
            want = self.residue_map.get(p, WFpClass.zero(p))
            need = want + (-have.residue_map.get(p, WFpClass.zero(p)))
            if need.is_zero():
                continue
            new: list[int] = []
            if p % 4 == 1:
                u = smallest_nonresidue(p)
                new.extend([p] * need.a)
                new.extend([u * p] * need.b)
            else:
                # a in Z/4; 3*<1> is shortest as <-1> = <-p> under d_p
                if need.a == 3:
                    new.append(-p)
                else:
                    new.extend([p] * need.a)
            entries.extend(new)
            for e in new:
                for q in SquareClass(e).odd_primes:
                    if q < p and q not in done:
                        pending.add(q)
        dyadic = sum(1 for e in entries if e % 2 == 0) % 2
        if dyadic != self.dyadic:
            entries.append(2)
        g = WittClassQ.from_diagonal(DiagonalForm.of(entries)) if entries else WittClassQ.zero()
        return self.signature - g.signature, entries

    def to_diagonal(self) -> DiagonalForm:
        """Some diagonal form representing this class exactly."""
        s, entries = self._split()
        entries = entries + [1 if s > 0 else -1] * abs(s)
        return DiagonalForm.of(entries)

    def __mul__(self, other: WittClassQ) -> WittClassQ:
        if not isinstance(other, WittClassQ):
            return NotImplemented
        # bilinear expansion over the split parts; only the short torsion-ish
        # parts get tensored as actual diagonal forms
        s1, g1 = self._split()
        s2, g2 = other._split()
        out = WittClassQ.from_int(s1 * s2)
        if g1:
            out = out + WittClassQ.from_diagonal(DiagonalForm.of(g1)).scale(s2)
        if g2:
            out = out + WittClassQ.from_diagonal(DiagonalForm.of(g2)).scale(s1)
        if g1 and g2:
            prod = DiagonalForm.of(g1) * DiagonalForm.of(g2)
            out = out + WittClassQ.from_diagonal(prod)
        return out

    def to_json(self):
        return {
            "sig": self.signature,
            "dy": self.dyadic,
            "res": {str(p): r.to_json() for p, r in self.residues},
        }

    @classmethod
    def from_json(cls, data) -> WittClassQ:
        res = {int(p): WFpClass.from_json(int(p), v) for p, v in data.get("res", {}).items()}
        return cls._make(data["sig"], data["dy"], res)

    def pretty(self) -> str:
        """Readable form a<1> + b<2> [+ residue terms], b in {0, 1}."""
        a = self.signature - self.dyadic
        parts = []
        if a:
            parts.append(f"{a}")
        if self.dyadic:
            parts.append("+ <2>" if parts else "<2>")
        rest = ", ".join(f"d_{p}: {r}" for p, r in self.residues)
        if rest:
            parts.append(f"[{rest}]")
        return " ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.pretty()


def diag_to_wittq(form: DiagonalForm) -> WittClassQ:
    return WittClassQ.from_diagonal(form)


def wittq_add(a: WittClassQ, b: WittClassQ) -> WittClassQ:
    return a + b


def wittq_mul(a: WittClassQ, b: WittClassQ) -> WittClassQ:
    return a * b


@dataclass(frozen=True)
class GWLift:
    """A Witt-Grothendieck class: a Witt class together with its rank."""

    rank: int
    witt: WittClassQ

    def __post_init__(self) -> None:
        # sig = rank mod 2 for any representative, so parity must match
        if (self.rank - self.witt.signature) % 2:
            raise ValueError("rank parity does not match the Witt class")

    def __add__(self, other: GWLift) -> GWLift:
        return GWLift(self.rank + other.rank, self.witt + other.witt)

    @classmethod
    def hyperbolic(cls, copies: int = 1) -> GWLift:
        return cls(2 * copies, WittClassQ.zero())
