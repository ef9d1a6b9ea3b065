"""The quotient ring Z[t_1, ..., t_s] / (t_j^2 = 2 t_j).

Every element has a unique expansion over squarefree monomials t_J,
J a subset of {1, ..., s}, with t_J * t_K = 2^|J&K| * t_{J|K}.  Subsets are
stored as bitmasks (bit j-1 is t_j).  The symbols u_j = 2 - t_j and the
edge-weight brackets [w]_j are derived elements, not stored generators.
"""

from __future__ import annotations

from dataclasses import dataclass

from .wittring import SquareClass, WittClassQ, trace_form


class HalvingError(ArithmeticError):
    """A coefficient was not divisible as required.  Signals an internal bug."""


@dataclass(frozen=True)
class TPoly:
    num_vars: int
    coeffs: tuple[tuple[int, int], ...]  # sorted (mask, coefficient), nonzero

    @classmethod
    def _make(cls, num_vars: int, data: dict[int, int]) -> TPoly:
        return cls(num_vars, tuple(sorted((m, c) for m, c in data.items() if c)))

    @classmethod
    def zero(cls, num_vars: int = 0) -> TPoly:
        return cls._make(num_vars, {})

    @classmethod
    def const(cls, c: int, num_vars: int = 0) -> TPoly:
        return cls._make(num_vars, {0: c})

    @classmethod
    def one(cls, num_vars: int = 0) -> TPoly:
        return cls.const(1, num_vars)

    @classmethod
    def var(cls, j: int, num_vars: int) -> TPoly:
        """The generator t_j, 1-based."""
        if not 1 <= j <= num_vars:
            raise ValueError(f"t_{j} is not one of t_1..t_{num_vars}")
        return cls._make(num_vars, {1 << (j - 1): 1})

    @classmethod
    def uvar(cls, j: int, num_vars: int) -> TPoly:
        """u_j = 2 - t_j."""
        return cls.const(2, num_vars) - cls.var(j, num_vars)

    @classmethod
    def monomial(cls, vars_: tuple[int, ...], num_vars: int, c: int = 1) -> TPoly:
        mask = 0
        for j in vars_:
            if not 1 <= j <= num_vars:
                raise ValueError(f"t_{j} is not one of t_1..t_{num_vars}")
            mask |= 1 << (j - 1)
        return cls._make(num_vars, {mask: c})

    @classmethod
    def bracket(cls, omega: int, j: int, num_vars: int) -> TPoly:
        """[w]_j = <1> + (w-1)/2 * u_j for odd w, (w/2) * u_j for even w."""
        if omega < 0:
            raise ValueError("bracket weight must be nonnegative")
        u = cls.uvar(j, num_vars)
        if omega % 2:
            return cls.one(num_vars) + u.scale((omega - 1) // 2)
        return u.scale(omega // 2)

    def _dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: TPoly) -> TPoly:
        self._check(other)
        data = self._dict()
        for m, c in other.coeffs:
            data[m] = data.get(m, 0) + c
        return self._make(self.num_vars, data)

    def __neg__(self) -> TPoly:
        return TPoly(self.num_vars, tuple((m, -c) for m, c in self.coeffs))

    def __sub__(self, other: TPoly) -> TPoly:
        return self + (-other)

    def scale(self, n: int) -> TPoly:
        if n == 0:
            return TPoly.zero(self.num_vars)
        return TPoly(self.num_vars, tuple((m, n * c) for m, c in self.coeffs))

    def __mul__(self, other: TPoly) -> TPoly:
        self._check(other)
        data: dict[int, int] = {}
        for m1, c1 in self.coeffs:
            for m2, c2 in other.coeffs:
                m = m1 | m2
                c = c1 * c2 << (m1 & m2).bit_count()
                data[m] = data.get(m, 0) + c
        return self._make(self.num_vars, data)

    def _check(self, other: TPoly) -> None:
        if self.num_vars != other.num_vars:
            raise ValueError("mixed numbers of t-variables")

    def halve(self) -> TPoly:
        data = {}
        for m, c in self.coeffs:
            if c % 2:
                raise HalvingError(f"coefficient {c} of monomial mask {m} is not divisible by 2")
            data[m] = c // 2
        return self._make(self.num_vars, data)

    def coefficient(self, vars_: tuple[int, ...]) -> int:
        mask = 0
        for j in vars_:
            mask |= 1 << (j - 1)
        return self._dict().get(mask, 0)

    def eval_signs(self, signs) -> int:
        """Substitute t_j = 2 when signs[j-1] = +1 and t_j = 0 when -1."""
        signs = list(signs)
        if len(signs) != self.num_vars:
            raise ValueError(f"expected {self.num_vars} signs, got {len(signs)}")
        positive = 0
        for j, sgn in enumerate(signs):
            if sgn == 1:
                positive |= 1 << j
            elif sgn != -1:
                raise ValueError("signs must be +1 or -1")
        total = 0
        for m, c in self.coeffs:
            if m & ~positive:
                continue
            total += c << m.bit_count()
        return total

    def eval_wittq(self, deltas) -> WittClassQ:
        """Substitute t_j = class of <2, 2*delta_j> and evaluate in W(Q)."""
        deltas = [d if isinstance(d, SquareClass) else SquareClass.of(d) for d in deltas]
        if len(deltas) != self.num_vars:
            raise ValueError(f"expected {self.num_vars} values, got {len(deltas)}")
        tvals = [WittClassQ.from_diagonal(trace_form(d)) for d in deltas]
        total = WittClassQ.zero()
        for m, c in self.coeffs:
            term = WittClassQ.one()
            j = 0
            while m >> j:
                if (m >> j) & 1:
                    term = term * tvals[j]
                j += 1
            total = total + term.scale(c)
        return total

    def substitute_one(self, j: int) -> TPoly:
        """Set delta_j = 1 (t_j = 2) and drop the variable, renumbering the rest."""
        if not 1 <= j <= self.num_vars:
            raise ValueError(f"t_{j} is not one of t_1..t_{self.num_vars}")
        bit = 1 << (j - 1)
        low = bit - 1
        data: dict[int, int] = {}
        for m, c in self.coeffs:
            if m & bit:
                c *= 2
            m2 = (m & low) | ((m >> 1) & ~low)
            data[m2] = data.get(m2, 0) + c
        return self._make(self.num_vars - 1, data)

    def is_symmetric(self) -> bool:
        """True iff the coefficient of t_J depends only on |J|."""
        by_size: dict[int, int] = {}
        data = self._dict()
        for mask in range(1 << self.num_vars):
            c = data.get(mask, 0)
            k = mask.bit_count()
            if k in by_size:
                if by_size[k] != c:
                    return False
            else:
                by_size[k] = c
        return True

    def symmetric_coefficients(self) -> list[int]:
        """For symmetric elements: the coefficient on t_{1..k}, k = 0..num_vars."""
        if not self.is_symmetric():
            raise ValueError("element is not symmetric in its t-variables")
        return [self.coefficient(tuple(range(1, k + 1))) for k in range(self.num_vars + 1)]

    def to_json(self):
        return [
            {"vars": [j + 1 for j in range(self.num_vars) if (m >> j) & 1], "c": c}
            for m, c in self.coeffs
        ]

    @classmethod
    def from_json(cls, data, num_vars: int) -> TPoly:
        out: dict[int, int] = {}
        for term in data:
            mask = 0
            for j in term["vars"]:
                mask |= 1 << (j - 1)
            out[mask] = out.get(mask, 0) + term["c"]
        return cls._make(num_vars, out)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in self.coeffs:
            names = "".join(f"t{j + 1}" for j in range(self.num_vars) if (m >> j) & 1)
            if not names:
                parts.append(f"{c}")
            elif c == 1:
                parts.append(names)
            elif c == -1:
                parts.append(f"-{names}")
            else:
                parts.append(f"{c}{names}")
        return " + ".join(parts).replace("+ -", "- ")


def tpoly_add(a: TPoly, b: TPoly) -> TPoly:
    return a + b


def tpoly_mul(a: TPoly, b: TPoly) -> TPoly:
    return a * b


def tpoly_halve(a: TPoly) -> TPoly:
    return a.halve()


def tpoly_eval_signs(a: TPoly, signs) -> int:
    return a.eval_signs(signs)


def tpoly_eval_wittq(a: TPoly, deltas) -> WittClassQ:
    return a.eval_wittq(deltas)
