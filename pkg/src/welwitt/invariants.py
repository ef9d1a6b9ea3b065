"""Multivariable Witt invariants of etale algebras.

An invariant of multidegree (n_0, ..., n_r) is stored by its coefficients
over one of four bases (beta, lambda, alpha, chi) indexed by the box
N_m = {i : 0 <= i_j <= m_j}, m_j = floor(n_j / 2).  The beta basis restricts
to elementary symmetric polynomials in the trace forms of the quadratic
factors; everything else is routed through it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .tring import TPoly
from .wittring import DiagonalForm, SquareClass, WittClassQ, trace_form

BASES = ("beta", "lambda", "alpha", "chi")

Coefficient = int | WittClassQ


class NotBetaIntegralError(ValueError):
    """A multireal vector whose triangle has a non-integer cell."""

    def __init__(self, cell, value):
        self.cell = cell
        self.value = value
        super().__init__(f"not beta-integral: triangle cell {cell} = {value}")


class DegreeMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class MultiDegree:
    n: tuple[int, ...]

    def __post_init__(self):
        if len(self.n) == 0:
            raise ValueError("a multidegree needs at least one variable")
        if any(nj < 0 for nj in self.n):
            raise ValueError("degrees must be nonnegative")

    @classmethod
    def of(cls, n) -> MultiDegree:
        if isinstance(n, MultiDegree):
            return n
        if isinstance(n, int):
            return cls((n,))
        return cls(tuple(int(v) for v in n))

    @property
    def m(self) -> tuple[int, ...]:
        return tuple(nj // 2 for nj in self.n)

    @property
    def num_vars(self) -> int:
        return len(self.n)

    def box(self):
        """Indices of N_m in lexicographic order (serialization order)."""
        return itertools.product(*(range(mj + 1) for mj in self.m))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.n)) + ")"


def _as_witt(c: Coefficient) -> WittClassQ:
    return WittClassQ.from_int(c) if isinstance(c, int) else c


def _cadd(a: Coefficient, b: Coefficient) -> Coefficient:
    if isinstance(a, int) and isinstance(b, int):
        return a + b
    return _as_witt(a) + _as_witt(b)


def _cmul(a: Coefficient, b: Coefficient) -> Coefficient:
    if isinstance(a, int) and isinstance(b, int):
        return a * b
    if isinstance(a, int):
        return b.scale(a)
    if isinstance(b, int):
        return a.scale(b)
    return a * b


def _is_zero(c: Coefficient) -> bool:
    return c == 0 if isinstance(c, int) else c.is_zero()


@dataclass(frozen=True)
class BetaInvariant:
    """A Witt invariant stored by coefficients over a chosen basis."""

    degree: MultiDegree
    basis: str
    mode: str  # "int" | "witt"
    coeffs: tuple[tuple[tuple[int, ...], Coefficient], ...]

    @classmethod
    def make(cls, degree, coeffs: dict, basis: str = "beta", mode: str | None = None) -> BetaInvariant:
        degree = MultiDegree.of(degree)
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        m = degree.m
        clean = {}
        for idx, c in coeffs.items():
            idx = tuple(idx)
            if len(idx) != degree.num_vars or any(not 0 <= i <= mj for i, mj in zip(idx, m)):
                raise ValueError(f"index {idx} outside N_m for m = {m}")
            if not _is_zero(c):
                clean[idx] = c
        if mode is None:
            mode = "int" if all(isinstance(c, int) for c in clean.values()) else "witt"
        if mode == "int":
            if not all(isinstance(c, int) for c in clean.values()):
                raise ValueError("integer mode requires integer coefficients")
        elif mode == "witt":
            clean = {i: _as_witt(c) for i, c in clean.items()}
        else:
            raise ValueError(f"unknown mode {mode!r}")
        return cls(degree, basis, mode, tuple(sorted(clean.items())))

    @classmethod
    def basis_element(cls, degree, idx, basis: str = "beta") -> BetaInvariant:
        return cls.make(degree, {tuple(idx): 1}, basis)

    @classmethod
    def zero(cls, degree, basis: str = "beta") -> BetaInvariant:
        return cls.make(degree, {}, basis)

    @property
    def coeff_map(self) -> dict[tuple[int, ...], Coefficient]:
        return dict(self.coeffs)

    def coefficient(self, idx) -> Coefficient:
        c = self.coeff_map.get(tuple(idx), 0)
        return _as_witt(c) if self.mode == "witt" and isinstance(c, int) else c

    def vector(self) -> list[Coefficient]:
        """Coefficients in box order, zero-filled."""
        cm = self.coeff_map
        zero: Coefficient = 0 if self.mode == "int" else WittClassQ.zero()
        return [cm.get(idx, zero) for idx in self.degree.box()]

    def __add__(self, other: BetaInvariant) -> BetaInvariant:
        if self.degree != other.degree or self.basis != other.basis:
            raise DegreeMismatchError("can only add invariants of equal degree and basis")
        out = self.coeff_map
        for idx, c in other.coeffs:
            out[idx] = _cadd(out.get(idx, 0), c)
        return BetaInvariant.make(self.degree, out, self.basis)

    def __neg__(self) -> BetaInvariant:
        return BetaInvariant.make(
            self.degree, {i: _cmul(-1, c) for i, c in self.coeffs}, self.basis
        )

    def __sub__(self, other: BetaInvariant) -> BetaInvariant:
        return self + (-other)

    def as_witt_mode(self) -> BetaInvariant:
        return BetaInvariant.make(
            self.degree, {i: _as_witt(c) for i, c in self.coeffs}, self.basis, mode="witt"
        )

    def as_int_mode(self) -> BetaInvariant:
        """Demote to integer coefficients; errors unless every one is n*<1>."""
        out = {}
        for idx, c in self.coeffs:
            if isinstance(c, WittClassQ):
                if not c.is_integral():
                    raise ValueError(f"coefficient at {idx} is {c}, not an integer multiple of <1>")
                c = c.as_int()
            out[idx] = c
        return BetaInvariant.make(self.degree, out, self.basis, mode="int")

    def to_json(self):
        return {
            "degree": list(self.degree.n),
            "basis": self.basis,
            "mode": self.mode,
            "coeffs": [
                {"idx": list(idx), "c": c if isinstance(c, int) else c.to_json()}
                for idx, c in self.coeffs
            ],
        }

    @classmethod
    def from_json(cls, data) -> BetaInvariant:
        coeffs = {}
        for term in data["coeffs"]:
            c = term["c"]
            coeffs[tuple(term["idx"])] = c if isinstance(c, int) else WittClassQ.from_json(c)
        return cls.make(data["degree"], coeffs, data["basis"], mode=data["mode"])

    def pretty(self) -> str:
        if not self.coeffs:
            return "0"
        letter = {"beta": "b", "lambda": "l", "alpha": "a", "chi": "x"}[self.basis]
        parts = []
        for idx, c in self.coeffs:
            name = f"{letter}{idx[0]}" if self.degree.num_vars == 1 else f"{letter}{idx}"
            cs = str(c) if isinstance(c, int) else f"({c.pretty()})"
            parts.append(f"{cs} {name}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.pretty()


# ---------------------------------------------------------------------------
# multireal values and triangles


def multireal_matrix(m: int) -> list[list[int]]:
    """Matrix of the evaluation-at-multireal-algebras map on the beta basis."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return [[2**i * comb(m - s, i) for i in range(m + 1)] for s in range(m + 1)]


def kron_multireal(mbar) -> dict[tuple[tuple[int, ...], tuple[int, ...]], int]:
    """Kronecker product of the single-variable matrices, indexed by (s, i)."""
    mbar = tuple(mbar)
    mats = [multireal_matrix(mj) for mj in mbar]
    out = {}
    ranges = [range(mj + 1) for mj in mbar]
    for sbar in itertools.product(*ranges):
        for ibar in itertools.product(*ranges):
            v = 1
            for mat, s, i in zip(mats, sbar, ibar):
                v *= mat[s][i]
                if v == 0:
                    break
            if v:
                out[(sbar, ibar)] = v
    return out


def _positive_coords(idx):
    return [j for j, v in enumerate(idx) if v > 0]


def _dec(idx, j):
    return idx[:j] + (idx[j] - 1,) + idx[j + 1 :]


def _inc(idx, j):
    return idx[:j] + (idx[j] + 1,) + idx[j + 1 :]


@dataclass(frozen=True)
class MultirealTriangle:
    """The triangular array linking multireal values to beta coefficients.

    Cells c[u][i] are indexed by pairs of multi-indices with u, i, u+i in N_m.
    The top row (i = 0) holds the multireal values w_{m-u}; the left column
    (u = 0) holds the beta coefficients.
    """

    degree: MultiDegree
    entries: tuple[tuple[tuple[tuple[int, ...], tuple[int, ...]], object], ...]

    @property
    def cells(self) -> dict:
        return dict(self.entries)

    @staticmethod
    def _domain(degree: MultiDegree):
        m = degree.m
        for u in degree.box():
            for i in degree.box():
                if all(uj + ij <= mj for uj, ij, mj in zip(u, i, m)):
                    yield (u, i)

    @classmethod
    def from_multireal(cls, degree, w: dict) -> MultirealTriangle:
        """Forward halving recursion from integer multireal values."""
        degree = MultiDegree.of(degree)
        m = degree.m
        w = {tuple(k): v for k, v in w.items()}
        missing = [s for s in degree.box() if tuple(s) not in w]
        if missing:
            raise ValueError(f"multireal vector is missing entries at {missing[:3]}")
        cells: dict = {}
        zero = tuple(0 for _ in m)
        for u in degree.box():
            cells[(u, zero)] = Fraction(w[tuple(mj - uj for mj, uj in zip(m, u))])
        for i in degree.box():
            js = _positive_coords(i)
            if not js:
                continue
            for u in degree.box():
                if any(uj + ij > mj for uj, ij, mj in zip(u, i, m)):
                    continue
                vals = [
                    Fraction(cells[(_inc(u, j), _dec(i, j))] - cells[(u, _dec(i, j))], 2)
                    for j in js
                ]
                if any(v != vals[0] for v in vals[1:]):
                    raise AssertionError(f"recursion is not well defined at {(u, i)}: {vals}")
                cells[(u, i)] = vals[0]
        norm = {k: (int(v) if v.denominator == 1 else v) for k, v in cells.items()}
        return cls(degree, tuple(sorted(norm.items())))

    @classmethod
    def from_beta(cls, degree, b: dict) -> MultirealTriangle:
        """Inverse recursion c[u][i] = c[u-e][i] + 2 c[u-e][i+e] from the left column."""
        degree = MultiDegree.of(degree)
        m = degree.m
        b = {tuple(k): v for k, v in b.items()}
        if any(isinstance(v, WittClassQ) for v in b.values()):
            b = {k: _as_witt(v) for k, v in b.items()}
            default: Coefficient = WittClassQ.zero()
        else:
            default = 0
        cells: dict = {}
        zero = tuple(0 for _ in m)
        for i in degree.box():
            cells[(zero, i)] = b.get(i, default)
        for u in degree.box():
            js = _positive_coords(u)
            if not js:
                continue
            for i in degree.box():
                if any(uj + ij > mj for uj, ij, mj in zip(u, i, m)):
                    continue
                vals = [
                    _cadd(cells[(_dec(u, j), i)], _cmul(2, cells[(_dec(u, j), _inc(i, j))]))
                    for j in js
                ]
                if any(v != vals[0] for v in vals[1:]):
                    raise AssertionError(f"inverse recursion inconsistent at {(u, i)}")
                cells[(u, i)] = vals[0]
        return cls(degree, tuple(sorted(cells.items())))

    def cell(self, u, i):
        return self.cells[(tuple(u), tuple(i))]

    def top_row(self) -> dict:
        zero = tuple(0 for _ in self.degree.m)
        return {u: c for (u, i), c in self.entries if i == zero}

    def left_column(self) -> dict:
        zero = tuple(0 for _ in self.degree.m)
        return {i: c for (u, i), c in self.entries if u == zero}

    def multireal_values(self) -> dict:
        """w indexed by s (top row reindexed by s = m - u)."""
        m = self.degree.m
        return {
            tuple(mj - uj for mj, uj in zip(m, u)): c for u, c in self.top_row().items()
        }

    def first_fractional_cell(self):
        for (u, i), c in self.entries:
            if isinstance(c, Fraction) and c.denominator != 1:
                return (u, i), c
        return None

    def is_integral(self) -> bool:
        return self.first_fractional_cell() is None

    def csv_rows(self) -> list[list]:
        """One row per u (in box order): the cells c[u][i] for valid i."""
        rows = []
        m = self.degree.m
        cells = self.cells
        for u in self.degree.box():
            row: list = [",".join(map(str, u))]
            for i in self.degree.box():
                if all(uj + ij <= mj for uj, ij, mj in zip(u, i, m)):
                    row.append(cells[(u, i)])
            rows.append(row)
        return rows


def triangle_from_multireal(degree, w: dict) -> MultirealTriangle:
    return MultirealTriangle.from_multireal(degree, w)


def beta_from_multireal(degree, w: dict) -> BetaInvariant:
    """The unique beta-integral invariant with the given multireal values."""
    tri = MultirealTriangle.from_multireal(degree, w)
    bad = tri.first_fractional_cell()
    if bad is not None:
        raise NotBetaIntegralError(*bad)
    return BetaInvariant.make(degree, tri.left_column(), "beta", mode="int")


def multireal_from_beta(inv: BetaInvariant) -> dict:
    """Multireal values w_s, via the matrix action (any coefficient type)."""
    if inv.basis != "beta":
        inv = convert_basis(inv, "beta")
    m = inv.degree.m
    cm = inv.coeff_map
    out = {}
    for s in inv.degree.box():
        acc: Coefficient = 0
        for i, c in cm.items():
            factor = 1
            for mj, sj, ij in zip(m, s, i):
                factor *= 2**ij * comb(mj - sj, ij)
                if factor == 0:
                    break
            if factor:
                acc = _cadd(acc, _cmul(factor, c))
        out[s] = acc
    return out


# ---------------------------------------------------------------------------
# basis conversion


def _multichoose(n: int, k: int) -> int:
    if k == 0:
        return 1
    return comb(n + k - 1, k)


def _gamma(m: int, i: int, k: int) -> int:
    return sum(
        (-1) ** (j - k) * _multichoose(m, j - k) * comb(m - j, i - j)
        for j in range(k, i + 1)
    )


def _delta(m: int, i: int, k: int) -> int:
    if i < 0:
        return 0
    return sum(
        (-1) ** (j - k) * comb(m - k, j - k) * comb(m, i - j) for j in range(k, i + 1)
    )


_W_TWO = WittClassQ(1, 1, ())  # the class <2>


def _two_pow(e: int) -> WittClassQ:
    return WittClassQ.one() if e % 2 == 0 else _W_TWO


def mat_lambda_to_beta(n: int) -> list[list[WittClassQ]]:
    """Row i: the beta-coefficients of lambda_i."""
    m = n // 2
    out = [[WittClassQ.zero()] * (m + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        for k in range(i + 1):
            if n % 2 == 0:
                out[i][k] = _two_pow(i - k).scale(_delta(m, i, k))
            else:
                c = WittClassQ.from_int(_delta(m, i, k)) + _W_TWO.scale(_delta(m, i - 1, k))
                out[i][k] = _two_pow(i - k) * c
    return out


def mat_beta_to_lambda(n: int) -> list[list[WittClassQ]]:
    """Row i: the lambda-coefficients of beta_i."""
    m = n // 2
    out = [[WittClassQ.zero()] * (m + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        for k in range(i + 1):
            if n % 2 == 0:
                out[i][k] = _two_pow(i - k).scale(_gamma(m, i, k))
            else:
                acc = WittClassQ.zero()
                for u in range(k, i + 1):
                    acc = acc + _two_pow(i - u).scale((-1) ** (u - k) * _gamma(m, i, u))
                out[i][k] = acc
    return out


class _Z2T:
    """Elements x + y*<2> with x, y in the t-ring; <2>^2 = <1>."""

    __slots__ = ("x", "y")

    def __init__(self, x: TPoly, y: TPoly):
        self.x = x
        self.y = y

    @classmethod
    def of(cls, x: TPoly) -> _Z2T:
        return cls(x, TPoly.zero(x.num_vars))

    def __add__(self, o: _Z2T) -> _Z2T:
        return _Z2T(self.x + o.x, self.y + o.y)

    def __mul__(self, o: _Z2T) -> _Z2T:
        return _Z2T(self.x * o.x + self.y * o.y, self.x * o.y + self.y * o.x)

    def coefficient(self, vars_) -> WittClassQ:
        return WittClassQ.from_int(self.x.coefficient(vars_)) + _W_TWO.scale(
            self.y.coefficient(vars_)
        )


def _elementary_symmetric(elements: list, one, zero) -> list:
    """e_0, ..., e_len for ring elements, by expanding prod (1 + X*elem)."""
    coeffs = [one]
    for elem in elements:
        coeffs.append(zero)
        for d in range(len(coeffs) - 1, 0, -1):
            coeffs[d] = coeffs[d] + coeffs[d - 1] * elem
    return coeffs


def _symbolic_restriction_matrix(basis: str, n: int) -> list[list[WittClassQ]]:
    """Express basis_i restricted to multiquadratic algebras over the beta basis.

    Works inside Z[<2>] tensor the t-ring on m variables; the (i, k) entry is
    the coefficient of the monomial t_1...t_k.
    """
    m = n // 2
    one = _Z2T.of(TPoly.one(m))
    zero = _Z2T.of(TPoly.zero(m))
    two = _Z2T(TPoly.zero(m), TPoly.one(m))  # <2>

    if basis == "beta":
        elems = [_Z2T.of(TPoly.var(j, m)) for j in range(1, m + 1)]
        rows = _elementary_symmetric(elems, one, zero)
    elif basis == "alpha":
        elems = [
            two * _Z2T.of(TPoly.var(j, m)) + _Z2T.of(TPoly.const(-1, m))
            for j in range(1, m + 1)
        ]
        rows = _elementary_symmetric(elems, one, zero)
    elif basis == "lambda":
        elems = [two] * m + [
            _Z2T(TPoly.var(j, m), TPoly.const(-1, m)) for j in range(1, m + 1)
        ]
        if n % 2:
            elems.append(one)
        rows = _elementary_symmetric(elems, one, zero)[: m + 1]
    else:
        raise ValueError(basis)
    return [
        [rows[i].coefficient(tuple(range(1, k + 1))) for k in range(m + 1)]
        for i in range(m + 1)
    ]


def mat_chi_to_beta(n: int) -> list[list[int]]:
    """chi_i = Tr(Sym^i); integer unitriangular over the beta basis."""
    m = n // 2
    # series over x, coefficients in the t-ring: product of the per-factor
    # symmetric-power trace series, times 1/(1-x) for the odd-degree unit factor
    series = [TPoly.one(m)] + [TPoly.zero(m)] * m
    for j in range(1, m + 1):
        tj = TPoly.var(j, m)
        factor = [
            tj.scale((d + 1) // 2) + TPoly.const(1 - d % 2, m) for d in range(m + 1)
        ]
        series = [
            sum(
                (series[a] * factor[d - a] for a in range(d + 1)),
                TPoly.zero(m),
            )
            for d in range(m + 1)
        ]
    if n % 2:
        acc = TPoly.zero(m)
        cumulative = []
        for d in range(m + 1):
            acc = acc + series[d]
            cumulative.append(acc)
        series = cumulative
    out = []
    for i in range(m + 1):
        row = [series[i].coefficient(tuple(range(1, k + 1))) for k in range(m + 1)]
        out.append(row)
    return out


def _invert_triangular(mat):
    """Inverse of a lower-triangular matrix whose diagonal squares to one."""
    size = len(mat)
    ints = all(isinstance(mat[i][k], int) for i in range(size) for k in range(i + 1))
    zero: Coefficient = 0 if ints else WittClassQ.zero()
    inv = [[zero] * size for _ in range(size)]
    for i in range(size):
        d = mat[i][i]
        if _cmul(d, d) != (1 if ints else WittClassQ.one()):
            raise AssertionError("diagonal entry is not a square root of one")
        inv[i][i] = d
        for k in range(i - 1, -1, -1):
            acc = zero
            for j in range(k, i):
                acc = _cadd(acc, _cmul(mat[i][j], inv[j][k]))
            inv[i][k] = _cmul(_cmul(-1, d), acc)
    return inv


_matrix_cache: dict = {}


def basis_to_beta_matrix(basis: str, n: int):
    """Row i, column k: beta_k-coefficient of the i-th source-basis element."""
    key = (basis, n)
    if key not in _matrix_cache:
        if basis == "beta":
            m = n // 2
            mat = [[int(i == k) for k in range(m + 1)] for i in range(m + 1)]
        elif basis == "lambda":
            mat = mat_lambda_to_beta(n)
        elif basis == "alpha":
            mat = _symbolic_restriction_matrix("alpha", n)
        elif basis == "chi":
            mat = mat_chi_to_beta(n)
        else:
            raise ValueError(f"unknown basis {basis!r}")
        _matrix_cache[key] = mat
    return _matrix_cache[key]


def beta_to_basis_matrix(basis: str, n: int):
    key = ("inv", basis, n)
    if key not in _matrix_cache:
        if basis == "lambda":
            mat = mat_beta_to_lambda(n)
        else:
            mat = _invert_triangular(basis_to_beta_matrix(basis, n))
        _matrix_cache[key] = mat
    return _matrix_cache[key]


def _apply_factorwise(coeffs: dict, degree: MultiDegree, mats) -> dict:
    """coeffs indexed by the box transform as a Kronecker product of matrices.

    mats[j][i][k] is the column-k coefficient of source index i in variable j:
    new[kbar] = sum_i old[ibar] * prod_j mats[j][i_j][k_j].
    """
    out: dict = {}
    for ibar, c in coeffs.items():
        items = [(ibar, c)]
        for j, mat in enumerate(mats):
            nxt = []
            for idx, v in items:
                for k, entry in enumerate(mat[idx[j]][: idx[j] + 1]):
                    if _is_zero(entry):
                        continue
                    nxt.append((idx[:j] + (k,) + idx[j + 1 :], _cmul(v, entry)))
            items = nxt
        for idx, v in items:
            out[idx] = _cadd(out.get(idx, 0), v) if idx in out else v
    return {i: c for i, c in out.items() if not _is_zero(c)}


def convert_basis(inv: BetaInvariant, target: str) -> BetaInvariant:
    """Exact base change; coefficients pick up <2> factors where they must."""
    if target not in BASES:
        raise ValueError(f"unknown basis {target!r}")
    if inv.basis == target:
        return inv
    coeffs = inv.coeff_map
    degree = inv.degree
    if inv.basis != "beta":
        mats = [basis_to_beta_matrix(inv.basis, nj) for nj in degree.n]
        coeffs = _apply_factorwise(coeffs, degree, mats)
    if target != "beta":
        mats = [beta_to_basis_matrix(target, nj) for nj in degree.n]
        coeffs = _apply_factorwise(coeffs, degree, mats)
    out = BetaInvariant.make(degree, coeffs, target)
    if out.mode == "witt":
        try:
            return out.as_int_mode()
        except ValueError:
            return out
    return out


# ---------------------------------------------------------------------------
# algebras and evaluation


@dataclass(frozen=True)
class AlgebraFactor:
    """One etale-algebra slot: multiquadratic data or a multireal count."""

    n: int
    deltas: tuple[SquareClass, ...] | None = None
    conj_pairs: int | None = None

    def __post_init__(self):
        if (self.deltas is None) == (self.conj_pairs is None):
            raise ValueError("give either deltas or conj_pairs")
        m = self.n // 2
        if self.deltas is not None and len(self.deltas) != m:
            raise ValueError(
                f"degree {self.n} needs {m} quadratic factors plus the explicit "
                f"unit padding, got {len(self.deltas)}"
            )
        if self.conj_pairs is not None and not 0 <= 2 * self.conj_pairs <= self.n:
            raise ValueError(f"need 0 <= 2s <= n, got s={self.conj_pairs}, n={self.n}")

    @classmethod
    def multiquadratic(cls, n: int, deltas) -> AlgebraFactor:
        ds = tuple(d if isinstance(d, SquareClass) else SquareClass.of(d) for d in deltas)
        return cls(n, deltas=ds)

    @classmethod
    def multireal(cls, n: int, s: int) -> AlgebraFactor:
        return cls(n, conj_pairs=s)

    def resolved_deltas(self) -> tuple[SquareClass, ...]:
        if self.deltas is not None:
            return self.deltas
        m = self.n // 2
        s = self.conj_pairs
        return tuple([SquareClass(-1)] * s + [SquareClass(1)] * (m - s))


@dataclass(frozen=True)
class EtaleAlgebraSpec:
    factors: tuple[AlgebraFactor, ...]

    @classmethod
    def multireal(cls, degree, sbar) -> EtaleAlgebraSpec:
        degree = MultiDegree.of(degree)
        sbar = tuple(sbar)
        if len(sbar) != degree.num_vars:
            raise DegreeMismatchError("one conjugate-pair count per variable")
        return cls(tuple(AlgebraFactor.multireal(n, s) for n, s in zip(degree.n, sbar)))

    @classmethod
    def multiquadratic(cls, degree, deltass) -> EtaleAlgebraSpec:
        degree = MultiDegree.of(degree)
        if len(deltass) != degree.num_vars:
            raise DegreeMismatchError("one delta list per variable")
        return cls(
            tuple(
                AlgebraFactor.multiquadratic(n, ds) for n, ds in zip(degree.n, deltass)
            )
        )

    @property
    def degree(self) -> MultiDegree:
        return MultiDegree(tuple(f.n for f in self.factors))


def eval_invariant(inv: BetaInvariant, algebra: EtaleAlgebraSpec) -> WittClassQ:
    """Value of the invariant on a multiquadratic (or multireal) algebra tuple."""
    if algebra.degree != inv.degree:
        raise DegreeMismatchError(
            f"invariant degree {inv.degree} vs algebra degree {algebra.degree}"
        )
    if inv.basis != "beta":
        inv = convert_basis(inv, "beta")
    esym = []
    for factor in algebra.factors:
        traces = [
            WittClassQ.from_diagonal(trace_form(d)) for d in factor.resolved_deltas()
        ]
        esym.append(_elementary_symmetric(traces, WittClassQ.one(), WittClassQ.zero()))
    total = WittClassQ.zero()
    for idx, c in inv.coeffs:
        term = WittClassQ.one()
        for j, ij in enumerate(idx):
            term = term * esym[j][ij]
        total = total + _as_witt(_cmul(c, term))
    return total


def restrict_to_multiquadratic(inv: BetaInvariant) -> TPoly:
    """Symbolic restriction: deltas stay as t-variables, one block per slot."""
    if inv.basis != "beta":
        inv = convert_basis(inv, "beta")
    inv = inv.as_int_mode()  # t-ring coefficients are integers
    m = inv.degree.m
    total_vars = sum(m)
    offsets = [sum(m[:j]) for j in range(len(m))]
    esym = []
    for j, mj in enumerate(m):
        elems = [TPoly.var(offsets[j] + l + 1, total_vars) for l in range(mj)]
        esym.append(
            _elementary_symmetric(elems, TPoly.one(total_vars), TPoly.zero(total_vars))
        )
    total = TPoly.zero(total_vars)
    for idx, c in inv.coeffs:
        term = TPoly.one(total_vars)
        for j, ij in enumerate(idx):
            term = term * esym[j][ij]
        total = total + term.scale(c)
    return total


# ---------------------------------------------------------------------------
# cutting, splitting, ramification, torsion


def cut(inv: BetaInvariant, ubar, flavor: str) -> BetaInvariant:
    """Degree-lowering homomorphisms: round = append split points, square =
    append conjugate pairs, brace = shift away the top triangle row."""
    if flavor not in ("round", "square", "brace"):
        raise ValueError(f"unknown cut flavor {flavor!r}")
    if inv.basis != "beta":
        inv = convert_basis(inv, "beta")
    ubar = tuple(ubar)
    degree = inv.degree
    if len(ubar) != degree.num_vars:
        raise DegreeMismatchError("one cut amount per variable")
    new_n = tuple(nj - 2 * uj for nj, uj in zip(degree.n, ubar))
    if any(nj < 0 for nj in new_n):
        raise ValueError(f"cut by {ubar} underflows degree {degree}")
    coeffs = inv.coeff_map
    for j, uj in enumerate(ubar):
        for _ in range(uj):
            coeffs = _cut_once(coeffs, j, flavor)
    new_m = MultiDegree(new_n).m
    coeffs = {
        idx: c
        for idx, c in coeffs.items()
        if all(ij <= mj for ij, mj in zip(idx, new_m))
    }
    return BetaInvariant.make(MultiDegree(new_n), coeffs, "beta")


def _cut_once(coeffs: dict, j: int, flavor: str) -> dict:
    out: dict = {}
    for idx, c in coeffs.items():
        if flavor == "round":
            # beta_i -> beta_i + 2 beta_{i-1}
            out[idx] = _cadd(out.get(idx, 0), c)
            if idx[j] > 0:
                tgt = _dec(idx, j)
                out[tgt] = _cadd(out.get(tgt, 0), _cmul(2, c))
        elif flavor == "square":
            out[idx] = _cadd(out.get(idx, 0), c)
        else:  # brace: beta_i -> beta_{i-1}
            if idx[j] > 0:
                tgt = _dec(idx, j)
                out[tgt] = _cadd(out.get(tgt, 0), c)
    return out


def split(inv: BetaInvariant, j: int) -> BetaInvariant:
    """Pull a quadratic factor out of slot j into a new final slot of degree 2."""
    if inv.basis != "beta":
        inv = convert_basis(inv, "beta")
    degree = inv.degree
    if not 0 <= j < degree.num_vars:
        raise DegreeMismatchError(f"no slot {j} in degree {degree}")
    if degree.n[j] < 2:
        raise ValueError(f"cannot split slot {j} of degree {degree.n[j]}")
    new_n = tuple(
        nj - 2 if l == j else nj for l, nj in enumerate(degree.n)
    ) + (2,)
    new_m_j = (degree.n[j] - 2) // 2
    out: dict = {}
    for idx, c in inv.coeffs:
        if idx[j] <= new_m_j:
            out[idx + (0,)] = _cadd(out.get(idx + (0,), 0), c)
        if idx[j] > 0:
            tgt = _dec(idx, j) + (1,)
            out[tgt] = _cadd(out.get(tgt, 0), c)
    return BetaInvariant.make(MultiDegree(new_n), out, "beta")


def ramified_primes(inv: BetaInvariant) -> frozenset[int]:
    """Odd primes where some beta-coefficient has a nonzero residue."""
    if inv.basis != "beta":
        inv = convert_basis(inv, "beta")
    out: set[int] = set()
    for _, c in inv.coeffs:
        if isinstance(c, WittClassQ):
            out |= c.support
    return frozenset(out)


def torsion_check(inv: BetaInvariant) -> bool:
    """True iff the invariant is torsion, i.e. all multireal signatures vanish."""
    if inv.basis != "beta":
        inv = convert_basis(inv, "beta")
    values = multireal_from_beta(inv)
    by_values = all(
        (v == 0 if isinstance(v, int) else v.signature == 0) for v in values.values()
    )
    by_coeffs = all(
        (c == 0 if isinstance(c, int) else c.signature == 0) for _, c in inv.coeffs
    )
    if by_values != by_coeffs:
        raise AssertionError("multireal signatures disagree with coefficient signatures")
    return by_values
