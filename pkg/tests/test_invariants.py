import random
from fractions import Fraction
from math import comb

import pytest

from welwitt.invariants import (
    AlgebraFactor,
    BetaInvariant,
    EtaleAlgebraSpec,
    MultiDegree,
    MultirealTriangle,
    NotBetaIntegralError,
    beta_from_multireal,
    convert_basis,
    cut,
    eval_invariant,
    kron_multireal,
    mat_lambda_to_beta,
    multireal_from_beta,
    multireal_matrix,
    ramified_primes,
    restrict_to_multiquadratic,
    split,
    torsion_check,
    triangle_from_multireal,
    _symbolic_restriction_matrix,
)
from welwitt.tring import TPoly
from welwitt.wittring import WittClassQ

TWO = WittClassQ(1, 1, ())


def _det(mat):
    mat = [[Fraction(x) for x in row] for row in mat]
    n = len(mat)
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if mat[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            mat[c], mat[piv] = mat[piv], mat[c]
            out = -out
        out *= mat[c][c]
        for r in range(c + 1, n):
            f = mat[r][c] / mat[c][c]
            mat[r] = [a - f * b for a, b in zip(mat[r], mat[c])]
    return out


def test_multireal_matrix_examples():
    assert multireal_matrix(2) == [[1, 4, 4], [1, 2, 0], [1, 0, 0]]
    assert multireal_matrix(0) == [[1]]
    assert abs(_det(multireal_matrix(3))) == 64


def test_multireal_matrix_determinant():
    for m in range(13):
        assert abs(_det(multireal_matrix(m))) == 2 ** comb(m + 1, 2)


def test_kron_multireal():
    k = kron_multireal((1, 1))
    assert k[((0, 0), (1, 1))] == 4
    assert k[((1, 0), (0, 1))] == 2
    assert ((1, 1), (1, 1)) not in k


def test_intro_triangle():
    w = {(s,): v for s, v in enumerate([240, 144, 80, 40, 16, 0])}
    tri = triangle_from_multireal((11,), w)
    rows = [
        [0, 16, 40, 80, 144, 240],
        [8, 12, 20, 32, 48],
        [2, 4, 6, 8],
        [1, 1, 1],
        [0, 0],
        [0],
    ]
    for i, row in enumerate(rows):
        assert [tri.cell((u,), (i,)) for u in range(len(row))] == row
    inv = beta_from_multireal((11,), w)
    assert inv.coeff_map == {(1,): 8, (2,): 2, (3,): 1}
    assert inv.mode == "int"


def test_zero_triangle():
    w = {(s,): 0 for s in range(4)}
    tri = triangle_from_multireal((7,), w)
    assert all(v == 0 for v in tri.cells.values())


def test_not_beta_integral():
    with pytest.raises(NotBetaIntegralError) as err:
        beta_from_multireal((2,), {(0,): 0, (1,): 1})
    assert err.value.value == Fraction(-1, 2)


def test_beta_row_d5_top_value():
    b = {(i,): v for i, v in enumerate([64, 0, 46, 16, 12, 4, 1, 0])}
    inv = BetaInvariant.make((14,), b)
    assert multireal_from_beta(inv)[(0,)] == 18264


def test_triangle_roundtrip_random():
    rng = random.Random(21)
    for _ in range(500):
        m0 = rng.randint(0, 6)
        m1 = rng.randint(0, 3)
        degree = MultiDegree.of((2 * m0 + rng.randint(0, 1), 2 * m1 + rng.randint(0, 1)))
        b = {i: rng.randint(-20, 20) for i in degree.box()}
        inv = BetaInvariant.make(degree, b)
        w = multireal_from_beta(inv)
        assert beta_from_multireal(degree, w).coeff_map == inv.coeff_map


def test_inverse_recursion_matches_forward():
    rng = random.Random(22)
    for _ in range(100):
        degree = MultiDegree.of((rng.randint(0, 8), rng.randint(0, 4)))
        b = {i: rng.randint(-9, 9) for i in degree.box()}
        w = multireal_from_beta(BetaInvariant.make(degree, b))
        forward = triangle_from_multireal(degree, w)
        backward = MultirealTriangle.from_beta(degree, b)
        assert forward.cells == backward.cells


def test_triangle_csv_rows():
    w = {(s,): v for s, v in enumerate([8, 6, 4, 2, 0])}
    tri = triangle_from_multireal((8,), w)
    rows = tri.csv_rows()
    assert rows[0] == ["0", 0, 1, 0, 0, 0]
    assert rows[-1] == ["4", 8]


def test_lambda_conversion_examples():
    lam2 = convert_basis(BetaInvariant.basis_element((6,), (2,), "lambda"), "beta")
    assert lam2.coeff_map == {(0,): WittClassQ.from_int(-3), (1,): TWO, (2,): WittClassQ.one()}
    v4 = BetaInvariant.make((11,), {(1,): 8, (2,): 2, (3,): 1})
    assert convert_basis(v4, "lambda").coeff_map == {(0,): -13, (1,): 13, (2,): -1, (3,): 1}
    assert convert_basis(v4, "chi").coeff_map == {(0,): -2, (1,): 2, (2,): -1, (3,): 1}


def test_lambda_closed_form_matches_symbolic():
    for n in range(1, 14):
        assert _symbolic_restriction_matrix("lambda", n) == mat_lambda_to_beta(n)


def test_symbolic_restriction_of_beta_is_identity():
    for n in range(1, 10):
        m = n // 2
        mat = _symbolic_restriction_matrix("beta", n)
        assert mat == [
            [WittClassQ.one() if i == k else WittClassQ.zero() for k in range(m + 1)]
            for i in range(m + 1)
        ]


def test_conversion_roundtrips():
    rng = random.Random(23)
    for n in range(1, 14):
        m = n // 2
        for basis in ("lambda", "alpha", "chi"):
            for _ in range(4):
                b = {(i,): rng.randint(-50, 50) for i in range(m + 1)}
                inv = BetaInvariant.make((n,), b)
                back = convert_basis(convert_basis(inv, basis), "beta")
                assert back.coeff_map == {i: v for i, v in b.items() if v}


def test_multivariable_conversion_roundtrip():
    rng = random.Random(24)
    for _ in range(20):
        degree = MultiDegree.of((rng.randint(1, 7), rng.randint(1, 4)))
        b = {i: rng.randint(-9, 9) for i in degree.box()}
        inv = BetaInvariant.make(degree, b)
        for basis in ("lambda", "alpha", "chi"):
            back = convert_basis(convert_basis(inv, basis), "beta")
            assert back.coeff_map == inv.coeff_map


def test_mode_demotion():
    inv = BetaInvariant.make((6,), {(0,): WittClassQ.from_int(5)}, mode="witt")
    assert inv.as_int_mode().coeff_map == {(0,): 5}
    bad = BetaInvariant.make((6,), {(0,): TWO}, mode="witt")
    with pytest.raises(ValueError):
        bad.as_int_mode()


def test_eval_examples():
    b1 = BetaInvariant.basis_element((11,), (1,))
    assert eval_invariant(b1, EtaleAlgebraSpec.multireal((11,), (2,))) == WittClassQ.from_int(6)
    b0 = BetaInvariant.basis_element((11,), (0,))
    assert eval_invariant(b0, EtaleAlgebraSpec.multiquadratic((11,), [[3, 5, -7, 2, 6]])) == WittClassQ.one()
    v4 = BetaInvariant.make((11,), {(1,): 8, (2,): 2, (3,): 1})
    vals = [
        eval_invariant(v4, EtaleAlgebraSpec.multireal((11,), (s,))).as_int()
        for s in range(6)
    ]
    assert vals == [240, 144, 80, 40, 16, 0]


def test_eval_degree_mismatch():
    b1 = BetaInvariant.basis_element((11,), (1,))
    with pytest.raises(Exception):
        eval_invariant(b1, EtaleAlgebraSpec.multireal((9,), (2,)))


def test_algebra_factor_validation():
    with pytest.raises(ValueError):
        AlgebraFactor.multiquadratic(11, [1, 2])  # needs 5 quadratic factors
    with pytest.raises(ValueError):
        AlgebraFactor.multireal(4, 3)


def test_cut_examples():
    c = cut(BetaInvariant.basis_element((6,), (2,)), (1,), "round")
    assert c.degree.n == (4,) and c.coeff_map == {(1,): 2, (2,): 1}
    assert cut(BetaInvariant.basis_element((6,), (0,)), (1,), "brace").coeff_map == {}
    assert cut(BetaInvariant.basis_element((6,), (2,)), (1,), "square").coeff_map == {(2,): 1}
    with pytest.raises(ValueError):
        cut(BetaInvariant.basis_element((2,), (0,)), (2,), "round")


def test_split_examples():
    sp = split(BetaInvariant.basis_element((4,), (1,)), 0)
    assert sp.degree.n == (2, 2) and sp.coeff_map == {(1, 0): 1, (0, 1): 1}
    assert split(BetaInvariant.basis_element((4,), (0,)), 0).coeff_map == {(0, 0): 1}
    with pytest.raises(ValueError):
        split(BetaInvariant.basis_element((1,), (0,)), 0)


def test_split_evaluation_identity():
    v4 = BetaInvariant.make((11,), {(1,): 8, (2,): 2, (3,): 1})
    sv4 = split(v4, 0)
    spec = EtaleAlgebraSpec(
        (AlgebraFactor.multireal(9, 2), AlgebraFactor.multiquadratic(2, [-1]))
    )
    assert eval_invariant(sv4, spec) == eval_invariant(
        v4, EtaleAlgebraSpec.multireal((11,), (3,))
    )


def test_split_cut_compatibility_random():
    rng = random.Random(25)
    deltas_pool = [1, -1, 2, -3, 5]
    for _ in range(60):
        n = rng.randint(2, 9)
        m = n // 2
        inv = BetaInvariant.make((n,), {(i,): rng.randint(-9, 9) for i in range(m + 1)})
        sp = split(inv, 0)
        new_n = n - 2
        deltas = [rng.choice(deltas_pool) for _ in range(new_n // 2)]
        a_factor = AlgebraFactor.multiquadratic(new_n, deltas)
        a_spec = EtaleAlgebraSpec((a_factor,))
        for delta, flavor in ((1, "round"), (-1, "square")):
            lhs = eval_invariant(
                sp, EtaleAlgebraSpec((a_factor, AlgebraFactor.multiquadratic(2, [delta])))
            )
            rhs = eval_invariant(cut(inv, (1,), flavor), a_spec)
            assert lhs == rhs, (n, delta, flavor)
        # the full relation: spl = square-cut + Tr(E) * brace-cut
        delta = rng.choice(deltas_pool)
        lhs = eval_invariant(
            sp, EtaleAlgebraSpec((a_factor, AlgebraFactor.multiquadratic(2, [delta])))
        )
        tr = TPoly.var(1, 1).eval_wittq([delta])
        rhs = eval_invariant(cut(inv, (1,), "square"), a_spec) + tr * eval_invariant(
            cut(inv, (1,), "brace"), a_spec
        )
        assert lhs == rhs


def test_cut_triangle_semantics():
    # round removes the left column, square the bottom diagonal, brace the top row
    rng = random.Random(26)
    for _ in range(40):
        n = rng.randint(4, 11)
        m = n // 2
        b = {(i,): rng.randint(-9, 9) for i in range(m + 1)}
        inv = BetaInvariant.make((n,), b)
        tri = MultirealTriangle.from_beta(inv.degree, b)
        assert cut(inv, (1,), "round").coeff_map == {
            (i,): tri.cell((1,), (i,))
            for i in range(m)
            if tri.cell((1,), (i,)) != 0
        }
        assert cut(inv, (1,), "brace").coeff_map == {
            (i,): b[(i + 1,)] for i in range(m) if b[(i + 1,)] != 0
        }


def test_ramified_primes():
    v = BetaInvariant.make(
        (6,),
        {(0,): WittClassQ.from_square_class(3) - WittClassQ.one(), (1,): WittClassQ.from_int(2)},
        mode="witt",
    )
    assert ramified_primes(v) == frozenset({3})
    ints = BetaInvariant.make((6,), {(0,): 4})
    assert ramified_primes(ints) == frozenset()
    half = BetaInvariant.make((6,), {(0,): WittClassQ.one() - TWO}, mode="witt")
    assert ramified_primes(half) == frozenset()


def test_torsion_check_random():
    rng = random.Random(27)
    pool = [3, 5, 7, 11, 13]
    for _ in range(100):
        degree = MultiDegree.of((rng.randint(1, 6),))
        coeffs = {}
        for i in degree.box():
            terms = WittClassQ.zero()
            for _ in range(rng.randint(0, 2)):
                a, b = rng.sample(pool, 2)
                terms = terms + WittClassQ.from_square_class(a) - WittClassQ.from_square_class(b)
            coeffs[i] = terms
        inv = BetaInvariant.make(degree, coeffs, mode="witt")
        assert torsion_check(inv) is True
        if any(not c.is_zero() for c in coeffs.values()):
            bumped = {i: c + WittClassQ.one() for i, c in coeffs.items()}
            assert torsion_check(BetaInvariant.make(degree, bumped, mode="witt")) is False


def test_restriction_symbolic():
    b2 = BetaInvariant.basis_element((5,), (2,))
    assert restrict_to_multiquadratic(b2) == TPoly.monomial((1, 2), 2)
    v4 = BetaInvariant.make((11,), {(1,): 8, (2,): 2, (3,): 1})
    poly = restrict_to_multiquadratic(v4)
    assert poly.eval_signs([1] * 5) == 240   # all points real
    assert poly.eval_signs([-1] * 5) == 0    # all points in conjugate pairs


def test_invariant_json_roundtrip():
    v4 = BetaInvariant.make((11,), {(1,): 8, (2,): 2, (3,): 1})
    assert BetaInvariant.from_json(v4.to_json()) == v4
    witt = convert_basis(v4, "lambda")
    w5 = BetaInvariant.make(
        (14,), {(1,): WittClassQ.from_int(-110) + TWO}, basis="lambda", mode="witt"
    )
    assert BetaInvariant.from_json(w5.to_json()) == w5
    assert BetaInvariant.from_json(witt.to_json()) == witt


def test_box_order_is_serialization_order():
    inv = BetaInvariant.make((5, 2), {(0, 0): 1, (2, 1): 3, (1, 0): 2})
    assert [term["idx"] for term in inv.to_json()["coeffs"]] == [[0, 0], [1, 0], [2, 1]]
