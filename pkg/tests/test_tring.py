import random

import pytest

from welwitt.tring import HalvingError, TPoly
from welwitt.wittring import DiagonalForm, WittClassQ, diag_to_wittq


def random_tpoly(rng, num_vars, max_coeff=9):
    data = {}
    for mask in range(1 << num_vars):
        if rng.random() < 0.5:
            data[mask] = rng.randint(-max_coeff, max_coeff)
    return TPoly(num_vars, tuple(sorted((m, c) for m, c in data.items() if c)))


def test_generator_relations():
    t = TPoly.var(1, 2)
    u = TPoly.uvar(1, 2)
    assert t * t == t.scale(2)
    assert u * u == u.scale(2)
    assert (t * u).is_zero()
    assert (t + u).halve() == TPoly.one(2)


def test_halve_error():
    with pytest.raises(HalvingError, match="not divisible"):
        (TPoly.var(1, 1) + TPoly.one(1)).halve()


def test_bracket():
    one = TPoly.one(1)
    u = TPoly.uvar(1, 1)
    assert TPoly.bracket(3, 1, 1) == one + u
    assert TPoly.bracket(4, 1, 1) == u.scale(2)
    for w1 in range(6):
        for w2 in range(6):
            assert TPoly.bracket(w1, 1, 1) * TPoly.bracket(w2, 1, 1) == TPoly.bracket(
                w1 * w2, 1, 1
            )


def test_ring_laws_random():
    rng = random.Random(10)
    for _ in range(200):
        nv = rng.randint(0, 3)
        a, b, c = (random_tpoly(rng, nv) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_eval_signs_examples():
    assert (TPoly.var(1, 1) - TPoly.one(1)).eval_signs([-1]) == -1
    assert (TPoly.var(1, 2) * TPoly.var(2, 2)).eval_signs([1, 1]) == 4
    b3 = TPoly.bracket(3, 1, 1)
    assert b3.eval_signs([-1]) == 3
    assert b3.eval_signs([1]) == 1
    with pytest.raises(ValueError):
        TPoly.one(2).eval_signs([1])


def test_eval_signs_is_ring_hom():
    rng = random.Random(11)
    for _ in range(200):
        nv = rng.randint(1, 3)
        a, b = random_tpoly(rng, nv), random_tpoly(rng, nv)
        signs = [rng.choice([1, -1]) for _ in range(nv)]
        assert (a + b).eval_signs(signs) == a.eval_signs(signs) + b.eval_signs(signs)
        assert (a * b).eval_signs(signs) == a.eval_signs(signs) * b.eval_signs(signs)


def test_eval_wittq_examples():
    assert TPoly.var(1, 1).eval_wittq([3]) == diag_to_wittq(DiagonalForm.of([2, 6]))
    assert TPoly.var(1, 1).eval_wittq([-1]).is_zero()
    assert TPoly.one(1).eval_wittq([7]) == WittClassQ.one()


def test_eval_wittq_is_ring_hom():
    rng = random.Random(12)
    deltas_pool = [1, -1, 2, 3, 5, -6]
    for _ in range(60):
        nv = rng.randint(1, 2)
        a, b = random_tpoly(rng, nv, 3), random_tpoly(rng, nv, 3)
        deltas = [rng.choice(deltas_pool) for _ in range(nv)]
        assert (a + b).eval_wittq(deltas) == a.eval_wittq(deltas) + b.eval_wittq(deltas)
        assert (a * b).eval_wittq(deltas) == a.eval_wittq(deltas) * b.eval_wittq(deltas)


def test_substitute_one():
    # setting the last sign to +1 sends t_j to 2
    rng = random.Random(13)
    for _ in range(100):
        nv = rng.randint(1, 3)
        a = random_tpoly(rng, nv)
        signs = [rng.choice([1, -1]) for _ in range(nv - 1)]
        assert a.substitute_one(nv).eval_signs(signs) == a.eval_signs(signs + [1])


def test_symmetry_and_extraction():
    e2 = TPoly.monomial((1, 2), 3) + TPoly.monomial((1, 3), 3) + TPoly.monomial((2, 3), 3)
    assert e2.is_symmetric()
    assert e2.symmetric_coefficients() == [0, 0, 1, 0]
    assert not (TPoly.var(1, 2)).is_symmetric()


def test_json_roundtrip():
    rng = random.Random(14)
    for _ in range(50):
        nv = rng.randint(0, 3)
        a = random_tpoly(rng, nv)
        assert TPoly.from_json(a.to_json(), nv) == a
