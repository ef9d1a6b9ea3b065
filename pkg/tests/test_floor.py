import itertools
import random

import pytest

from welwitt.floor import (
    MarkedDiagram,
    beta_extract,
    classical_count,
    enumerate_all_marked,
    enumerate_marked,
    max_pairs,
    normalize_class,
    quad_invariant,
    welschinger_via_fd,
)
from welwitt.floor.diagrams import InternalConsistencyError
from welwitt.tring import TPoly

from oracles import oracle_marked_class_count

ALL_SMALL_CLASSES = [
    (1, 0, 0, 0),
    (2, 0, 0, 0), (2, 1, 0, 0), (2, 1, 1, 0), (2, 1, 1, 1),
    (3, 0, 0, 0), (3, 1, 0, 0), (3, 1, 1, 0), (3, 1, 1, 1),
    (3, 2, 0, 0), (3, 2, 1, 0), (3, 2, 1, 1),
]

D4_CLASSES = ALL_SMALL_CLASSES + [
    (4, 0, 0, 0), (4, 1, 0, 0), (4, 1, 1, 0), (4, 1, 1, 1),
    (4, 2, 0, 0), (4, 2, 1, 0), (4, 2, 1, 1), (4, 2, 2, 0),
    (4, 2, 2, 1), (4, 2, 2, 2), (4, 3, 0, 0), (4, 3, 1, 0), (4, 3, 1, 1),
]


def test_normalize_class():
    assert normalize_class((4, 0, 0, 0)) == (4, 0, 0, 0)
    assert normalize_class((7, 3, 4, 0)) == (7, 4, 3, 0)
    with pytest.raises(ValueError, match="outside floor-diagram domain"):
        normalize_class((3, 2, 2, 0))
    with pytest.raises(ValueError, match="outside floor-diagram domain"):
        normalize_class((2, 2, 0, 0))
    with pytest.raises(ValueError):
        normalize_class((3, -1, 0, 0))


def test_single_line_diagram():
    classes = enumerate_all_marked((1, 0, 0, 0), 0)
    assert len(classes) == 1
    diagram, mult = classes[0]
    assert len(diagram.vertices) == 1
    assert len(diagram.sources) == 1 and not diagram.sinks and not diagram.edges
    assert mult == TPoly.one(0)


def test_degree_three_counts():
    classes = enumerate_all_marked((3, 0, 0, 0), 0)
    assert len(classes) == 9
    essential = [d for d, m in classes if m is not None]
    assert len(essential) == 8
    (non_essential,) = [d for d, m in classes if m is None]
    assert any(w == 2 for _, _, _, w in non_essential.edges)


def test_every_diagram_validates():
    for klass in ALL_SMALL_CLASSES:
        for s in range(max_pairs(klass) + 1):
            for diagram, _ in enumerate_all_marked(klass, s):
                diagram.validate()  # raises on any defect


def test_enumeration_is_sorted_and_stable():
    a = enumerate_all_marked((3, 1, 0, 0), 2)
    b = enumerate_all_marked((3, 1, 0, 0), 2)
    assert [d.encoding() for d, _ in a] == [d.encoding() for d, _ in b]
    encs = [d.encoding() for d, _ in a]
    assert encs == sorted(encs)


def test_dedup_against_bruteforce_oracle():
    for klass in ALL_SMALL_CLASSES:
        for s in range(max_pairs(klass) + 1):
            got = len(enumerate_all_marked(klass, s))
            want = oracle_marked_class_count(klass, s)
            assert got == want, (klass, s, got, want)


def test_marking_bounds():
    with pytest.raises(ValueError):
        enumerate_all_marked((2, 0, 0, 0), 3)


def _automorphism_count(diagram: MarkedDiagram) -> int:
    """Brute force |Aut|: subsets of pair labels whose swap preserves everything."""
    fibers = diagram.fibers()
    pair_labels = [ph for ph in fibers if len(fibers[ph]) == 2]
    count = 0
    for swap_set in itertools.chain.from_iterable(
        itertools.combinations(pair_labels, k) for k in range(len(pair_labels) + 1)
    ):
        mapping = {}
        ok = True
        for ph, elems in fibers.items():
            if ph in swap_set:
                a, b = elems
                if a[0] != b[0]:
                    ok = False
                    break
                mapping[a], mapping[b] = b, a
            else:
                for e in elems:
                    mapping[e] = e
        if not ok:
            continue

        def vmap(v):
            return mapping[("v", v)][1]

        for i, (ph, th) in enumerate(diagram.vertices):
            j = mapping[("v", i)][1]
            if diagram.vertices[j][1] != th:
                ok = False
        edge_set = {(u, t, w) for _, u, t, w in diagram.edges}
        for _, u, t, w in diagram.edges:
            if (vmap(u), vmap(t), w) not in edge_set:
                ok = False
        # edges must map to their fiber mates consistently
        for i, (ph, u, t, w) in enumerate(diagram.edges):
            img = mapping[("e", i)]
            pu, pt, pw = diagram.edges[img[1]][1:]
            if (vmap(u), vmap(t), w) != (pu, pt, pw):
                ok = False
        for i, (ph, u) in enumerate(diagram.sources):
            img = mapping[("src", i)]
            if diagram.sources[img[1]][1] != vmap(u):
                ok = False
        for i, (ph, u) in enumerate(diagram.sinks):
            img = mapping[("snk", i)]
            if diagram.sinks[img[1]][1] != vmap(u):
                ok = False
        if ok:
            count += 1
    return count


def test_twin_trees_realize_automorphism_group():
    for klass in [(3, 0, 0, 0), (3, 2, 1, 0), (4, 2, 2, 0), (4, 0, 0, 0)]:
        m = max_pairs(klass)
        for s in {m, m - 1} & set(range(m + 1)):
            for diagram, _ in enumerate_all_marked(klass, s):
                part = diagram.partition_marking()
                assert part.automorphism_order == _automorphism_count(diagram), diagram


def test_partition_types():
    # all fibers singletons: empty partition
    diagram = enumerate_all_marked((3, 0, 0, 0), 0)[0][0]
    part = diagram.partition_marking()
    assert part.vertex_edge == () and part.free == () and part.twins == ()
    # two sources at one vertex: a size-one twin with even parity
    (only,) = enumerate_all_marked((2, 0, 0, 0), 2)
    diagram = only[0]
    part = diagram.partition_marking()
    assert len(part.twins) == 1
    (tree,) = part.twins
    assert tree.labels == {1} and tree.omega_infinity == 2
    assert tree.tree_factor(2) == TPoly.one(2)
    assert len(part.vertex_edge) == 1


def test_vertex_edge_pair_weight():
    # spec example: a fiber {vertex, adjacent edge} indexes the edge's weight
    for diagram, mult in enumerate_all_marked((3, 0, 0, 0), 4):
        part = diagram.partition_marking()
        for ph in part.vertex_edge:
            elems = diagram.fibers()[ph]
            kinds = {e[0] for e in elems}
            assert "v" in kinds and (kinds & {"e", "src", "snk"})


def test_multiplicity_examples():
    # weight-3 edge paired with something gives the bracket factor 1 + u
    res = quad_invariant((3, 0, 0, 0), 4)
    assert res.value.is_symmetric()
    assert beta_extract(res).coeff_map == {(1,): 1}
    assert welschinger_via_fd((3, 0, 0, 0), 4) == 0


def test_quad_values_match_spec():
    assert [welschinger_via_fd((4, 0, 0, 0), s) for s in range(6)] == [
        240, 144, 80, 40, 16, 0,
    ]
    assert beta_extract(quad_invariant((2, 0, 0, 0), 2)).coeff_map == {(0,): 1}


def test_across_s_specialization():
    for klass in ALL_SMALL_CLASSES:
        m = max_pairs(klass)
        for s in range(m):
            low = quad_invariant(klass, s).value
            high = quad_invariant(klass, s + 1).value.substitute_one(s + 1)
            assert low == high, (klass, s)


def test_beta_integrality_d4():
    for klass in D4_CLASSES:
        inv = beta_extract(quad_invariant(klass, max_pairs(klass)))
        assert inv.mode == "int"


def _check_tree_identity(tree, s):
    """The closed form of the twin-tree factor, checked at all sign vectors."""
    labels = sorted(tree.labels)
    if len(labels) > 3:
        return
    lhs_poly = tree.tree_factor(s)
    for j, w in tree.edge_fibers:
        b = TPoly.bracket(w, j, s)
        lhs_poly = lhs_poly * b * b
    rhs_poly = TPoly.one(s)
    for j, w in tree.edge_fibers:
        rhs_poly = rhs_poly * TPoly.bracket(w * w, j, s)
    for signs_t in itertools.product((1, -1), repeat=len(labels)):
        signs = [-1] * s
        delta = {}
        for j, sg in zip(labels, signs_t):
            signs[j - 1] = sg
            delta[j] = sg
        lhs = lhs_poly.eval_signs(signs)
        acc = 0
        for k in range(len(labels) + 1):
            if k % 2 != tree.omega_infinity % 2:
                continue
            for subset in itertools.combinations(labels, k):
                prod = 1
                for j in subset:
                    prod *= delta[j]
                acc += prod
        # the <2^(|T|+1)> factor has signature one and drops out
        rhs = rhs_poly.eval_signs(signs) * acc
        assert lhs == rhs, (tree, signs_t, lhs, rhs)


def test_twin_tree_closed_form_small():
    seen = 0
    for klass in ALL_SMALL_CLASSES:
        for s in range(max_pairs(klass) + 1):
            for diagram, mult in enumerate_all_marked(klass, s):
                if mult is None:
                    continue
                for tree in diagram.partition_marking().twins:
                    _check_tree_identity(tree, s)
                    seen += 1
    assert seen > 50


def test_ledger_sums_to_value():
    res = quad_invariant((4, 0, 0, 0), 5)
    total = TPoly.zero(5)
    for _, mult in res.ledger:
        total = total + mult
    assert total == res.value


def test_classical_counts():
    assert classical_count((1, 0, 0, 0)) == 1
    assert classical_count((3, 0, 0, 0)) == 12
    assert classical_count((3, 2, 0, 0)) == 1


def test_cache_cold_warm(tmp_path):
    klass, s = (3, 1, 0, 0), 2
    cold = quad_invariant(klass, s, cache_dir=tmp_path)
    files = list(tmp_path.glob("fd-*.jsonl"))
    assert len(files) == 1
    warm = quad_invariant(klass, s, cache_dir=tmp_path)
    assert cold.value == warm.value
    assert [d.encoding() for d, _ in cold.ledger] == [d.encoding() for d, _ in warm.ledger]
    # a stale generator version is ignored
    text = files[0].read_text().splitlines()
    header = text[0].replace('"fd-engine-1"', '"fd-engine-0"')
    files[0].write_text("\n".join([header] + text[1:]) + "\n")
    again = quad_invariant(klass, s, cache_dir=tmp_path)
    assert again.value == cold.value


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("WW_CACHE_DIR", str(tmp_path))
    welschinger_via_fd((2, 1, 0, 0), 1)
    assert list(tmp_path.glob("fd-*.jsonl"))


def test_parallel_jobs_identical():
    seq = quad_invariant((4, 0, 0, 0), 5, jobs=1)
    par = quad_invariant((4, 0, 0, 0), 5, jobs=2)
    assert seq.value == par.value
    assert [d.encoding() for d, _ in seq.ledger] == [d.encoding() for d, _ in par.ledger]


def test_symmetric_extraction_guard():
    res = quad_invariant((3, 0, 0, 0), 4)
    broken = type(res)(res.klass, res.s, res.value + TPoly.var(1, 4), res.ledger)
    with pytest.raises(InternalConsistencyError, match="asymmetric"):
        beta_extract(broken)
    with pytest.raises(ValueError, match="maximal marking"):
        beta_extract(quad_invariant((3, 0, 0, 0), 2))
