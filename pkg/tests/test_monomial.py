import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from cellres.arrangement import DivisorialData, subdivide
from cellres.generators import random_divisorial
from cellres.monomial import (
    ComplexError,
    LabeledComplex,
    ModuleComplex,
    MonomialModule,
    bs_acyclicity,
    divides,
    exactness_check,
    free_complex,
    label_complex,
    lcm,
    lcm_all,
    lcm_lattice,
    membership_vector,
    minimalize,
    module_of,
    principal,
    render_shape,
    restrict_leq,
    truncation_box,
)
from cellres.simplicial import SimplicialComplex

from complexes import brute_exact, oracle_homology

X, Y, XY = (1, 0), (0, 1), (1, 1)


def koszul():
    return ModuleComplex(
        [[MonomialModule([X, Y])], [principal(X), principal(Y)], [principal(XY)]],
        [{(0, 0): 1, (0, 1): 1}, {(0, 0): 1, (1, 0): -1}],
    )


# -- monomials and modules --------------------------------------------------------


def test_lcm_divides_examples():
    assert lcm((2, 0), (1, 1)) == (2, 1)
    assert divides((-1,), (0,))
    assert not divides((0,), (-1,))
    assert lcm((3, -2), (3, -2)) == (3, -2)
    with pytest.raises(ValueError):
        lcm((1,), (1, 2))


def test_minimalize_examples():
    M = minimalize([(2, 0), (1, 0), (1, 1), (0, 1), (0, 2), (0, 3)])
    assert set(M.generators) == {(1, 0), (0, 1)}
    assert minimalize([(4, -1)]).generators == ((4, -1),)
    assert set(minimalize([(1, 1), (2, 0)]).generators) == {(1, 1), (2, 0)}
    with pytest.raises(ValueError):
        minimalize([])


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=8))
def test_minimalize_invariants(gens):
    M = minimalize(gens)
    for a, b in itertools.permutations(M.generators, 2):
        assert not divides(a, b)
    for g in gens:
        assert g in M
        assert any(divides(m, g) for m in M.generators)
    assert minimalize(reversed(gens)).generators == M.generators


@given(st.lists(st.tuples(st.integers(-2, 3), st.integers(-2, 3)), min_size=1, max_size=5))
def test_lcm_lattice_closed(labels):
    lat = set(lcm_lattice(labels))
    assert set(map(tuple, labels)) <= lat
    for a, b in itertools.combinations(lat, 2):
        assert lcm(a, b) in lat
    for k in range(1, len(labels) + 1):
        for sub in itertools.combinations(labels, k):
            assert lcm_all(sub) in lat


# -- labels of the worked example ------------------------------------------------------


def test_worked_labels(worked):
    C = subdivide(worked)
    L = label_complex(C)
    by_bary = {c.barycenter: L.vertex_labels[c.id] for c in C.cells}
    assert by_bary[(F(3, 2), F(1, 2))] == (1, 1, 0, 2)
    assert by_bary[(1, 1)] == (1, 1, 1, 2)
    assert by_bary[(2, 0)] == (2, 2, 0, 3)
    assert by_bary[(0, 2)] == (0, 0, 2, 1)
    assert by_bary[(F(1, 2), F(3, 2))] == (0, 0, 1, 1)
    assert set(module_of(L).generators) == {(1, 1, 0, 2), (0, 0, 1, 1)}


def test_alpha_zero_single_vertex():
    D = DivisorialData([[1, 2], [3, 1]], [F(1, 2), F(-4, 3)], 0)
    L = label_complex(subdivide(D))
    assert list(L.vertex_labels.values()) == [(0, -2)]
    C = free_complex(L)
    assert C.shape() == [1, 1]
    assert exactness_check(C).ok


def test_restrict_leq_examples(worked):
    L = label_complex(subdivide(worked))
    top = lcm_all(L.vertex_labels.values())
    assert restrict_leq(L, top).faces == L.complex.faces
    assert restrict_leq(L, (-1, -1, -1, -1)).faces == set()
    R = restrict_leq(L, (1, 1, 0, 2))
    want = {v for v, m in L.vertex_labels.items() if divides(m, (1, 1, 0, 2))}
    assert set(R.vertices) == want
    assert all(divides(L.label(f), (1, 1, 0, 2)) for f in R.faces)


def test_bs_examples(worked):
    assert bs_acyclicity(label_complex(subdivide(worked))).ok
    single = LabeledComplex(SimplicialComplex([(0,)]), {0: (2, 1)})
    assert bs_acyclicity(single).ok
    two = LabeledComplex(SimplicialComplex([(0,), (1,)]), {0: X, 1: Y})
    rep = bs_acyclicity(two)
    assert not rep.ok and rep.witness == XY
    assert rep.homology.betti == {0: 1}


def test_free_complex_examples(worked):
    C = free_complex(label_complex(subdivide(worked)))
    assert render_shape(C) == "0 → ⊕₄ → ⊕₅ → M → 0"
    single = free_complex(LabeledComplex(SimplicialComplex([(0,)]), {0: (2, 1)}))
    assert single.shape() == [1, 1] and exactness_check(single).ok
    edge = free_complex(LabeledComplex(SimplicialComplex([(0, 1)]), {0: X, 1: Y}))
    assert edge.shape() == [1, 2, 1]
    assert edge.terms[2][0].generators == (XY,)
    assert exactness_check(edge).ok


def test_exactness_examples():
    assert exactness_check(koszul()).ok
    short = ModuleComplex([[MonomialModule([X, Y])], [principal(X), principal(Y)]], [{(0, 0): 1, (0, 1): 1}])
    rep = exactness_check(short)
    assert not rep.ok and rep.failure == (1, XY)


def test_exactness_rejects_bad_maps():
    bad = ModuleComplex([[principal(XY)], [principal(X)]], [{(0, 0): 1}])
    assert bad.illegal_entries() == [(0, 0, 0)]
    with pytest.raises(ComplexError):
        exactness_check(bad)
    nonzero = ModuleComplex(
        [[MonomialModule([X, Y])], [principal(X), principal(Y)], [principal(XY)]],
        [{(0, 0): 1, (0, 1): 1}, {(0, 0): 1, (1, 0): 1}],
    )
    assert nonzero.composition_failures()
    with pytest.raises(ComplexError):
        exactness_check(nonzero)


# -- lcm relations on random arrangement data ----------------------------------------


def _random_labeled(seed, count):
    rng = random.Random(seed)
    return [label_complex(subdivide(random_divisorial(rng, 3, 3, 2, 2))) for _ in range(count)]


def test_lcm_relations_on_random_data():
    for L in _random_labeled(31, 12):
        C = L.arrangement
        for q, faces in enumerate(C.below):
            for p in faces:
                diff = [a - b for a, b in zip(L.vertex_labels[p], L.vertex_labels[q])]
                assert all(x in (0, 1) for x in diff)
                assert MonomialModule([L.vertex_labels[q]]).contains_module(principal(L.vertex_labels[p]))
        for f in L.complex.faces:
            assert L.label(f) == lcm_all(L.vertex_labels[v] for v in f)
            assert all(principal(L.vertex_labels[v]).contains_module(principal(L.label(f))) for v in f)


def test_bs_and_exactness_agree_on_arrangements():
    for L in _random_labeled(32, 15):
        C = free_complex(L)
        assert bs_acyclicity(L).ok
        assert exactness_check(C).ok


# -- bs_acyclicity vs exactness on arbitrary labeled complexes ------------------------

labeled = st.integers(2, 5).flatmap(
    lambda nv: st.tuples(
        st.lists(st.lists(st.integers(0, nv - 1), min_size=1, max_size=3, unique=True), min_size=1, max_size=6),
        st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=nv, max_size=nv),
    )
)


def _rationally_acyclic(L):
    for m in lcm_lattice(L.vertex_labels.values()):
        R = restrict_leq(L, m)
        if R.faces and any(b for b, _ in oracle_homology(R.faces).values()):
            return False
    return True


@given(labeled)
def test_bs_criterion_matches_exactness(data):
    tops, labs = data
    K = SimplicialComplex(tops)
    L = LabeledComplex(K, {v: labs[v] for v in K.vertices})
    C = free_complex(L)
    ok = exactness_check(C).ok
    assert ok == _rationally_acyclic(L)
    if bs_acyclicity(L).ok:
        assert ok
    assert ok == brute_exact(C)


@given(labeled, st.data())
def test_truncation_box_soundness(data, draw):
    tops, labs = data
    K = SimplicialComplex(tops)
    C = free_complex(LabeledComplex(K, {v: labs[v] for v in K.vertices}))
    lo, hi = truncation_box(C)
    for _ in range(10):
        nu = tuple(draw.draw(st.integers(a - 4, b + 4)) for a, b in zip(lo, hi))
        clamped = tuple(min(x, b) for x, b in zip(nu, hi))
        assert membership_vector(C, nu) == membership_vector(C, clamped)
        if any(x < a for x, a in zip(nu, lo)):
            assert all(not m for m in membership_vector(C, nu))
