import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from cellres.arrangement import subdivide
from cellres.generators import (
    annulus,
    random_boundary_cocomplex,
    random_manifold,
    stacked_complex,
    subdivided_polygon,
)
from cellres.polytope import PolyhedralComplex, convex_hull
from cellres.simplicial import (
    IndexedComplex,
    NotAManifold,
    SimplicialComplex,
    barycentric_subdivision,
    boundary_complex,
    chain_complex,
    delete,
    is_homology_manifold,
    is_rimmed,
    link,
    prop_m_check,
    reduced_homology,
    relative_homology,
)

from complexes import HOLLOW_TETRAHEDRON, HOLLOW_TRIANGLE, RP2, SOLID_TRIANGLE, groups, oracle_homology


def K(faces):
    return SimplicialComplex(faces)


def test_closure_and_basics():
    T = K(SOLID_TRIANGLE)
    assert T.f_vector() == (3, 3, 1)
    assert T.maximal_faces() == [(0, 1, 2)]
    assert (0, 2) in T and () in T and (0, 3) not in T
    assert K([(2, 1)]).faces == K([(1, 2)]).faces


def test_homology_calibration():
    assert groups(reduced_homology(K(HOLLOW_TRIANGLE))) == {1: (1, ())}
    assert groups(reduced_homology(K(HOLLOW_TETRAHEDRON))) == {2: (1, ())}
    assert groups(reduced_homology(K(RP2))) == {1: (0, (2,))}
    assert reduced_homology(K(SOLID_TRIANGLE)).is_zero()
    assert reduced_homology(K([(0,), (1,)])).betti == {0: 1}
    assert groups(reduced_homology(K([]))) == {-1: (1, ())}


def test_rp2_is_a_closed_surface():
    edges = {}
    for f in RP2:
        for e in combinations(f, 2):
            edges[e] = edges.get(e, 0) + 1
    assert set(edges.values()) == {2} and len(edges) == 15


def test_relative_homology_examples():
    T = K(SOLID_TRIANGLE)
    assert relative_homology(T, T).is_zero()
    seg, ends = K([(0, 1)]), K([(0,), (1,)])
    assert groups(relative_homology(seg, ends)) == {1: (1, ())}
    with pytest.raises(ValueError):
        relative_homology(ends, seg)


random_complexes = st.lists(
    st.lists(st.integers(0, 6), min_size=1, max_size=4, unique=True), min_size=0, max_size=9
)


@given(random_complexes)
def test_homology_matches_oracle(tops):
    C = K(tops)
    assert groups(reduced_homology(C)) == oracle_homology(C.faces)


@given(random_complexes, st.data())
def test_relative_homology_matches_oracle(tops, data):
    C = K(tops)
    sub = data.draw(st.lists(st.sampled_from(sorted(C.faces)), max_size=4)) if C.faces else []
    L = K(sub)
    assert groups(relative_homology(C, L)) == oracle_homology(C.faces, L.faces)


@given(random_complexes)
def test_boundary_squares_to_zero_and_euler(tops):
    C = K(tops)
    cc = chain_complex(C)
    assert cc.is_complex()
    h = reduced_homology(C)
    f = C.f_vector()
    euler = sum((-1) ** q * n for q, n in enumerate(f))
    assert euler - 1 == sum((-1) ** q * h.betti.get(q, 0) for q in range(-1, C.dim + 1))


# -- barycentric subdivision, link, delete -------------------------------------


def test_barycentric_examples(worked):
    B = barycentric_subdivision(subdivide(worked))
    assert B.f_vector() == (5, 4)
    point = barycentric_subdivision(PolyhedralComplex([convex_hull([(1, 1)])]))
    assert point.f_vector() == (1,)
    tri = barycentric_subdivision(PolyhedralComplex([convex_hull([(0, 0), (1, 0), (0, 1)])]))
    assert tri.f_vector() == (7, 12, 6)
    assert reduced_homology(tri).is_zero()


def test_barycentric_coordinates_are_barycenters():
    C = subdivided_polygon(random.Random(3), 5, 2)
    B = barycentric_subdivision(C)
    for c in C.cells:
        assert B.coords[c.id] == c.barycenter
    flags = [(a, b, c) for c in range(len(C)) for b in C.below[c] for a in C.below[b]]
    assert sorted(f for f in B.faces if len(f) == 3) == sorted(flags)


def test_link_examples():
    seg = K([(0, 1), (1, 2)])
    assert link(seg, (1,)).faces == {(0,), (2,)}
    assert link(K([(0, 1)]), (0,)).faces == {(1,)}
    assert link(K(SOLID_TRIANGLE), (0, 1)).faces == {(2,)}
    with pytest.raises(ValueError):
        link(seg, (0, 2))


def test_delete_examples():
    seg = K([(0, 1)])
    assert delete(seg, [(0,)]).faces == {(1,)}
    T = K(SOLID_TRIANGLE)
    assert delete(T, [(0, 1, 2)]).faces == T.faces - {(0, 1, 2)}
    assert delete(T, []).faces == T.faces
    for f in delete(K(RP2), [(1,), (2, 3)]).faces:
        assert all(g in delete(K(RP2), [(1,), (2, 3)]) for g in combinations(f, len(f) - 1) if g)


def test_boundary_examples():
    assert boundary_complex(K([(0, 1), (1, 2)])).faces == {(0,), (2,)}
    assert boundary_complex(K(SOLID_TRIANGLE)).faces == K(HOLLOW_TRIANGLE).faces
    assert boundary_complex(K(HOLLOW_TRIANGLE)).faces == set()
    bowtie = K([(0, 1, 2), (0, 3, 4)])
    with pytest.raises(NotAManifold) as err:
        boundary_complex(bowtie)
    assert err.value.face == (0,)
    assert not is_homology_manifold(bowtie)


def test_rimmed_examples():
    T = K(SOLID_TRIANGLE)
    rep = is_rimmed(T)
    assert not rep.rimmed and rep.witness == (0, 1, 2)
    assert is_rimmed(K([(0, 1), (1, 2)])).rimmed
    B = barycentric_subdivision(subdivided_polygon(random.Random(8), 6, 3))
    assert is_rimmed(B).rimmed


def test_prop_m_examples():
    seg = K([(0, 1), (1, 2)])
    rep = prop_m_check(seg, [(0,)])
    assert rep.ok and rep.after.is_zero()
    tri = barycentric_subdivision(subdivided_polygon(random.Random(4), 3, 2))
    dM = boundary_complex(tri)
    rep = prop_m_check(tri, dM.faces)
    assert rep.ok and rep.after.is_zero()
    assert all(h.is_zero() for _, h in rep.steps)
    A = barycentric_subdivision(annulus())
    S = random_boundary_cocomplex(random.Random(2), boundary_complex(A), 0.2)
    rep = prop_m_check(A, S)
    assert rep.ok and groups(rep.after) == {1: (1, ())}


def test_prop_m_rejects_bad_input():
    seg = K([(0, 1), (1, 2)])
    assert "not a boundary face" in prop_m_check(seg, [(1,)]).failure
    tri = barycentric_subdivision(PolyhedralComplex([convex_hull([(0, 0), (2, 0), (0, 2)])]))
    dM = boundary_complex(tri)
    v = next(f for f in sorted(dM.faces) if len(f) == 1)
    assert "upward closed" in prop_m_check(tri, [v]).failure
    assert "not rimmed" in prop_m_check(K(SOLID_TRIANGLE), [(0, 1)]).failure
    assert "homology manifold" in prop_m_check(K([(0, 1, 2), (0, 3, 4)]), []).failure


# -- links and deletions on generated manifolds ---------------------------------------


def _manifolds(seed, count):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        kind, C = random_manifold(rng)
        out.append((kind, barycentric_subdivision(C)))
    return out, rng


def test_links_are_manifolds_of_right_dimension():
    ms, _ = _manifolds(21, 4)
    for _, M in ms:
        d = M.dim
        for f in sorted(M.faces):
            L = link(M, f)
            if not L.faces:
                continue
            assert L.is_pure() and L.dim == d - len(f)
            assert is_homology_manifold(L)


def test_links_of_boundary_faces_are_rimmed():
    ms, rng = _manifolds(22, 4)
    for _, M in ms:
        dM = boundary_complex(M)
        sample = rng.sample(sorted(dM.faces), min(25, len(dM.faces)))
        for sigma in sample:
            L = link(M, sigma)
            assert is_rimmed(L).rimmed
            assert boundary_complex(L).faces == {f for f in L.faces if f in dM.faces}


def test_deleting_boundary_faces_keeps_contractible_complexes_acyclic():
    rng = random.Random(23)
    for _ in range(8):
        kind, C = random_manifold(rng)
        M = barycentric_subdivision(C)
        dM = boundary_complex(M)
        S = random_boundary_cocomplex(rng, dM, rng.choice((0.05, 0.3, 1.0)))
        rep = prop_m_check(M, S, boundary=dM)
        assert rep.ok, rep.failure
        after = delete(M, S)
        assert groups(reduced_homology(after)) == groups(reduced_homology(M))
        if kind != "annulus":
            assert reduced_homology(after).is_zero()


def test_stacked_three_dimensional():
    M = barycentric_subdivision(stacked_complex(random.Random(5), 3, 2))
    assert M.dim == 3 and is_rimmed(M).rimmed
    assert reduced_homology(M).is_zero()
    assert groups(reduced_homology(boundary_complex(M))) == {2: (1, ())}


@given(random_complexes, st.data())
def test_indexed_complex_matches_oracle(tops, data):
    C = K(tops)
    X, index = IndexedComplex.of_faces(C.faces)
    assert groups(X.homology(range(len(index)))) == oracle_homology(C.faces)
    if C.faces:
        # induced subcomplexes, as the acyclicity check selects them
        keep = set(data.draw(st.lists(st.sampled_from(C.vertices), max_size=5)))
        sub = [f for f in C.faces if keep.issuperset(f)]
        got = X.homology([0] + [index[f] for f in sub])
        assert groups(got) == oracle_homology(sub)
        rational = X.homology([0] + [index[f] for f in sub], field=True)
        assert rational.betti == got.betti and not rational.torsion


def test_indexed_complex_keeps_torsion_and_relative():
    X, index = IndexedComplex.of_faces(K(RP2).faces)
    assert groups(X.homology(range(len(index)))) == {1: (0, (2,))}
    assert X.homology(range(len(index)), field=True).is_zero()
    seg = K([(0, 1)])
    R, idx = IndexedComplex.of_faces(seg.faces - {(0,), (1,)}, augmented=False)
    assert groups(R.homology(range(len(idx)))) == {1: (1, ())}
    # a non-unit coefficient is never cancelled over the integers
    Z2 = IndexedComplex([0, 1], [[], [(0, 2)]])
    assert groups(Z2.homology([0, 1])) == {0: (0, (2,))}
    assert Z2.homology([0, 1], field=True).is_zero()
