import random
from fractions import Fraction as F

import pytest

from cellres.arrangement import (
    DivisorialData,
    Level,
    all_shifts,
    relevant_hyperplanes,
    signature_at,
    subdivide,
    support,
    translate_refine,
)
from cellres.generators import random_divisorial
from cellres.polytope import HalfSpace, convex_hull


def random_point(rng, r, alpha):
    w = [F(rng.randint(0, 12)) for _ in range(r)]
    if not any(w):
        w[rng.randrange(r)] = F(1)
    s = sum(w)
    return tuple(alpha * x / s for x in w)


def interior_point(rng, P):
    w = [F(rng.randint(1, 9)) for _ in P.vertices]
    s = sum(w)
    return tuple(sum(wi * v[i] for wi, v in zip(w, P.vertices)) / s for i in range(P.ambient_dim))


def keys(hs):
    return {(h.normal, h.offset) for h in hs}


def test_relevant_hyperplanes_worked(worked):
    want = []
    for row, zs in [((1, 0), (0, 1, 2)), ((0, 1), (0, 1, 2)), ((2, 1), (1, 2, 3))]:
        bj = -1 if row == (2, 1) else 0
        want += [HalfSpace(row, z - bj, "eq") for z in zs]
    assert keys(relevant_hyperplanes(worked)) == keys(want)


def test_relevant_hyperplanes_small():
    D = DivisorialData([[1, 2]], [0], 1)
    assert keys(relevant_hyperplanes(D)) == keys([HalfSpace((1, 2), z, "eq") for z in (1, 2)])
    # r = 1: the simplex is a point, one touching level at most per row
    D1 = DivisorialData([[2], [3]], [F(1, 2), 0], 2)
    assert len(relevant_hyperplanes(D1)) == 1


def test_subdivide_worked(worked):
    C = subdivide(worked)
    assert C.count_by_dim() == {0: 3, 1: 2}
    verts = {c.polytope.vertices[0] for c in C.cells if c.dim == 0}
    assert verts == {(2, 0), (1, 1), (0, 2)}
    assert len(C.face_pairs()) == 4


def test_subdivide_zero_matrix():
    D = DivisorialData([[0, 0, 0], [0, 0, 0]], [F(1, 2), F(-1, 3)], 1)
    C = subdivide(D)
    assert C.count_by_dim() == {0: 3, 1: 3, 2: 1}
    assert len(C.maximal_cells()) == 1
    assert len(set(C.signatures)) == 1
    assert len(set(zip(C.signatures, C.supports))) == 7


def test_subdivide_levels_touching_endpoints():
    C = subdivide(DivisorialData([[1, 2]], [0], 1))
    assert C.count_by_dim() == {0: 2, 1: 1}


def test_signature_examples(worked):
    assert signature_at((F(3, 2), F(1, 2)), worked) == (
        Level(1, False), Level(1, False), Level(0, False), Level(2, False))
    assert signature_at((2, 0), worked) == (Level(2, True), Level(2, True), Level(0, True), Level(3, True))
    D = DivisorialData([[3, -1, 2], [0, 5, 1]], [4, -2], 3)
    assert all(l.exact for l in signature_at((1, 2, 0), D))
    with pytest.raises(ValueError):
        signature_at((1, 0), worked)


def test_translate_refine_examples(worked):
    base = subdivide(worked)
    same = translate_refine(worked, [(0, 0)])
    assert [c.polytope.vertices for c in same.cells] == [c.polytope.vertices for c in base.cells]
    fine = translate_refine(worked, all_shifts(2))
    for c in fine.cells:
        assert base.locate(c.barycenter) is not None
    D1 = DivisorialData([[1], [2]], [F(1, 3), 0], 2)
    assert len(translate_refine(D1, all_shifts(1))) == 1
    with pytest.raises(ValueError):
        translate_refine(worked, [(2, 0)])


def test_translate_refine_nonzero_shift_refines():
    D = DivisorialData([[1, 1, 0], [0, 2, 1]], [F(1, 2), F(-1, 3)], F(5, 2))
    base = subdivide(D)
    fine = translate_refine(D, all_shifts(3))
    assert len(fine) >= len(base)
    for c in fine.cells:
        owner = base.locate(c.barycenter)
        P = base.cells[owner].polytope
        assert all(P.contains(v) for v in c.polytope.vertices)


def _instances(seed, count):
    rng = random.Random(seed)
    return [random_divisorial(rng, max_r=3, max_n=3, max_entry=2, max_alpha=2) for _ in range(count)], rng


def test_cover_and_completeness():
    datas, rng = _instances(11, 6)
    for D in datas:
        C = subdivide(D)
        maximal = [c.polytope for c in C.maximal_cells()]
        stored = set(C.signatures)
        for _ in range(200):
            lam = random_point(rng, D.r, D.alpha)
            assert any(P.contains(lam) for P in maximal)
            assert signature_at(lam, D) in stored


def test_maximal_cells_meet_in_faces():
    datas, rng = _instances(12, 6)
    for D in datas:
        C = subdivide(D)
        by_verts = {frozenset(c.polytope.vertices): c for c in C.cells}
        maxs = C.maximal_cells()
        for i, a in enumerate(maxs):
            for b in maxs[i + 1 :]:
                common = frozenset(a.polytope.vertices) & frozenset(b.polytope.vertices)
                face = by_verts.get(common) if common else None
                if common:
                    assert face is not None
                    assert face.id in C.below[a.id] and face.id in C.below[b.id]
                for _ in range(30):
                    lam = random_point(rng, D.r, D.alpha)
                    if a.polytope.contains(lam) and b.polytope.contains(lam):
                        assert face is not None and face.polytope.contains(lam)


def test_signature_constant_on_cells():
    datas, rng = _instances(13, 8)
    for D in datas:
        C = subdivide(D)
        for c, sig in zip(C.cells, C.signatures):
            assert signature_at(c.barycenter, D) == sig
            for _ in range(5):
                assert signature_at(interior_point(rng, c.polytope), D) == sig
        # signature plus vanishing coordinates tells the cells apart
        assert len(set(zip(C.signatures, C.supports))) == len(C.cells)
        for c in C.cells:
            assert C.locate(interior_point(rng, c.polytope)) == c.id


def test_face_relation_lowers_dimension():
    datas, _ = _instances(14, 8)
    for D in datas:
        C = subdivide(D)
        for p, q in C.face_pairs():
            assert C.cells[p].dim < C.cells[q].dim
            assert set(C.cells[p].polytope.vertices) < set(C.cells[q].polytope.vertices)


def test_refinement_lies_in_unique_cell():
    datas, _ = _instances(15, 5)
    for D in datas:
        base = subdivide(D)
        fine = translate_refine(D, all_shifts(D.r))
        for c in fine.cells:
            owners = [b.id for b in base.cells if b.polytope.contains(c.barycenter)
                      and base.signatures[b.id] == signature_at(c.barycenter, D)
                      and base.supports[b.id] == support(c.barycenter)]
            assert owners == [base.locate(c.barycenter)]
            P = base.cells[owners[0]].polytope
            assert all(P.contains(v) for v in c.polytope.vertices)


def test_fully_covered_by_hull_of_vertices(worked):
    C = subdivide(worked)
    hull = convex_hull([v for c in C.cells for v in c.polytope.vertices])
    assert set(hull.vertices) == {(2, 0), (0, 2)}
