"""Random geometric complexes for exercising the simplicial machinery.

Everything is exact and driven by a caller-supplied ``random.Random``.
Barycentric subdivisions of these complexes are rimmed homology manifolds
with boundary, which is what the deletion harness needs.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .polytope import HalfSpace, PolyhedralComplex, Polytope, convex_hull, split
from .simplicial import SimplicialComplex


def _rand_weights(rng: random.Random, k: int) -> list[Fraction]:
    w = [Fraction(rng.randint(1, 6)) for _ in range(k)]
    s = sum(w)
    return [x / s for x in w]


def _cut_all(pieces: list[Polytope], cuts: Sequence[HalfSpace]) -> list[Polytope]:
    for H in cuts:
        nxt = []
        for P in pieces:
            below, _, above = split(P, H)
            if below is None and above is None:
                nxt.append(P)
            else:
                nxt.extend(x for x in (below, above) if x is not None)
        pieces = nxt
    return pieces


def _random_cut(rng: random.Random, P: Polytope) -> HalfSpace:
    d = P.ambient_dim
    while True:
        normal = [Fraction(rng.randint(-3, 3)) for _ in range(d)]
        if any(normal):
            break
    w = _rand_weights(rng, len(P.vertices))
    through = [sum(wi * v[i] for wi, v in zip(w, P.vertices)) for i in range(d)]
    return HalfSpace(normal, sum(a * x for a, x in zip(normal, through)), "eq")


def convex_polygon(rng: random.Random, nverts: int = 5) -> Polytope:
    """Polygon with vertices on the parabola ``y = x^2`` (always in convex position)."""
    xs = rng.sample(range(-6, 7), max(3, nverts))
    return convex_hull([(x, x * x) for x in xs])


def subdivided_polygon(rng: random.Random, nverts: int = 5, ncuts: int = 3) -> PolyhedralComplex:
    P = convex_polygon(rng, nverts)
    cuts = [_random_cut(rng, P) for _ in range(ncuts)]
    return PolyhedralComplex(_cut_all([P], cuts))


def subdivided_prism(rng: random.Random, ncuts: int = 2) -> PolyhedralComplex:
    """Triangle times a segment, cut by random planes."""
    pts = [(0, 0, 0), (4, 0, 0), (0, 4, 0), (0, 0, 3), (4, 0, 3), (0, 4, 3)]
    P = convex_hull(pts)
    cuts = [_random_cut(rng, P) for _ in range(ncuts)]
    return PolyhedralComplex(_cut_all([P], cuts))


def stacked_complex(rng: random.Random, dim: int = 2, steps: int = 3) -> PolyhedralComplex:
    """Stellar subdivisions of a ``dim``-simplex at random interior points."""
    base = [tuple(Fraction(0) for _ in range(dim))]
    base += [tuple(Fraction(6 * (i == j)) for j in range(dim)) for i in range(dim)]
    simplices = [tuple(base)]
    for _ in range(steps):
        k = rng.randrange(len(simplices))
        s = simplices.pop(k)
        w = _rand_weights(rng, len(s))
        c = tuple(sum(wi * v[i] for wi, v in zip(w, s)) for i in range(dim))
        for drop in range(len(s)):
            simplices.append(s[:drop] + (c,) + s[drop + 1 :])
    return PolyhedralComplex([Polytope(s) for s in simplices])


def annulus(rng: random.Random | None = None, ncuts: int = 0) -> PolyhedralComplex:
    """Square annulus made of four trapezoids, optionally cut further."""
    outer = [(-3, -3), (3, -3), (3, 3), (-3, 3)]
    inner = [(-1, -1), (1, -1), (1, 1), (-1, 1)]
    pieces = [convex_hull([outer[i], outer[(i + 1) % 4], inner[(i + 1) % 4], inner[i]]) for i in range(4)]
    if ncuts and rng is not None:
        hull = convex_hull(outer)
        pieces = _cut_all(pieces, [_random_cut(rng, hull) for _ in range(ncuts)])
    return PolyhedralComplex(pieces)


def random_boundary_cocomplex(
    rng: random.Random, boundary: SimplicialComplex, p: float = 0.2
) -> set[tuple]:
    """Upward closure, inside the boundary, of a random set of boundary faces."""
    faces = sorted(boundary.faces)
    if not faces:
        return set()
    seeds = [f for f in faces if rng.random() < p] or [rng.choice(faces)]
    out = set()
    for s in seeds:
        out.update(boundary.cofaces(s))
    return out


# ---------------------------------------------------------------------------
# Random algebraic inputs

ALPHAS = (Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2))


def random_ideal(rng: random.Random, max_vars: int = 3, max_gens: int = 4, max_exp: int = 5):
    from .multiplier import MonomialIdealInput

    d = rng.randint(1, max_vars)
    r = rng.randint(1, max_gens)
    gens = [tuple(rng.randint(0, max_exp) for _ in range(d)) for _ in range(r)]
    return MonomialIdealInput(d, gens)


def random_divisorial(
    rng: random.Random, max_r: int = 3, max_n: int = 4, max_entry: int = 3, max_alpha: int = 3
):
    """Integer ``A`` with entries in ``[-max_entry, max_entry]``, ``b`` with small
    denominators, ``alpha`` a half-integer in ``[0, max_alpha]``."""
    from .arrangement import DivisorialData

    r = rng.randint(1, max_r)
    n = rng.randint(1, max_n)
    A = [[rng.randint(-max_entry, max_entry) for _ in range(r)] for _ in range(n)]
    b = [Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3))) for _ in range(n)]
    alpha = Fraction(rng.randint(0, 2 * max_alpha), 2)
    return DivisorialData(A, b, alpha)


def random_principal_factors(rng: random.Random, r: int = 3, max_vars: int = 3, max_exp: int = 3):
    """Exponent vectors of ``r`` principal ideals and, half the time, an auxiliary factor."""
    d = rng.randint(1, max_vars)
    gens = [tuple(rng.randint(0, max_exp) for _ in range(d)) for _ in range(r)]
    aux = None
    if rng.random() < 0.5:
        aux = (tuple(rng.randint(0, 2) for _ in range(d)), Fraction(rng.randint(1, 5), rng.choice((1, 2, 3))))
    return gens, aux


MANIFOLD_KINDS = ("polygon", "stacked2", "stacked3", "prism", "annulus")


def random_manifold(rng: random.Random, kinds: Sequence[str] = MANIFOLD_KINDS) -> tuple[str, PolyhedralComplex]:
    """One of the geometric families above, with random parameters."""
    bad = set(kinds) - set(MANIFOLD_KINDS)
    if bad:
        raise ValueError(f"unknown complex families {sorted(bad)}")
    kind = rng.choice(tuple(kinds))
    if kind == "polygon":
        return kind, subdivided_polygon(rng, rng.randint(3, 6), rng.randint(0, 3))
    if kind == "stacked2":
        return kind, stacked_complex(rng, 2, rng.randint(0, 5))
    if kind == "stacked3":
        return kind, stacked_complex(rng, 3, rng.randint(0, 3))
    if kind == "prism":
        return kind, subdivided_prism(rng, rng.randint(0, 2))
    return kind, annulus(rng, rng.randint(0, 2))
