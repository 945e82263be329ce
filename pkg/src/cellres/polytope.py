"""Exact convex polytopes in V-representation with lazily computed facets.

A polytope may carry a list of valid constraints (any H-description of it,
redundancy allowed) together with a per-vertex bitmask of the constraints
that are tight there. Adjacency and faces are read off those masks, so
polytopes produced by :func:`split` never need a hull computation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Sequence

from .exact import affine_hull_dim, as_rational, dot, nullspace, pivot_columns, solve, sub, vec

Point = tuple  # tuple[Fraction, ...]

SENSES = ("le", "eq", "ge")


@dataclass(frozen=True)
class HalfSpace:
    """``normal . x  (<=|=|>=)  offset``."""

    normal: tuple
    offset: Fraction
    sense: str = "eq"

    def __post_init__(self):
        object.__setattr__(self, "normal", vec(self.normal))
        object.__setattr__(self, "offset", as_rational(self.offset))
        if self.sense not in SENSES:
            raise ValueError(f"unknown sense {self.sense!r}")
        if not any(self.normal):
            raise ValueError("half-space normal must be nonzero")

    def evaluate(self, x: Sequence) -> Fraction:
        return dot(self.normal, x) - self.offset

    def contains(self, x: Sequence) -> bool:
        v = self.evaluate(x)
        if self.sense == "eq":
            return v == 0
        return v <= 0 if self.sense == "le" else v >= 0

    def with_sense(self, sense: str) -> "HalfSpace":
        return HalfSpace(self.normal, self.offset, sense)


def _primitive(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    den = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(x).denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, (abs(x) for x in ints), 0) or 1
    return tuple(Fraction(x // g) for x in ints)


def extreme_rays(rows: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Extreme rays of the pointed cone ``{x : g.x >= 0 for g in rows}``.

    Double description method: start from a simplicial cone cut out by a
    maximal independent set of rows, then add the remaining rows one at a
    time, combining pairs of adjacent rays across each new hyperplane.
    Adjacency uses the combinatorial test on zero sets.
    """
    G = [_primitive([Fraction(x) for x in g]) for g in rows if any(g)]
    if not G:
        raise ValueError("cone has no constraints")
    m = len(G[0])
    basis_rows = []
    for i, g in enumerate(G):
        trial = [G[j] for j in basis_rows] + [g]
        if len(pivot_columns(trial)) == len(trial):
            basis_rows.append(i)
        if len(basis_rows) == m:
            break
    if len(basis_rows) < m:
        raise ValueError("cone is not pointed (constraint matrix lacks full column rank)")

    # columns of the inverse of the basis matrix are the initial rays
    B = [list(G[i]) for i in basis_rows]
    inv_cols = []
    for k in range(m):
        e = [Fraction(int(i == k)) for i in range(m)]
        x = solve(B, e)
        inv_cols.append(_primitive(x))
    processed = list(basis_rows)
    rays = []
    for k, r in enumerate(inv_cols):
        zero = 0
        for pos, i in enumerate(processed):
            if pos != k:
                zero |= 1 << i
        rays.append((r, zero))

    for i, g in enumerate(G):
        if i in basis_rows:
            continue
        vals = [dot(g, r) for r, _ in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        bit = 1 << i
        new = [rays[k] for k in pos] + [(rays[k][0], rays[k][1] | bit) for k in zer]
        need = m - 2
        for p in pos:
            rp, zp = rays[p]
            for n in neg:
                rn, zn = rays[n]
                common = zp & zn
                if bin(common).count("1") < need:
                    continue
                adjacent = True
                for k, (_, zk) in enumerate(rays):
                    if k != p and k != n and (zk & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vn = vals[p], vals[n]
                ray = _primitive([vp * b - vn * a for a, b in zip(rp, rn)])
                new.append((ray, common | bit))
        rays = new
        processed.append(i)
    return sorted(r for r, _ in rays)


def _independent_coordinates(points: Sequence[Point]) -> list[int]:
    p0 = points[0]
    diffs = [sub(p, p0) for p in points[1:]]
    return pivot_columns(diffs) if diffs else []


class Polytope:
    """Bounded convex polytope; vertices are kept lexicographically sorted."""

    __slots__ = ("vertices", "_constraints", "_masks", "__dict__")

    def __init__(self, vertices: Iterable[Sequence], constraints=None, masks=None):
        pts = [vec(v) for v in vertices]
        if not pts:
            raise ValueError("a polytope needs at least one vertex")
        dim0 = len(pts[0])
        if any(len(p) != dim0 for p in pts):
            raise ValueError("vertices have mixed dimensions")
        if masks is not None:
            order = sorted(range(len(pts)), key=lambda i: pts[i])
            pts = [pts[i] for i in order]
            masks = tuple(masks[i] for i in order)
        else:
            pts = sorted(set(pts))
        self.vertices: tuple[Point, ...] = tuple(pts)
        self._constraints = tuple(constraints) if constraints is not None else None
        self._masks = masks

    # -- identity -----------------------------------------------------------
    @property
    def key(self) -> tuple:
        return self.vertices

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        from .exact import format_rational

        vs = ", ".join("(" + ",".join(format_rational(x) for x in v) + ")" for v in self.vertices)
        return f"Polytope[{vs}]"

    # -- basic geometry -----------------------------------------------------
    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @cached_property
    def dim(self) -> int:
        return affine_hull_dim(self.vertices)

    @cached_property
    def barycenter(self) -> Point:
        k = len(self.vertices)
        return tuple(sum(c) / k for c in zip(*self.vertices))

    @cached_property
    def equations(self) -> tuple[HalfSpace, ...]:
        """Equalities cutting out the affine span."""
        p0 = self.vertices[0]
        diffs = [sub(p, p0) for p in self.vertices[1:]]
        normals = nullspace(diffs, self.ambient_dim) if diffs else nullspace([], self.ambient_dim)
        return tuple(HalfSpace(_primitive(n), dot(_primitive(n), p0), "eq") for n in normals)

    @cached_property
    def facets(self) -> tuple[HalfSpace, ...]:
        """Facet inequalities (sense ``ge``) within the affine span."""
        k = self.dim
        if k == 0:
            return ()
        coords = _independent_coordinates(self.vertices)
        proj = [tuple(v[c] for c in coords) for v in self.vertices]
        rows = [p + (Fraction(-1),) for p in proj]
        out = []
        for ray in extreme_rays(rows):
            a, c = ray[:-1], ray[-1]
            if not any(a):
                continue
            normal = [Fraction(0)] * self.ambient_dim
            for ci, ai in zip(coords, a):
                normal[ci] = ai
            out.append(HalfSpace(tuple(normal), c, "ge"))
        return tuple(out)

    # -- constraint bookkeeping ---------------------------------------------
    @property
    def constraints(self) -> tuple[HalfSpace, ...]:
        if self._constraints is None:
            self._constraints = self.equations + self.facets
        return self._constraints

    @property
    def masks(self) -> tuple[int, ...]:
        if self._masks is None:
            cons = self.constraints
            self._masks = tuple(
                sum(1 << i for i, h in enumerate(cons) if h.evaluate(v) == 0)
                for v in self.vertices
            )
        return self._masks

    def contains(self, x: Sequence) -> bool:
        x = vec(x)
        return all(h.contains(x) for h in self.equations + self.facets)

    # -- combinatorics ------------------------------------------------------
    def edges(self) -> list[tuple[int, int]]:
        """Index pairs of adjacent vertices."""
        ms = self.masks
        n = len(ms)
        out = []
        for u in range(n):
            for w in range(u + 1, n):
                common = ms[u] & ms[w]
                if all((ms[x] & common) != common for x in range(n) if x != u and x != w):
                    out.append((u, w))
        return out

    def face_vertex_sets(self) -> list[frozenset[int]]:
        """All nonempty faces (including the polytope itself) as vertex index sets."""
        ms = self.masks
        n = len(ms)
        full = frozenset(range(n))
        nbits = max((m.bit_length() for m in ms), default=0)
        tight = set()
        for b in range(nbits):
            s = frozenset(i for i in range(n) if (ms[i] >> b) & 1)
            if s and s != full:
                tight.add(s)
        faces = {full} | tight
        frontier = set(tight)
        while frontier:
            nxt = set()
            for f in frontier:
                for t in tight:
                    g = f & t
                    if g and g not in faces:
                        nxt.add(g)
            faces |= nxt
            frontier = nxt
        # vertices are faces even when the closure above misses them (dim 0)
        for i in range(n):
            faces.add(frozenset([i]))
        return sorted(faces, key=lambda s: (len(s), sorted(s)))

    def face(self, indices: Iterable[int]) -> "Polytope":
        idx = sorted(indices)
        return Polytope(
            [self.vertices[i] for i in idx], self.constraints, [self.masks[i] for i in idx]
        )

    def faces(self) -> list["Polytope"]:
        return [self.face(s) for s in self.face_vertex_sets()]


def standard_simplex(r: int, alpha) -> Polytope:
    """``{lambda >= 0 : sum(lambda) = alpha}`` in R^r."""
    if r < 1:
        raise ValueError("simplex needs r >= 1")
    alpha = as_rational(alpha)
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if alpha == 0:
        pts = [tuple(Fraction(0) for _ in range(r))]
    else:
        pts = [tuple(alpha if i == j else Fraction(0) for j in range(r)) for i in range(r)]
    cons = [HalfSpace(tuple(Fraction(1) for _ in range(r)), alpha, "eq")]
    cons += [HalfSpace(tuple(Fraction(int(i == j)) for j in range(r)), 0, "ge") for i in range(r)]
    poly = Polytope(pts, cons)
    return poly


def convex_hull(points: Iterable[Sequence]) -> Polytope:
    pts = sorted(set(vec(p) for p in points))
    if not pts:
        raise ValueError("convex hull of an empty set")
    if len({len(p) for p in pts}) != 1:
        raise ValueError("points have mixed dimensions")
    if len(pts) == 1:
        return Polytope(pts)
    full = Polytope(pts)
    ms = full.masks
    keep = [
        i
        for i in range(len(pts))
        if all((ms[j] & ms[i]) != ms[i] for j in range(len(pts)) if j != i)
    ]
    return Polytope(
        [pts[i] for i in keep], full.constraints, [ms[i] for i in keep]
    )


def split(P: Polytope, H: HalfSpace):
    """Cut ``P`` by the hyperplane of ``H``; returns ``(below, on, above)``.

    ``below``/``above`` are the closed sides and are reported only when they
    have the full dimension of ``P``; ``on`` is ``P`` intersected with the
    hyperplane when nonempty. When the hyperplane only touches ``P`` the
    touched face comes back as ``on`` with ``P`` on its side; when ``P`` lies
    inside the hyperplane it comes back as ``on`` alone.
    """
    if len(H.normal) != P.ambient_dim:
        raise ValueError("hyperplane and polytope live in different dimensions")
    hyper = H.with_sense("eq")
    vals = [hyper.evaluate(v) for v in P.vertices]
    cons = P.constraints
    bit = 1 << len(cons)
    masks = P.masks
    neg = [i for i, v in enumerate(vals) if v < 0]
    pos = [i for i, v in enumerate(vals) if v > 0]
    zer = [i for i, v in enumerate(vals) if v == 0]

    def build(idx, extra_pts, extra_masks, sense):
        pts = [P.vertices[i] for i in idx] + extra_pts
        ms = [masks[i] | (bit if vals[i] == 0 else 0) for i in idx] + extra_masks
        return Polytope(pts, cons + (hyper.with_sense(sense),), ms)

    if not neg and not pos:
        return None, P, None
    if not neg or not pos:
        on = build(zer, [], [], "eq") if zer else None
        side = build(range(len(vals)), [], [], "le" if not pos else "ge")
        return (side, on, None) if not pos else (None, on, side)

    cross_pts, cross_masks = [], []
    n = len(vals)
    for u in neg:
        for w in pos:
            common = masks[u] & masks[w]
            if any((masks[x] & common) == common for x in range(n) if x != u and x != w):
                continue
            t = -vals[u] / (vals[w] - vals[u])
            pu, pw = P.vertices[u], P.vertices[w]
            cross_pts.append(tuple(a + t * (b - a) for a, b in zip(pu, pw)))
            cross_masks.append(common | bit)
    below = build(neg + zer, cross_pts, cross_masks, "le")
    above = build(pos + zer, cross_pts, cross_masks, "ge")
    on = build(zer, cross_pts, cross_masks, "eq")
    return below, on, above


def relative_interior_point(P: Polytope) -> Point:
    return P.barycenter


# ---------------------------------------------------------------------------
# Polyhedral complexes assembled from maximal cells


@dataclass(frozen=True)
class Cell:
    id: int
    polytope: Polytope
    dim: int
    barycenter: Point


class PolyhedralComplex:
    """All faces of a family of maximal polytopes that meet face to face.

    Cells are sorted by ``(dim, vertex key)`` and ``below[q]`` lists the ids of
    the proper faces of cell ``q``.
    """

    def __init__(self, maximal: Sequence[Polytope]):
        vid: dict[Point, int] = {}
        found: dict[frozenset, tuple[Polytope, tuple[int, ...]]] = {}
        rel: dict[frozenset, set] = {}
        for P in maximal:
            gids = [vid.setdefault(v, len(vid)) for v in P.vertices]
            subsets = P.face_vertex_sets()
            keys = [frozenset(gids[i] for i in s) for s in subsets]
            for s, k in zip(subsets, keys):
                if k not in found:
                    found[k] = (P.face(s), None)
                    rel[k] = set()
            for k in keys:
                below = rel[k]
                for k2 in keys:
                    if k2 < k:
                        below.add(k2)
        order = sorted(found, key=lambda k: (found[k][0].dim, found[k][0].key))
        index = {k: i for i, k in enumerate(order)}
        self.cells: tuple[Cell, ...] = tuple(
            Cell(i, found[k][0], found[k][0].dim, found[k][0].barycenter)
            for i, k in enumerate(order)
        )
        self.below: tuple[frozenset[int], ...] = tuple(
            frozenset(index[g] for g in rel[k]) for k in order
        )
        above = [set() for _ in order]
        for q, faces in enumerate(self.below):
            for p in faces:
                above[p].add(q)
        self.above: tuple[frozenset[int], ...] = tuple(frozenset(a) for a in above)

    def __len__(self):
        return len(self.cells)

    @property
    def dim(self) -> int:
        return max(c.dim for c in self.cells)

    def face_pairs(self) -> list[tuple[int, int]]:
        """``(p, q)`` with ``p`` a proper face of ``q``."""
        return sorted((p, q) for q, faces in enumerate(self.below) for p in faces)

    def maximal_cells(self) -> list[Cell]:
        return [c for c in self.cells if not self.above[c.id]]

    def count_by_dim(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.cells:
            out[c.dim] = out.get(c.dim, 0) + 1
        return out
