"""Finite simplicial complexes and their integral homology.

Faces are sorted tuples of integer vertex ids; the empty face is implicit and
plays the role of the degree -1 cell in reduced homology. A complex with no
vertices is therefore the complex ``{()}`` whose only reduced homology is
``H_{-1} = Z`` (the (-1)-sphere), which is what the link of a maximal face is.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import invariant_factors, solve

Face = tuple  # sorted tuple of ints


def _faces_of(simplex: Face) -> Iterable[Face]:
    for k in range(1, len(simplex) + 1):
        yield from itertools.combinations(simplex, k)


class SimplicialComplex:
    """Downward-closed set of nonempty faces, optionally with vertex coordinates."""

    def __init__(
        self,
        faces: Iterable[Sequence[int]],
        coords: Mapping[int, tuple] | None = None,
        closed: bool = False,
    ):
        tops = {tuple(sorted(set(int(v) for v in f))) for f in faces}
        tops.discard(())
        if closed:
            self.faces: frozenset[Face] = frozenset(tops)
        else:
            allf = set()
            for f in sorted(tops, key=len, reverse=True):
                if f in allf:
                    continue
                allf.update(_faces_of(f))
            self.faces = frozenset(allf)
        self.coords = dict(coords) if coords is not None else None
        if self.coords is not None:
            self.coords = {v: self.coords[v] for v in self.vertices}
        self._star = None

    @classmethod
    def _raw(cls, faces: frozenset, coords) -> "SimplicialComplex":
        K = cls.__new__(cls)
        K.faces = faces
        K.coords = None if coords is None else {v: coords[v] for f in faces if len(f) == 1 for v in f}
        K._star = None
        return K

    # -- basics --------------------------------------------------------------
    def __contains__(self, face) -> bool:
        f = tuple(sorted(face))
        return f == () or f in self.faces

    def __len__(self):
        return len(self.faces)

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.faces == other.faces

    def __hash__(self):
        return hash(self.faces)

    def __repr__(self):
        return f"SimplicialComplex(f={self.f_vector()})"

    @property
    def vertices(self) -> list[int]:
        return sorted(f[0] for f in self.faces if len(f) == 1)

    @property
    def dim(self) -> int:
        return max((len(f) - 1 for f in self.faces), default=-1)

    def faces_of_dim(self, q: int) -> list[Face]:
        if q == -1:
            return [()]
        return sorted(f for f in self.faces if len(f) == q + 1)

    def f_vector(self) -> tuple[int, ...]:
        out = [0] * (self.dim + 1)
        for f in self.faces:
            out[len(f) - 1] += 1
        return tuple(out)

    def maximal_faces(self) -> list[Face]:
        star = self.star_index()
        out = []
        for f in self.faces:
            if not any(len(g) > len(f) and set(f) <= set(g) for g in star[f[0]]):
                out.append(f)
        return sorted(out, key=lambda f: (len(f), f))

    def is_pure(self) -> bool:
        d = self.dim
        return all(len(f) == d + 1 for f in self.maximal_faces())

    def star_index(self) -> dict[int, list[Face]]:
        """Vertex -> faces containing it."""
        if self._star is None:
            star: dict[int, list[Face]] = {}
            for f in self.faces:
                for v in f:
                    star.setdefault(v, []).append(f)
            self._star = star
        return self._star

    def cofaces(self, sigma: Face) -> list[Face]:
        """Faces containing ``sigma`` (including itself); all faces for ``()``."""
        sigma = tuple(sorted(sigma))
        if not sigma:
            return list(self.faces)
        s = set(sigma)
        return [f for f in self.star_index().get(sigma[0], ()) if s <= set(f)]

    def induced(self, vertices: Iterable[int]) -> "SimplicialComplex":
        keep = set(vertices)
        return SimplicialComplex._raw(
            frozenset(f for f in self.faces if keep.issuperset(f)), self.coords
        )

    def subcomplex(self, faces: Iterable[Face]) -> "SimplicialComplex":
        """Subcomplex given by a downward-closed subset of this complex's faces."""
        fs = frozenset(tuple(sorted(f)) for f in faces) - {()}
        missing = fs - self.faces
        if missing:
            raise ValueError(f"{min(missing)} is not a face of the complex")
        return SimplicialComplex._raw(fs, self.coords)


# ---------------------------------------------------------------------------
# Chain complexes and homology


@dataclass
class ChainComplex:
    """Free chain complex with a basis per degree and sparse boundary columns.

    ``boundary[q][j]`` is ``{i: coeff}``: basis element ``j`` of degree ``q``
    maps to ``sum coeff * (basis element i of degree q-1)``.
    """

    bases: dict[int, list]
    boundary: dict[int, list[dict[int, int]]]

    def rank(self, q: int) -> int:
        return len(self.bases.get(q, ()))

    @property
    def degrees(self) -> list[int]:
        return sorted(q for q, b in self.bases.items() if b)

    def matrix(self, q: int) -> list[list[int]]:
        """Dense boundary matrix from degree ``q`` to ``q-1`` (rows = degree q-1)."""
        rows, cols = self.rank(q - 1), self.rank(q)
        M = [[0] * cols for _ in range(rows)]
        for j, col in enumerate(self.boundary.get(q, ())):
            for i, c in col.items():
                M[i][j] = c
        return M

    def is_complex(self) -> bool:
        """``d o d == 0`` in every degree."""
        for q in self.degrees:
            lower = self.boundary.get(q - 1)
            if lower is None:
                continue
            for col in self.boundary.get(q, ()):
                acc: dict[int, int] = {}
                for i, c in col.items():
                    for k, e in lower[i].items():
                        acc[k] = acc.get(k, 0) + c * e
                if any(acc.values()):
                    return False
        return True


@dataclass(frozen=True)
class HomologyResult:
    """Betti numbers and torsion coefficients per degree (only nonzero groups stored)."""

    betti: dict = field(default_factory=dict)
    torsion: dict = field(default_factory=dict)
    low: int = -1
    high: int = -1

    def group(self, q: int) -> tuple[int, tuple[int, ...]]:
        return self.betti.get(q, 0), tuple(self.torsion.get(q, ()))

    def is_zero(self) -> bool:
        return not any(self.betti.values()) and not any(self.torsion.values())

    def same_groups(self, other: "HomologyResult") -> bool:
        qs = set(self.betti) | set(other.betti) | set(self.torsion) | set(other.torsion)
        return all(self.group(q) == other.group(q) for q in qs)

    def __eq__(self, other):
        return isinstance(other, HomologyResult) and self.same_groups(other)

    def __hash__(self):
        return hash(tuple(sorted((q, self.group(q)) for q in set(self.betti) | set(self.torsion))))

    def betti_numbers(self) -> tuple[int, ...]:
        return tuple(self.betti.get(q, 0) for q in range(self.low, self.high + 1))

    def describe(self, q: int) -> str:
        b, t = self.group(q)
        parts = ["Z" if b == 1 else f"Z^{b}"] if b else []
        parts += [f"Z/{k}" for k in t]
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return ", ".join(f"H{q}={self.describe(q)}" for q in range(self.low, self.high + 1))


def _reduce(cells: dict, bd: dict, cob: dict) -> None:
    """Cancel pairs joined by a unit boundary coefficient, in place.

    Each cancellation is an elementary change of basis, so homology (with
    torsion) is preserved. Faces with few cofaces go first; free faces are
    plain collapses and produce no fill-in.
    """
    while _reduce_pass(cells, bd, cob):
        pass


def _reduce_pass(cells: dict, bd: dict, cob: dict) -> bool:
    heap = [(len(cob[t]), t) for t in cells if cob[t]]
    heapq.heapify(heap)
    progress = False
    while heap:
        n, tau = heapq.heappop(heap)
        if tau not in cells:
            continue
        if n != len(cob[tau]):
            if cob[tau]:
                heapq.heappush(heap, (len(cob[tau]), tau))
            continue
        best = None
        for s in cob[tau]:
            e = bd[s][tau]
            if e in (1, -1) and (best is None or len(bd[s]) < len(bd[best])):
                best = s
        if best is None:
            continue
        sigma = best
        progress = True
        e = bd[sigma][tau]
        col_s = bd[sigma]
        for rho in list(cob[tau]):
            if rho == sigma:
                continue
            col = bd[rho]
            f = col[tau] * e
            for k, v in col_s.items():
                nv = col.get(k, 0) - f * v
                if nv:
                    if k not in col:
                        cob[k].add(rho)
                    col[k] = nv
                else:
                    col.pop(k, None)
                    cob[k].discard(rho)
        for k in col_s:
            cob[k].discard(sigma)
        for k in bd[tau]:
            cob[k].discard(tau)
        for rho in cob[sigma]:
            del bd[rho][sigma]
        for rho in cob[tau]:
            bd[rho].pop(tau, None)
        for c in (tau, sigma):
            del cells[c]
            del bd[c]
            del cob[c]
        for k in col_s:
            if k in cells and cob[k]:
                heapq.heappush(heap, (len(cob[k]), k))
    return progress


def homology(C: ChainComplex) -> HomologyResult:
    cells = {}
    bd: dict = {}
    cob: dict = {}
    for q, basis in C.bases.items():
        for j in range(len(basis)):
            cells[(q, j)] = q
            bd[(q, j)] = {}
            cob[(q, j)] = set()
    for q, cols in C.boundary.items():
        for j, col in enumerate(cols):
            for i, c in col.items():
                if c:
                    bd[(q, j)][(q - 1, i)] = c
                    cob[(q - 1, i)].add((q, j))
    _reduce(cells, bd, cob)
    by_deg: dict[int, list] = {}
    for c, q in cells.items():
        by_deg.setdefault(q, []).append(c)
    factors = {}
    for q, cs in by_deg.items():
        lower = by_deg.get(q - 1)
        if not lower:
            factors[q] = ()
            continue
        idx = {c: i for i, c in enumerate(lower)}
        M = [[0] * len(cs) for _ in lower]
        for j, c in enumerate(cs):
            for k, v in bd[c].items():
                M[idx[k]][j] = v
        factors[q] = invariant_factors(M)
    betti, torsion = {}, {}
    for q, cs in by_deg.items():
        b = len(cs) - len(factors.get(q, ())) - len(factors.get(q + 1, ()))
        if b:
            betti[q] = b
        t = tuple(x for x in factors.get(q + 1, ()) if x > 1)
        if t:
            torsion[q] = t
    degs = C.degrees
    return HomologyResult(betti, torsion, min(degs, default=-1), max(degs, default=-1))


class IndexedComplex:
    """A based chain complex on integer ids, for the homology of many subsets.

    ``degree[i]`` is the degree of basis element ``i`` and ``boundary[i]`` its
    boundary as ``((j, coeff), ...)``. :meth:`homology` restricts to a subset
    of ids, drops boundary terms leaving the subset, cancels free pairs (an
    element with a single remaining coface) and hands what is left to the
    Smith form.
    """

    def __init__(self, degree: Sequence[int], boundary: Sequence[Sequence[tuple[int, int]]]):
        self.degree = list(degree)
        self.boundary = [tuple((j, c) for j, c in col if c) for col in boundary]
        cob: list[list[int]] = [[] for _ in self.degree]
        for i, col in enumerate(self.boundary):
            for j, _ in col:
                cob[j].append(i)
        self.cofacets = [tuple(c) for c in cob]
        self.units = all(c in (1, -1) for col in self.boundary for _, c in col)

    @classmethod
    def of_faces(cls, faces: Iterable[Face], augmented: bool = True) -> tuple["IndexedComplex", dict]:
        """Simplicial chains on ``faces`` (plus the empty face when augmented); also returns face -> id."""
        order = sorted(set(faces), key=lambda f: (len(f), f))
        if augmented:
            order = [f for f in order if f]
            order.insert(0, ())
        index = {f: i for i, f in enumerate(order)}
        boundary = []
        for f in order:
            col = []
            if f or not augmented:
                for p in range(len(f)):
                    j = index.get(f[:p] + f[p + 1 :])
                    if j is not None:
                        col.append((j, -1 if p % 2 else 1))
            boundary.append(col)
        return cls([len(f) - 1 for f in order], boundary), index

    def collapse(self, members: Iterable[int], field: bool = False) -> list[int]:
        """Cancel free pairs inside ``members``; returns the surviving ids.

        A pair ``(i, j)`` with ``j`` the only remaining coface of ``i`` and a
        unit coefficient (any nonzero one when ``field``) is an elementary
        change of basis that only deletes rows and columns, so the homology of
        the survivors equals that of ``members``.
        """
        n = len(self.degree)
        alive = bytearray(n)
        ids = list(members)
        for i in ids:
            alive[i] = 1
        cob, bd = self.cofacets, self.boundary
        look = alive.__getitem__
        count = [0] * n
        stack = []
        for i in ids:
            c = sum(map(look, cob[i]))
            count[i] = c
            if c == 1:
                stack.append(i)
        check_units = not (field or self.units)
        while stack:
            i = stack.pop()
            if not alive[i] or count[i] != 1:
                continue
            for j in cob[i]:
                if alive[j]:
                    break
            if check_units and dict(bd[j])[i] not in (1, -1):
                continue
            alive[i] = alive[j] = 0
            for k, _ in bd[j]:
                if alive[k]:
                    count[k] -= 1
                    if count[k] == 1:
                        stack.append(k)
            for k, _ in bd[i]:
                if alive[k]:
                    count[k] -= 1
                    if count[k] == 1:
                        stack.append(k)
        return [i for i in ids if alive[i]]

    def homology(self, members: Iterable[int], field: bool = False) -> HomologyResult:
        """Integral homology of the subcomplex spanned by ``members`` (rational Betti numbers only when ``field``)."""
        members = list(members)
        degs = [self.degree[i] for i in members]
        low, high = min(degs, default=-1), max(degs, default=-1)
        rest = self.collapse(members, field)
        if not rest:
            return HomologyResult({}, {}, low, high)
        by_deg: dict[int, list[int]] = {}
        for i in rest:
            by_deg.setdefault(self.degree[i], []).append(i)
        pos = {i: k for q, ids in by_deg.items() for k, i in enumerate(ids)}
        boundary = {}
        for q, ids in by_deg.items():
            if q - 1 in by_deg:
                boundary[q] = [
                    {pos[j]: c for j, c in self.boundary[i] if j in pos and self.degree[j] == q - 1}
                    for i in ids
                ]
        h = homology(ChainComplex({q: list(ids) for q, ids in by_deg.items()}, boundary))
        if field:
            return HomologyResult(dict(h.betti), {}, low, high)
        return HomologyResult(dict(h.betti), dict(h.torsion), low, high)


def _boundary_columns(basis: list[Face], lower_index: Mapping[Face, int]) -> list[dict[int, int]]:
    cols = []
    for f in basis:
        col = {}
        for p in range(len(f)):
            g = f[:p] + f[p + 1 :]
            i = lower_index.get(g)
            if i is not None:
                col[i] = -1 if p % 2 else 1
        cols.append(col)
    return cols


def chain_complex_of(faces: Iterable[Face], augmented: bool) -> ChainComplex:
    """Simplicial chains on a set of faces; boundary terms outside the set are dropped."""
    by_deg: dict[int, list[Face]] = {}
    for f in faces:
        by_deg.setdefault(len(f) - 1, []).append(f)
    if augmented:
        by_deg[-1] = [()]
    bases = {q: sorted(fs) for q, fs in by_deg.items()}
    boundary = {}
    for q, basis in bases.items():
        if q - 1 in bases:
            idx = {g: i for i, g in enumerate(bases[q - 1])}
            boundary[q] = _boundary_columns(basis, idx)
    return ChainComplex(bases, boundary)


def chain_complex(K: SimplicialComplex, L: SimplicialComplex | None = None) -> ChainComplex:
    """Augmented chains of ``K``, or relative chains ``C(K, L)`` when ``L`` is given."""
    if L is None:
        return chain_complex_of(K.faces, augmented=True)
    if not L.faces <= K.faces:
        raise ValueError("L is not a subcomplex of K")
    return chain_complex_of(K.faces - L.faces, augmented=False)


def reduced_homology(K: SimplicialComplex) -> HomologyResult:
    return homology(chain_complex(K))


def relative_homology(K: SimplicialComplex, L: SimplicialComplex) -> HomologyResult:
    return homology(chain_complex(K, L))


# ---------------------------------------------------------------------------
# Barycentric subdivision, links, deletion


def barycentric_subdivision(C) -> SimplicialComplex:
    """Order complex of the face poset of a polyhedral complex.

    Vertex ids are the cell ids of ``C`` and carry the cell barycenters as
    coordinates. Cell ids are sorted by dimension, so a chain sorted by id is
    sorted by the face order and its first entry is its smallest cell.
    """
    chains: dict[int, list[Face]] = {}
    for cell in sorted(C.cells, key=lambda c: c.dim):
        q = cell.id
        out = [(q,)]
        for p in C.below[q]:
            out.extend(ch + (q,) for ch in chains[p])
        chains[q] = out
    faces = frozenset(ch for q in chains for ch in chains[q])
    coords = {c.id: c.barycenter for c in C.cells}
    K = SimplicialComplex._raw(faces, coords)
    return K


def link(K: SimplicialComplex, sigma: Sequence[int]) -> SimplicialComplex:
    sigma = tuple(sorted(sigma))
    if sigma not in K:
        raise ValueError(f"{sigma} is not a face of the complex")
    s = set(sigma)
    faces = set()
    for f in K.cofaces(sigma):
        t = tuple(v for v in f if v not in s)
        if t:
            faces.add(t)
    return SimplicialComplex._raw(frozenset(faces), K.coords)


def delete(K: SimplicialComplex, S: Iterable[Sequence[int]]) -> SimplicialComplex:
    """Remove every face containing a member of ``S``."""
    gone = set()
    for sigma in S:
        sigma = tuple(sorted(sigma))
        if not sigma:
            return SimplicialComplex._raw(frozenset(), K.coords)
        if sigma in K.faces:
            gone.update(K.cofaces(sigma))
    return SimplicialComplex._raw(K.faces - gone, K.coords)


def is_ball_homology(h: HomologyResult) -> bool:
    return h.is_zero()


def is_sphere_homology(h: HomologyResult, k: int) -> bool:
    qs = set(h.betti) | set(h.torsion)
    return qs == {k} and h.group(k) == (1, ())


class NotAManifold(ValueError):
    """A link with neither ball nor sphere homology; ``face`` is the culprit."""

    def __init__(self, face, message):
        super().__init__(message)
        self.face = face


def _classify_links(M: SimplicialComplex) -> dict[Face, str]:
    if not M.faces:
        return {}
    d = M.dim
    if not M.is_pure():
        raise NotAManifold(None, f"complex is not pure of dimension {d}")
    kinds = {}
    for f in sorted(M.faces):
        h = reduced_homology(link(M, f))
        k = d - (len(f) - 1) - 1
        if is_ball_homology(h):
            kinds[f] = "ball"
        elif is_sphere_homology(h, k):
            kinds[f] = "sphere"
        else:
            raise NotAManifold(f, f"link of {f} has homology {h}, neither a ball nor a {k}-sphere")
    return kinds


def boundary_complex(M: SimplicialComplex) -> SimplicialComplex:
    """Faces whose link has the homology of a ball."""
    kinds = _classify_links(M)
    return SimplicialComplex._raw(frozenset(f for f, k in kinds.items() if k == "ball"), M.coords)


def is_homology_manifold(M: SimplicialComplex) -> bool:
    try:
        _classify_links(M)
    except NotAManifold:
        return False
    return True


# ---------------------------------------------------------------------------
# Rimmed complexes


def _in_simplex(point, verts) -> bool:
    """Exact test of ``point`` in the convex hull of affinely independent ``verts``."""
    m = len(point)
    rows = [[Fraction(v[i]) for v in verts] for i in range(m)] + [[Fraction(1)] * len(verts)]
    w = solve(rows, list(point) + [Fraction(1)])
    if w is None or any(x < 0 for x in w):
        return False
    return all(
        sum(wi * Fraction(v[i]) for wi, v in zip(w, verts)) == point[i] for i in range(m)
    )


@dataclass(frozen=True)
class RimmedReport:
    rimmed: bool
    witness: Face | None = None
    reason: str = ""

    def __bool__(self):
        return self.rimmed


def is_rimmed(M: SimplicialComplex, boundary: SimplicialComplex | None = None) -> RimmedReport:
    """Check that each face meets the boundary in the face spanned by its boundary vertices.

    The combinatorial test is that this span is itself a boundary face. When
    vertices carry coordinates, the barycenter of the span must also lie in
    the realization of the boundary, and the two answers must agree.
    """
    dM = boundary_complex(M) if boundary is None else boundary
    bverts = set(dM.vertices)
    geometric = M.coords is not None and bool(dM.faces)
    bmax = dM.maximal_faces() if geometric else []
    bstar: dict[int, list[Face]] = {}
    for f in bmax:
        for v in f:
            bstar.setdefault(v, []).append(f)
    seen: dict[Face, bool] = {}
    for sigma in sorted(M.faces, key=lambda f: (len(f), f)):
        tau = tuple(v for v in sigma if v in bverts)
        if not tau:
            continue
        if tau in seen:
            ok = seen[tau]
        else:
            ok = tau in dM.faces
            if geometric:
                k = len(tau)
                bary = tuple(sum(Fraction(M.coords[v][i]) for v in tau) / k for i in range(len(M.coords[tau[0]])))
                cands = {f for v in tau for f in bstar.get(v, ())}
                cands = sorted(cands, key=lambda f: (-len(set(f) & set(tau)), f))
                geo = any(_in_simplex(bary, [M.coords[v] for v in f]) for f in cands)
                if geo != ok:
                    raise ValueError(
                        f"combinatorial and geometric boundary tests disagree on {tau}"
                    )
            seen[tau] = ok
        if not ok:
            return RimmedReport(False, sigma, f"boundary vertices {tau} of {sigma} do not span a boundary face")
    return RimmedReport(True)


# ---------------------------------------------------------------------------
# Deleting boundary simplices


@dataclass
class PropMReport:
    ok: bool
    before: HomologyResult | None = None
    after: HomologyResult | None = None
    steps: list = field(default_factory=list)  # (deleted face, relative homology)
    failure: str = ""

    def __bool__(self):
        return self.ok


def _relative_step(faces: set, sigma: Face, star: dict) -> tuple[HomologyResult, list[Face]]:
    s = set(sigma)
    removed = [f for f in star.get(sigma[0], ()) if f in faces and s <= set(f)]
    return homology(chain_complex_of(removed, augmented=False)), removed


def prop_m_check(
    M: SimplicialComplex,
    S: Iterable[Sequence[int]],
    boundary: SimplicialComplex | None = None,
    check_rimmed: bool = True,
) -> PropMReport:
    """Delete a boundary cocomplex one face at a time, largest faces first.

    Every step must remove a relatively acyclic piece, and the reduced
    homology of the result must equal that of ``M``.
    """
    S = sorted({tuple(sorted(s)) for s in S}, key=lambda f: (-len(f), f))
    try:
        dM = boundary_complex(M) if boundary is None else boundary
    except NotAManifold as exc:
        return PropMReport(False, failure=f"not a homology manifold with boundary: {exc}")
    if check_rimmed:
        rim = is_rimmed(M, dM)
        if not rim:
            return PropMReport(False, failure=f"not rimmed: {rim.reason}")
    bad = [s for s in S if s not in dM.faces]
    if bad:
        return PropMReport(False, failure=f"{bad[0]} is not a boundary face")
    Sset = set(S)
    for s in S:
        for f in dM.cofaces(s):
            if f not in Sset:
                return PropMReport(False, failure=f"S is not upward closed in the boundary: {f} contains {s}")

    before = reduced_homology(M)
    faces = set(M.faces)
    star = M.star_index()
    steps = []
    for sigma in S:
        if sigma not in faces:
            continue
        h, removed = _relative_step(faces, sigma, star)
        steps.append((sigma, h))
        if not h.is_zero():
            return PropMReport(False, before, None, steps, f"relative homology {h} when deleting {sigma}")
        faces.difference_update(removed)
    after = reduced_homology(SimplicialComplex._raw(frozenset(faces), M.coords))
    ok = before.same_groups(after)
    return PropMReport(ok, before, after, steps, "" if ok else f"homology changed: {before} vs {after}")
