"""Multiplier ideals of monomial ideals, three ways, plus the Skoda complex.

For ``a = <x^g_1, ..., x^g_r>`` and weight ``alpha`` the three routes are

* cellular: floor labels of the arrangement subdivision of the simplex of
  weight ``alpha`` with ``A`` the matrix of exponent columns;
* hull floors: integer parts of the points of ``conv(alpha * G)``, found by
  one exact LP per candidate lattice box;
* interior: ``gamma`` with ``gamma + (1,...,1)`` in the interior of
  ``alpha * (conv G + orthant)``, read off the facet inequalities.

An optional auxiliary principal factor ``x^delta`` with weight ``beta``
enters the cellular route as the shift ``b = beta * delta``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .arrangement import DivisorialData, subdivide
from .exact import as_rational, floor_div
from .lp import OPTIMAL, maximize
from .monomial import (
    ModuleComplex,
    MonomialModule,
    label_complex,
    minimalize,
    module_of,
)
from .polytope import Polytope, convex_hull, extreme_rays


@dataclass(frozen=True)
class MonomialIdealInput:
    """Generators of a monomial ideal in ``nvars`` variables, plus optional ``(delta, beta)``."""

    nvars: int
    generators: tuple
    aux: tuple | None = None  # (delta, beta)

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        if not gens:
            raise ValueError("a monomial ideal needs r >= 1 generators")
        if any(len(g) != self.nvars for g in gens):
            raise ValueError(f"every generator must have {self.nvars} exponents")
        if any(x < 0 for g in gens for x in g):
            raise ValueError("generator exponents must be nonnegative")
        object.__setattr__(self, "generators", gens)
        if self.aux is not None:
            delta, beta = self.aux
            delta = tuple(int(x) for x in delta)
            beta = as_rational(beta)
            if len(delta) != self.nvars or any(x < 0 for x in delta):
                raise ValueError("aux delta must be a nonnegative vector of length nvars")
            if beta <= 0:
                raise ValueError("aux beta must be positive")
            object.__setattr__(self, "aux", (delta, beta))

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def shift(self) -> tuple[Fraction, ...]:
        """``beta * delta`` (zero without an auxiliary factor)."""
        if self.aux is None:
            return tuple(Fraction(0) for _ in range(self.nvars))
        delta, beta = self.aux
        return tuple(beta * x for x in delta)

    def without_aux(self) -> "MonomialIdealInput":
        return MonomialIdealInput(self.nvars, self.generators)


def divisorial_from_monomial(I: MonomialIdealInput, alpha) -> DivisorialData:
    """Rows are the coordinate divisors, columns the generators."""
    A = [[g[i] for g in I.generators] for i in range(I.nvars)]
    return DivisorialData(A, I.shift, as_rational(alpha))


def _check_alpha(alpha, allow_zero=False) -> Fraction:
    alpha = as_rational(alpha)
    if alpha < 0 or (alpha == 0 and not allow_zero):
        raise ValueError("alpha must be positive")
    return alpha


# ---------------------------------------------------------------------------
# cellular route


def multiplier_cellular(I: MonomialIdealInput, alpha, allow_zero: bool = False) -> MonomialModule:
    """Minimal generators among the floor labels of the subdivided simplex.

    ``allow_zero`` admits ``alpha = 0`` (the simplex is a point), which gives
    ``J(b^beta) = <x^floor(beta * delta)>``.
    """
    alpha = _check_alpha(alpha, allow_zero)
    D = divisorial_from_monomial(I, alpha)
    M = module_of(label_complex(subdivide(D)))
    if any(x < 0 for g in M.generators for x in g):
        raise AssertionError(f"multiplier ideal has a negative exponent: {M}")
    return M


# ---------------------------------------------------------------------------
# hull-floor route


def _box_hits(points: Sequence[Sequence[Fraction]], z: Sequence[int], shift: Sequence[Fraction]) -> bool:
    """Does ``conv(points) + shift`` meet the half-open box ``prod [z_i, z_i + 1)``?

    Variables are the convex weights and a slack ``eps``; maximize ``eps``
    subject to ``z <= nu`` and ``nu + eps <= z + 1``. A hit is a positive optimum.
    """
    k = len(points)
    d = len(z)
    A_ub, b_ub = [], []
    for i in range(d):
        row = [p[i] for p in points]
        A_ub.append([-x for x in row] + [0])
        b_ub.append(shift[i] - z[i])
        A_ub.append(row + [1])
        b_ub.append(z[i] + 1 - shift[i])
    A_ub.append([0] * k + [1])
    b_ub.append(1)
    res = maximize([0] * k + [1], A_ub, b_ub, [[1] * k + [0]], [1])
    return res.status == OPTIMAL and res.value > 0


def _scaled(I: MonomialIdealInput, alpha: Fraction) -> Polytope:
    return convex_hull({tuple(alpha * x for x in g) for g in I.generators})


def _box_excluded(P: Polytope, z: Sequence[int], shift) -> bool:
    """Some valid constraint of ``P + shift`` misses the closed box ``[z, z+1]`` entirely.

    A cheap sufficient test for an empty intersection; everything else goes to the LP.
    """
    for h in P.constraints:
        lo = hi = -h.offset
        for a, zi, s in zip(h.normal, z, shift):
            base = a * (zi - s)
            lo += base + (a if a < 0 else 0)
            hi += base + (a if a > 0 else 0)
        if h.sense == "eq" and (lo > 0 or hi < 0):
            return True
        if h.sense == "ge" and hi < 0:
            return True
        if h.sense == "le" and lo > 0:
            return True
    return False


def _floor_box(points, shift) -> list[range]:
    d = len(shift)
    return [
        range(
            floor_div(min(p[i] for p in points) + shift[i]),
            floor_div(max(p[i] for p in points) + shift[i]) + 1,
        )
        for i in range(d)
    ]


def hull_floors(I: MonomialIdealInput, alpha, shift: Sequence | None = None) -> list[tuple[int, ...]]:
    """Every lattice point ``floor(nu)`` for ``nu`` in ``conv(alpha * G) + shift``."""
    alpha = _check_alpha(alpha)
    shift = tuple(Fraction(0) for _ in range(I.nvars)) if shift is None else tuple(map(as_rational, shift))
    pts = _scaled(I, alpha).vertices
    return [z for z in itertools.product(*_floor_box(pts, shift)) if _box_hits(pts, z, shift)]


def _hullfloors(I: MonomialIdealInput, alpha: Fraction, shift) -> MonomialModule:
    P = _scaled(I, alpha)
    pts = P.vertices
    found: list[tuple[int, ...]] = []
    # increasing total degree: anything dominated by a floor already found
    # cannot be a minimal generator and is skipped
    cands = sorted(itertools.product(*_floor_box(pts, shift)), key=lambda z: (sum(z), z))
    for z in cands:
        if any(all(a <= b for a, b in zip(f, z)) for f in found):
            continue
        if not _box_excluded(P, z, shift) and _box_hits(pts, z, shift):
            found.append(z)
    return minimalize(found)


def multiplier_hullfloors(I: MonomialIdealInput, alpha) -> MonomialModule:
    if I.aux is not None:
        raise ValueError("the hull-floor route takes no auxiliary factor")
    alpha = _check_alpha(alpha)
    return _hullfloors(I, alpha, I.shift)


# ---------------------------------------------------------------------------
# interior (Newton polyhedron) route


@dataclass
class NewtonPolyhedron:
    """``alpha * (conv G + orthant)`` by its vertices and facet inequalities ``a.x >= c``."""

    hull: Polytope
    facets: list[tuple[tuple[Fraction, ...], Fraction]] = field(default_factory=list)

    @classmethod
    def of(cls, generators: Iterable[Sequence[int]], alpha=1, shift: Sequence | None = None) -> "NewtonPolyhedron":
        alpha = as_rational(alpha)
        pts = [tuple(alpha * Fraction(x) for x in g) for g in generators]
        d = len(pts[0])
        if shift is not None:
            pts = [tuple(x + as_rational(s) for x, s in zip(p, shift)) for p in pts]
        hull = convex_hull(pts)
        # homogenized cone {(a, c) : a.v - c >= 0 on vertices, a >= 0 on rays}
        rows = [tuple(v) + (Fraction(-1),) for v in hull.vertices]
        rows += [tuple(Fraction(int(i == j)) for j in range(d)) + (Fraction(0),) for i in range(d)]
        facets = []
        for ray in extreme_rays(rows):
            a, c = tuple(ray[:-1]), ray[-1]
            if any(a):
                facets.append((a, c))
        return cls(hull, sorted(facets))

    def in_interior(self, point: Sequence) -> bool:
        return all(sum(ai * x for ai, x in zip(a, point)) > c for a, c in self.facets)

    def contains(self, point: Sequence) -> bool:
        return all(sum(ai * x for ai, x in zip(a, point)) >= c for a, c in self.facets)


def _howald(I: MonomialIdealInput, alpha: Fraction, shift) -> MonomialModule:
    N = NewtonPolyhedron.of(I.generators, alpha, shift)
    d = I.nvars
    top = [math.ceil(alpha * max(g[i] for g in I.generators) + shift[i]) for i in range(d)]
    members = []
    for gamma in sorted(itertools.product(*[range(t + 1) for t in top]), key=lambda z: (sum(z), z)):
        if any(all(a <= b for a, b in zip(f, gamma)) for f in members):
            continue
        if N.in_interior([x + 1 for x in gamma]):
            members.append(gamma)
    return minimalize(members)


def multiplier_howald(I: MonomialIdealInput, alpha) -> MonomialModule:
    if I.aux is not None:
        raise ValueError("the interior route takes no auxiliary factor")
    alpha = _check_alpha(alpha)
    return _howald(I, alpha, I.shift)


ROUTES = ("cellular", "hull", "interior")


def multiplier(I: MonomialIdealInput, alpha, route: str = "cellular") -> MonomialModule:
    if route == "cellular":
        return multiplier_cellular(I, alpha)
    if route == "hull":
        return multiplier_hullfloors(I, alpha)
    if route == "interior":
        return multiplier_howald(I, alpha)
    raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")


# ---------------------------------------------------------------------------
# summation report


@dataclass
class SummationReport:
    ok: bool
    routes: dict
    all_cells: MonomialModule
    vertex_labels: MonomialModule
    maximal_cells: MonomialModule
    all_simplices: MonomialModule
    translated: bool = False
    problems: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def summation_report(I: MonomialIdealInput, alpha) -> SummationReport:
    """Cross-check the three routes and the sums over cells and simplices.

    With an auxiliary factor the hull and interior routes are run on the
    region translated by ``beta * delta`` (the factor only translates the
    arrangement); ``translated`` records this.
    """
    alpha = _check_alpha(alpha)
    D = divisorial_from_monomial(I, alpha)
    C = subdivide(D)
    L = label_complex(C)
    cellular = module_of(L)
    shift = I.shift
    routes = {
        "cellular": cellular,
        "hull": _hullfloors(I, alpha, shift),
        "interior": _howald(I, alpha, shift),
    }
    labels = C.labels()
    all_cells = minimalize(labels)
    vertices = minimalize(L.vertex_labels[v] for v in L.complex.vertices)
    maximal = minimalize(labels[c.id] for c in C.maximal_cells())
    simplices = minimalize(L.label(s) for s in L.complex.faces)
    problems = []
    for name, M in routes.items():
        if M != cellular:
            problems.append(f"route {name} gives {M}, cellular gives {cellular}")
    for name, M in (("all cells", all_cells), ("simplex vertices", vertices),
                    ("maximal cells", maximal), ("all simplices", simplices)):
        if M != cellular:
            problems.append(f"sum over {name} gives {M}, expected {cellular}")
    return SummationReport(not problems, routes, all_cells, vertices, maximal, simplices,
                           I.aux is not None, problems)


# ---------------------------------------------------------------------------
# Skoda complex


def skoda_complex(
    factors: Sequence[Sequence[int]],
    aux: tuple | None = None,
    check: bool = True,
) -> ModuleComplex:
    """Koszul-shaped complex ``T_k = (+)_{|tau| = k} x^{g_tau} J(a^{r-k} b^beta)``.

    ``factors`` are the exponent vectors of the principal ideals ``a_i``;
    ``a`` is their sum. Summands of ``T_k`` are indexed by the ``k``-subsets
    ``tau`` in lexicographic order; the map drops the ``p``-th index of
    ``tau`` with sign ``(-1)^p``.
    """
    gens = [tuple(int(x) for x in g) for g in factors]
    if not gens:
        raise ValueError("the Skoda complex needs at least one factor")
    d = len(gens[0])
    I = MonomialIdealInput(d, gens, aux)
    r = len(gens)
    J = {}
    for c in range(r + 1):
        J[c] = multiplier_cellular(I, c, allow_zero=True)
    terms, names = [], []
    index = []
    for k in range(r + 1):
        subsets = list(itertools.combinations(range(r), k))
        index.append({t: i for i, t in enumerate(subsets)})
        names.append(subsets)
        terms.append([J[r - k].times([sum(gens[i][v] for i in t) for v in range(d)]) for t in subsets])
    maps = []
    for k in range(r):
        f = {}
        for j, t in enumerate(names[k + 1]):
            for p in range(len(t)):
                f[(index[k][t[:p] + t[p + 1:]], j)] = -1 if p % 2 else 1
        maps.append(f)
    C = ModuleComplex(terms, maps, names)
    if check:
        C.validate()
    return C


def skoda_from_ideal(I: MonomialIdealInput, check: bool = True) -> ModuleComplex:
    return skoda_complex(I.generators, I.aux, check)


# ---------------------------------------------------------------------------
# pairwise principal sums


@dataclass(frozen=True)
class ChainCheck:
    chain: bool
    permutation: tuple[int, ...] | None = None
    witness: tuple[int, int] | None = None


def validate_pairwise_principal(gens: Sequence[Sequence[int]]) -> ChainCheck:
    """Monomials whose pairwise sums are all principal are totally ordered by divisibility.

    Returns the sorting permutation for a chain, otherwise the first
    incomparable pair of indices.
    """
    gens = [tuple(g) for g in gens]
    for i, j in itertools.combinations(range(len(gens)), 2):
        a, b = gens[i], gens[j]
        if not (all(x <= y for x, y in zip(a, b)) or all(y <= x for x, y in zip(a, b))):
            return ChainCheck(False, None, (i, j))
    perm = tuple(sorted(range(len(gens)), key=lambda i: (sum(gens[i]), gens[i], i)))
    return ChainCheck(True, perm)
