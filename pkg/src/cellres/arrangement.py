"""The subdivision of the simplex ``{lambda >= 0, sum = alpha}`` cut out by the
integer level sets of the affine functionals ``lambda -> A^j . lambda + b_j``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .exact import as_rational, dot, floor_div, vec
from .polytope import HalfSpace, PolyhedralComplex, Polytope, split, standard_simplex


@dataclass(frozen=True)
class DivisorialData:
    """Integer matrix ``A`` (n x r), rational shift ``b`` (length n), weight ``alpha``."""

    A: tuple[tuple[int, ...], ...]
    b: tuple[Fraction, ...]
    alpha: Fraction

    def __post_init__(self):
        A = tuple(tuple(int(x) for x in row) for row in self.A)
        if not A or not A[0]:
            raise ValueError("A must have n >= 1 rows and r >= 1 columns")
        if len({len(row) for row in A}) != 1:
            raise ValueError("A is not rectangular")
        b = vec(self.b)
        if len(b) != len(A):
            raise ValueError(f"b has length {len(b)}, expected {len(A)}")
        alpha = as_rational(self.alpha)
        if alpha < 0:
            raise ValueError("alpha must be nonnegative")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "alpha", alpha)

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def r(self) -> int:
        return len(self.A[0])

    def values(self, lam: Sequence) -> tuple[Fraction, ...]:
        """``A . lambda + b``."""
        return tuple(dot(row, lam) + bj for row, bj in zip(self.A, self.b))

    def floors(self, lam: Sequence) -> tuple[int, ...]:
        return tuple(floor_div(v) for v in self.values(lam))


class Level(NamedTuple):
    """Value of one functional on a cell: exactly ``z`` or inside ``(z, z+1)``."""

    z: int
    exact: bool

    def __str__(self):
        return f"={self.z}" if self.exact else f"({self.z},{self.z + 1})"


CellSignature = tuple  # tuple[Level, ...]


def in_simplex(lam: Sequence, r: int, alpha: Fraction) -> bool:
    return len(lam) == r and all(x >= 0 for x in lam) and sum(lam) == alpha


def support(lam: Sequence) -> frozenset[int]:
    """Indices of the vanishing coordinates."""
    return frozenset(i for i, x in enumerate(lam) if x == 0)


def signature_at(lam: Sequence, D: DivisorialData) -> CellSignature:
    lam = vec(lam)
    if not in_simplex(lam, D.r, D.alpha):
        raise ValueError(f"{lam} is not in the simplex of weight {D.alpha}")
    out = []
    for v in D.values(lam):
        z = floor_div(v)
        out.append(Level(z, v == z))
    return tuple(out)


def _level_range(row: Sequence[int], offset: Fraction, r: int, alpha: Fraction) -> range:
    # extremes of a linear functional on the simplex are attained at alpha * e_i
    vals = [alpha * a + offset for a in row] if alpha else [offset]
    lo, hi = min(vals), max(vals)
    return range(math.ceil(lo), math.floor(hi) + 1)


def relevant_hyperplanes(D: DivisorialData, shifts: Iterable[Sequence[int]] = ((),)) -> list[HalfSpace]:
    """Hyperplanes ``A^j . (lambda - tau) + b_j = z`` that meet the simplex.

    Ordered by shift, then row, then ascending level; duplicates dropped.
    Rows of ``A`` that vanish identically cut nothing and are skipped.
    """
    out: list[HalfSpace] = []
    seen = set()
    for tau in shifts:
        tau = tuple(tau) or (0,) * D.r
        for row, bj in zip(D.A, D.b):
            if not any(row):
                continue
            shift = bj - sum(a * t for a, t in zip(row, tau))
            for z in _level_range(row, shift, D.r, D.alpha):
                H = HalfSpace(row, z - shift, "eq")
                key = (H.normal, H.offset)
                if key not in seen:
                    seen.add(key)
                    out.append(H)
    return out


class ArrangementComplex(PolyhedralComplex):
    """Polyhedral subdivision of the simplex with a signature on every cell."""

    def __init__(self, D: DivisorialData, maximal: Sequence[Polytope]):
        super().__init__(maximal)
        self.data = D
        self.signatures: tuple[CellSignature, ...] = tuple(
            signature_at(c.barycenter, D) for c in self.cells
        )
        self.supports: tuple[frozenset[int], ...] = tuple(support(c.barycenter) for c in self.cells)
        self._index = {(s, z): i for i, (s, z) in enumerate(zip(self.signatures, self.supports))}

    def labels(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(l.z for l in sig) for sig in self.signatures)

    def locate(self, lam: Sequence) -> int | None:
        """Id of the cell whose relative interior contains ``lam``.

        Faces on the boundary of the simplex can share a signature with the
        cell they bound, so the set of vanishing coordinates is matched too.
        """
        return self._index.get((signature_at(lam, self.data), support(lam)))


def _cut(pieces: list[Polytope], hyperplanes: Sequence[HalfSpace]) -> list[Polytope]:
    for H in hyperplanes:
        nxt = []
        for P in pieces:
            below, on, above = split(P, H)
            if below is None and above is None:
                nxt.append(P)
                continue
            nxt.extend(x for x in (below, above) if x is not None)
        pieces = nxt
    return pieces


def translate_refine(D: DivisorialData, shifts: Iterable[Sequence[int]]) -> ArrangementComplex:
    """Subdivision induced by the arrangement translated by every 0/1 vector in ``shifts``."""
    shifts = sorted({tuple(int(t) for t in tau) for tau in shifts})
    for tau in shifts:
        if len(tau) != D.r or any(t not in (0, 1) for t in tau):
            raise ValueError(f"shift {tau} is not a 0/1 vector of length {D.r}")
    simplex = standard_simplex(D.r, D.alpha)
    pieces = _cut([simplex], relevant_hyperplanes(D, shifts))
    return ArrangementComplex(D, pieces)


def subdivide(D: DivisorialData) -> ArrangementComplex:
    return translate_refine(D, [(0,) * D.r])


def all_shifts(r: int) -> list[tuple[int, ...]]:
    return list(itertools.product((0, 1), repeat=r))
