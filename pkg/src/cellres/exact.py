"""Exact rational/integer linear algebra: Smith normal form, ranks, affine hulls.

Rationals are :class:`fractions.Fraction` throughout; they are always reduced
with a positive denominator, which is all the canonical form we need.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
IntMatrix = list  # row-major list of lists of ints


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; decimals and floats are rejected."""
    s = text.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        q = int(den)
        if q == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), q)
    return Fraction(int(s))


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vec(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_rational(x) for x in xs)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def floor_div(q: Fraction) -> int:
    return q.numerator // q.denominator


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """``left @ M @ right`` is diagonal with entries ``factors`` (then zeros)."""

    factors: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.factors)


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]], ncols: int | None = None) -> SmithForm:
    """Smith normal form with unimodular witnesses.

    Pivots are chosen by smallest magnitude, which keeps entries small on the
    sizes we care about.
    """
    D = [list(map(int, row)) for row in M]
    n = len(D)
    m = ncols if ncols is not None else (len(D[0]) if D else 0)
    for row in D:
        if len(row) != m:
            raise ValueError("matrix is not rectangular")
    U = _identity(n)
    V = _identity(m)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        rd, rs = D[dst], D[src]
        for k in range(m):
            if rs[k]:
                rd[k] += q * rs[k]
        ud, us = U[dst], U[src]
        for k in range(n):
            if us[k]:
                ud[k] += q * us[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in D:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]

    factors = []
    t = 0
    while t < min(n, m):
        best = None
        for i in range(t, n):
            for j in range(t, m):
                a = D[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
        if best is None:
            break
        _, i0, j0 = best
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, n):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, m):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        dirty = True
            if dirty:
                # a smaller remainder sits in row/column t: make it the pivot
                cand = [(abs(D[i][t]), i, t) for i in range(t + 1, n) if D[i][t]]
                cand += [(abs(D[t][j]), t, j) for j in range(t + 1, m) if D[t][j]]
                _, i1, j1 = min(cand)
                if i1 != t:
                    swap_rows(t, i1)
                else:
                    swap_cols(t, j1)
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, m) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        factors.append(D[t][t])
        t += 1
    return SmithForm(
        tuple(factors), tuple(map(tuple, U)), tuple(map(tuple, V))
    )


def invariant_factors(M: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero invariant factors only (no transforms)."""
    D = [list(map(int, row)) for row in M if any(row)]
    if not D:
        return ()
    m = len(D[0])
    factors = []
    while D:
        best = None
        for i, row in enumerate(D):
            for j, a in enumerate(row):
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i0, j0 = best
        D[0], D[i0] = D[i0], D[0]
        for row in D:
            row[0], row[j0] = row[j0], row[0]
        while True:
            p = D[0][0]
            dirty = False
            for row in D[1:]:
                if row[0]:
                    q = row[0] // p
                    r0 = D[0]
                    for k in range(m):
                        if r0[k]:
                            row[k] -= q * r0[k]
                    if row[0]:
                        dirty = True
            r0 = D[0]
            for j in range(1, m):
                if r0[j]:
                    q = r0[j] // p
                    for row in D:
                        if row[0]:
                            row[j] -= q * row[0]
                    if r0[j]:
                        dirty = True
            if dirty:
                cand = [(abs(row[0]), i, 0) for i, row in enumerate(D) if i and row[0]]
                cand += [(abs(r0[j]), 0, j) for j in range(1, m) if r0[j]]
                _, i1, j1 = min(cand)
                if i1:
                    D[0], D[i1] = D[i1], D[0]
                else:
                    for row in D:
                        row[0], row[j1] = row[j1], row[0]
                continue
            bad = next((row for row in D[1:] if any(x % p for x in row[1:])), None)
            if bad is None:
                break
            D[0] = [a + b for a, b in zip(D[0], bad)]
        factors.append(abs(D[0][0]))
        D = [row[1:] for row in D[1:] if any(row[1:])]
        m -= 1
    return tuple(factors)


# ---------------------------------------------------------------------------
# Ranks and hulls


def _row_echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    rows = [list(r) for r in rows]
    pivots = []
    if not rows:
        return rows, pivots
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / Fraction(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank_over_rationals(M: Sequence[Sequence]) -> int:
    rows = [[Fraction(x) for x in row] for row in M]
    if not rows or not rows[0]:
        return 0
    return len(_row_echelon(rows)[1])


def pivot_columns(M: Sequence[Sequence]) -> list[int]:
    rows = [[Fraction(x) for x in row] for row in M]
    if not rows or not rows[0]:
        return []
    return _row_echelon(rows)[1]


def nullspace(M: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : M x = 0}``."""
    rows = [[Fraction(x) for x in row] for row in M]
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, piv = _row_echelon(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, piv):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(M: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """One solution of ``M x = rhs`` or None when inconsistent."""
    if not M:
        return ()
    ncols = len(M[0])
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(M, rhs)]
    red, piv = _row_echelon(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, piv):
        x[p] = row[-1]
    return tuple(x)


def affine_hull_dim(points: Sequence[Sequence]) -> int:
    if not points:
        raise ValueError("affine hull of an empty point set")
    p0 = points[0]
    diffs = [sub(p, p0) for p in points[1:]]
    return rank_over_rationals(diffs) if diffs else 0


def sparse_rank(columns: Iterable[dict]) -> int:
    """Rank over Q of a matrix given as sparse columns ``{row: value}``.

    One left-to-right pass: each column is either reduced to zero or becomes
    a pivot; the pivot row is the one with the fewest live entries, unit
    entries preferred. Inputs are mostly signed incidence matrices, so fill-in
    stays small.
    """
    cols = [dict(c) for c in columns if c]
    by_row: dict = {}
    for j, c in enumerate(cols):
        for i in c:
            by_row.setdefault(i, set()).add(j)
    rank = 0
    for j, pc in enumerate(cols):
        if not pc:
            continue
        i = min(pc, key=lambda r: (abs(pc[r]) != 1, len(by_row[r])))
        pv = pc[i]
        for k in by_row[i]:
            if k <= j:
                continue
            ck = cols[k]
            f = Fraction(ck[i]) / pv
            for r, v in pc.items():
                nv = ck.get(r, 0) - f * v
                if nv:
                    if r not in ck:
                        by_row[r].add(k)
                    ck[r] = nv
                else:
                    del ck[r]
                    if r != i:
                        by_row[r].discard(k)
        for r in pc:
            if r != i:
                by_row[r].discard(j)
        by_row[i] = set()
        rank += 1
    return rank
