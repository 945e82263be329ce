"""Exact two-phase simplex over the rationals.

Used for half-open box feasibility (via a maximized slack) and for
convex-combination certificates. Bland's rule keeps it finite.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _pivot(T, basis, row, col):
    pr = T[row]
    inv = 1 / pr[col]
    T[row] = pr = [v * inv for v in pr]
    for i, r in enumerate(T):
        if i != row and r[col]:
            f = r[col]
            T[i] = [a - f * b for a, b in zip(r, pr)]
    basis[row] = col


def _run(T, basis, ncols):
    """Maximize the objective stored in the last row (as negated reduced costs)."""
    obj = T[-1]
    while True:
        obj = T[-1]
        col = next((j for j in range(ncols) if obj[j] < 0), None)
        if col is None:
            return OPTIMAL
        best = None
        for i in range(len(T) - 1):
            a = T[i][col]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return UNBOUNDED
        _pivot(T, basis, best[1], col)


def maximize(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """Maximize ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    nv = len(c)
    rows = []
    for a, b in zip(A_ub, b_ub):
        rows.append(([Fraction(v) for v in a], Fraction(b), True))
    for a, b in zip(A_eq, b_eq):
        rows.append(([Fraction(v) for v in a], Fraction(b), False))
    m = len(rows)
    ns = sum(1 for r in rows if r[2])
    # columns: x (nv) | slacks (ns) | artificials (m) | rhs
    width = nv + ns + m
    T = []
    s = 0
    for i, (a, b, is_ub) in enumerate(rows):
        row = a + [Fraction(0)] * (ns + m) + [b]
        if is_ub:
            row[nv + s] = Fraction(1)
            s += 1
        if b < 0:
            row = [-v for v in row]
        row[nv + ns + i] = Fraction(1)
        T.append(row)
    basis = [nv + ns + i for i in range(m)]

    # phase one: maximize -sum(artificials)
    obj = [Fraction(0)] * (width + 1)
    for r in T:
        for j in range(nv + ns):
            obj[j] -= r[j]
        obj[-1] -= r[-1]
    T.append(obj)
    _run(T, basis, nv + ns)
    if T[-1][-1] < 0:
        return LPResult(INFEASIBLE)
    T.pop()

    # drive remaining artificials out of the basis; drop redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= nv + ns:
            col = next((j for j in range(nv + ns) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, col)
        i += 1
    T = [r[: nv + ns] + [r[-1]] for r in T]

    obj = [-Fraction(v) for v in c] + [Fraction(0)] * ns + [Fraction(0)]
    for i, bcol in enumerate(basis):
        f = obj[bcol]
        if f:
            obj = [a - f * b for a, b in zip(obj, T[i])]
    T.append(obj)
    status = _run(T, basis, nv + ns)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * (nv + ns)
    for i, bcol in enumerate(basis):
        x[bcol] = T[i][-1]
    return LPResult(OPTIMAL, T[-1][-1], tuple(x[:nv]))


def is_feasible(A_ub=(), b_ub=(), A_eq=(), b_eq=(), nvars: int | None = None) -> bool:
    n = nvars if nvars is not None else len((list(A_ub) + list(A_eq))[0])
    return maximize([0] * n, A_ub, b_ub, A_eq, b_eq).status == OPTIMAL


def convex_combination(point: Sequence, generators: Sequence[Sequence]) -> tuple[Fraction, ...] | None:
    """Nonnegative weights summing to one that reproduce ``point``, if any."""
    k = len(generators)
    A_eq = [[g[i] for g in generators] for i in range(len(point))]
    A_eq.append([1] * k)
    b_eq = list(point) + [1]
    res = maximize([0] * k, A_eq=A_eq, b_eq=b_eq)
    return res.x if res.status == OPTIMAL else None
