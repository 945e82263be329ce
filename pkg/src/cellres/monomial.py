"""Laurent monomial modules and the labeled cellular complex of a subdivision.

Monomials are exponent tuples (negative entries allowed). A module is kept
by its minimal generators. Complexes of such modules have scalar maps: an
entry ``c`` from summand ``U`` to summand ``V`` means ``c`` times the
inclusion ``U -> V``, which is only legal when ``U`` is contained in ``V``.
"""
from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .arrangement import ArrangementComplex, DivisorialData
from .exact import sparse_rank
from .simplicial import HomologyResult, IndexedComplex, SimplicialComplex, barycentric_subdivision

Monomial = tuple  # tuple[int, ...]


def _check_len(a, b):
    if len(a) != len(b):
        raise ValueError(f"monomials {a} and {b} have different numbers of variables")


def lcm(a: Sequence[int], b: Sequence[int]) -> Monomial:
    _check_len(a, b)
    return tuple(map(max, a, b))


def lcm_all(ms: Iterable[Sequence[int]]) -> Monomial:
    it = iter(ms)
    out = tuple(next(it))
    for m in it:
        out = lcm(out, m)
    return out


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    """``a | b``: ``b / a`` has nonnegative exponents."""
    _check_len(a, b)
    return all(x <= y for x, y in zip(a, b))


def format_monomial(m: Sequence[int], names: Sequence[str] | None = None) -> str:
    if names is None:
        names = ["x", "y", "z", "w"] if len(m) <= 4 else [f"x{i + 1}" for i in range(len(m))]
    parts = []
    for e, v in zip(m, names):
        if e == 1:
            parts.append(v)
        elif e:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


class MonomialModule:
    """Module generated by Laurent monomials, stored by minimal generators."""

    __slots__ = ("nvars", "generators")

    def __init__(self, generators: Iterable[Sequence[int]], nvars: int | None = None):
        gens = sorted({tuple(int(x) for x in g) for g in generators})
        if not gens:
            raise ValueError("a monomial module needs at least one generator")
        n = len(gens[0]) if nvars is None else nvars
        if any(len(g) != n for g in gens):
            raise ValueError("generators have mixed numbers of variables")
        mins = [g for g in gens if not any(h != g and divides(h, g) for h in gens)]
        self.nvars = n
        self.generators: tuple[Monomial, ...] = tuple(mins)

    def __contains__(self, m) -> bool:
        m = tuple(m)
        return any(divides(g, m) for g in self.generators)

    def contains_module(self, other: "MonomialModule") -> bool:
        return all(g in self for g in other.generators)

    def __le__(self, other: "MonomialModule") -> bool:
        return other.contains_module(self)

    def __eq__(self, other):
        return isinstance(other, MonomialModule) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __add__(self, other: "MonomialModule") -> "MonomialModule":
        return MonomialModule(self.generators + other.generators, self.nvars)

    def times(self, m: Sequence[int]) -> "MonomialModule":
        return MonomialModule([tuple(a + b for a, b in zip(g, m)) for g in self.generators], self.nvars)

    @property
    def is_principal(self) -> bool:
        return len(self.generators) == 1

    def __repr__(self):
        return "<" + ", ".join(format_monomial(g) for g in self.generators) + ">"


def minimalize(gens: Iterable[Sequence[int]]) -> MonomialModule:
    gens = list(gens)
    if not gens:
        raise ValueError("minimalize needs at least one monomial")
    return MonomialModule(gens)


def principal(m: Sequence[int]) -> MonomialModule:
    return MonomialModule([m])


# ---------------------------------------------------------------------------
# Labeled complexes


class LabelError(AssertionError):
    """Cell labels violate the lcm/face relations they are built to satisfy."""


class LabeledComplex:
    """Simplicial complex with a monomial on each vertex; simplices get the lcm.

    When built from an arrangement by :func:`label_complex`, the simplicial
    complex is the barycentric subdivision (built lazily), vertex ids are
    cell ids, and the label of a chain is the label of its smallest cell.
    """

    def __init__(
        self,
        complex: SimplicialComplex | None,
        vertex_labels: Mapping[int, Sequence[int]],
        arrangement: ArrangementComplex | None = None,
    ):
        self._complex = complex
        self.vertex_labels: dict[int, Monomial] = {v: tuple(m) for v, m in vertex_labels.items()}
        self.arrangement = arrangement
        if complex is not None:
            missing = set(complex.vertices) - set(self.vertex_labels)
            if missing:
                raise ValueError(f"vertices {sorted(missing)} have no label")
        if not self.vertex_labels:
            raise ValueError("a labeled complex needs at least one vertex")
        self.nvars = len(next(iter(self.vertex_labels.values())))

    @cached_property
    def complex(self) -> SimplicialComplex:
        if self._complex is None:
            self._complex = barycentric_subdivision(self.arrangement)
        return self._complex

    def label(self, sigma: Sequence[int]) -> Monomial:
        sigma = tuple(sorted(sigma))
        if self.arrangement is not None:
            return self.vertex_labels[sigma[0]]
        return lcm_all(self.vertex_labels[v] for v in sigma)

    def simplices(self, q: int) -> list[tuple]:
        return self.complex.faces_of_dim(q)

    @property
    def dim(self) -> int:
        return self.complex.dim


def label_complex(C: ArrangementComplex, D: DivisorialData | None = None, check: bool = True) -> LabeledComplex:
    """Label each cell by the floors of ``A . lambda + b`` at its barycenter."""
    D = C.data if D is None else D
    labels = {}
    for cell, sig in zip(C.cells, C.signatures):
        m = D.floors(cell.barycenter)
        if m != tuple(l.z for l in sig):
            raise LabelError(f"cell {cell.id}: floors {m} disagree with signature {sig}")
        labels[cell.id] = m
    if check:
        # a chain's label is that of its first cell exactly when every face
        # pair satisfies the lcm relation, so checking pairs covers all simplices
        for q, faces in enumerate(C.below):
            mq = labels[q]
            for p in faces:
                mp = labels[p]
                diff = [a - b for a, b in zip(mp, mq)]
                if any(x not in (0, 1) for x in diff):
                    raise LabelError(
                        f"cell {p} < cell {q} but m_{p} / m_{q} = {diff} is not a squarefree monomial"
                    )
    return LabeledComplex(None, labels, C)


def module_of(L: LabeledComplex) -> MonomialModule:
    return minimalize(L.vertex_labels.values())


def restrict_leq(L: LabeledComplex, m: Sequence[int]) -> SimplicialComplex:
    m = tuple(m)
    keep = [v for v, lab in L.vertex_labels.items() if divides(lab, m)]
    return L.complex.induced(keep)


def lcm_lattice(labels: Iterable[Sequence[int]]) -> list[Monomial]:
    """All lcms of nonempty subsets of ``labels``."""
    base = sorted({tuple(m) for m in labels})
    seen = set(base)
    frontier = list(base)
    while frontier:
        nxt = []
        for a in frontier:
            for b in base:
                c = tuple(map(max, a, b))
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(seen)


@dataclass
class AcyclicityReport:
    ok: bool
    checked: int
    distinct_subcomplexes: int
    witness: Monomial | None = None
    homology: HomologyResult | None = None

    def __bool__(self):
        return self.ok


def _threshold_masks(labels: Sequence[Sequence[int]]) -> list[tuple[list[int], list[int]]]:
    """Per coordinate: sorted values and bitmasks of the items with exponent <= each value."""
    out = []
    n = len(labels[0]) if labels else 0
    for i in range(n):
        vals = sorted({lab[i] for lab in labels})
        pos = {v: k for k, v in enumerate(vals)}
        masks = [0] * len(vals)
        for b, lab in enumerate(labels):
            masks[pos[lab[i]]] |= 1 << b
        for k in range(1, len(vals)):
            masks[k] |= masks[k - 1]
        out.append((vals, masks))
    return out


def _below(thresholds, m: Sequence[int], full: int) -> int:
    """Bitmask of the items whose label divides ``m``."""
    mask = full
    for (vals, masks), x in zip(thresholds, m):
        k = bisect.bisect_right(vals, x) - 1
        if k < 0:
            return 0
        mask &= masks[k]
    return mask


def _bits(x: int) -> list[int]:
    return [i for i, ch in enumerate(reversed(bin(x)[2:])) if ch == "1"]


def bs_acyclicity(L: LabeledComplex) -> AcyclicityReport:
    """Check that every restriction to an lcm-lattice degree is acyclic (or empty)."""
    lattice = lcm_lattice(L.vertex_labels.values())
    X, index = IndexedComplex.of_faces(L.complex.faces)
    order = sorted(index, key=index.get)
    # restriction to m keeps the faces all of whose vertices have labels dividing m
    labels = [lcm_all(L.vertex_labels[v] for v in f) if f else None for f in order]
    faces = list(range(1, len(order)))
    thresholds = _threshold_masks([labels[i] for i in faces])
    full = (1 << len(faces)) - 1
    memo: dict[int, HomologyResult | None] = {}
    for m in lattice:
        keep = _below(thresholds, m, full)
        if keep not in memo:
            memo[keep] = X.homology([0] + [faces[b] for b in _bits(keep)]) if keep else None
        h = memo[keep]
        if h is not None and not h.is_zero():
            return AcyclicityReport(False, len(lattice), len(memo), m, h)
    return AcyclicityReport(True, len(lattice), len(memo))


# ---------------------------------------------------------------------------
# Complexes of monomial modules


class ComplexError(ValueError):
    """A module complex whose maps are illegal inclusions or do not compose to zero."""


@dataclass
class ModuleComplex:
    """``0 -> T_k -> ... -> T_1 -> T_0 -> 0`` with ``terms[i] = T_i``.

    ``maps[i]`` sends ``T_{i+1}`` to ``T_i`` and is a sparse matrix
    ``{(row in T_i, column in T_{i+1}): coefficient}``. ``names`` optionally
    annotates each summand (a simplex, a subset, ...).
    """

    terms: list[list[MonomialModule]]
    maps: list[dict[tuple[int, int], int]]
    names: list[list] | None = None

    def __post_init__(self):
        if len(self.maps) != max(len(self.terms) - 1, 0):
            raise ComplexError(f"{len(self.terms)} terms need {len(self.terms) - 1} maps, got {len(self.maps)}")
        ns = {M.nvars for t in self.terms for M in t}
        if len(ns) > 1:
            raise ComplexError("summands have different numbers of variables")
        self.nvars = ns.pop() if ns else 0
        for i, f in enumerate(self.maps):
            for (r, c), v in f.items():
                if not (0 <= r < len(self.terms[i]) and 0 <= c < len(self.terms[i + 1])):
                    raise ComplexError(f"map {i} has entry ({r}, {c}) outside the term sizes")

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def shape(self) -> list[int]:
        return [len(t) for t in self.terms]

    def illegal_entries(self) -> list[tuple[int, int, int]]:
        """``(map index, row, col)`` of entries whose source is not inside the target."""
        out = []
        for i, f in enumerate(self.maps):
            for (r, c), v in sorted(f.items()):
                if v and not self.terms[i][r].contains_module(self.terms[i + 1][c]):
                    out.append((i, r, c))
        return out

    def composition_failures(self) -> list[tuple[int, int, int]]:
        """``(i, row, col)`` where ``maps[i] o maps[i+1]`` is nonzero."""
        out = []
        for i in range(len(self.maps) - 1):
            lo, hi = self.maps[i], self.maps[i + 1]
            by_row: dict[int, list] = {}
            for (r, c), v in hi.items():
                by_row.setdefault(r, []).append((c, v))
            acc: dict[tuple[int, int], int] = {}
            for (r, k), v in lo.items():
                for c, w in by_row.get(k, ()):
                    acc[(r, c)] = acc.get((r, c), 0) + v * w
            out.extend((i, r, c) for (r, c), v in sorted(acc.items()) if v)
        return out

    def validate(self) -> None:
        bad = self.illegal_entries()
        if bad:
            i, r, c = bad[0]
            raise ComplexError(
                f"map {i}: summand {c} of term {i + 1} is not contained in summand {r} of term {i}"
            )
        bad = self.composition_failures()
        if bad:
            i, r, c = bad[0]
            raise ComplexError(f"maps {i} and {i + 1} do not compose to zero at ({r}, {c})")


def free_complex(L: LabeledComplex, check: bool = True) -> ModuleComplex:
    """Augmented cellular complex ``... -> (+)_{dim 0} <m_v> -> M -> 0``."""
    K = L.complex
    d = K.dim
    M = module_of(L)
    terms = [[M]]
    names: list[list] = [["M"]]
    bases = [K.faces_of_dim(q) for q in range(d + 1)]
    for basis in bases:
        terms.append([principal(L.label(s)) for s in basis])
        names.append(list(basis))
    maps = [{(0, j): 1 for j in range(len(bases[0]))}] if bases else []
    for q in range(1, d + 1):
        idx = {s: i for i, s in enumerate(bases[q - 1])}
        f = {}
        for j, s in enumerate(bases[q]):
            for p in range(len(s)):
                f[(idx[s[:p] + s[p + 1:]], j)] = -1 if p % 2 else 1
        maps.append(f)
    C = ModuleComplex(terms, maps, names)
    if check:
        C.validate()
    return C


@dataclass
class ExactnessReport:
    ok: bool
    degrees_checked: int
    patterns: int
    box: tuple[Monomial, Monomial] | None = None
    failure: tuple[int, Monomial] | None = None  # (position, degree)
    detail: str = ""

    def __bool__(self):
        return self.ok


def _grid(C: ModuleComplex) -> list[list[int]]:
    vals = [set() for _ in range(C.nvars)]
    for t in C.terms:
        for M in t:
            for g in M.generators:
                for i, e in enumerate(g):
                    vals[i].add(e)
    return [sorted(v) for v in vals]


def truncation_box(C: ModuleComplex) -> tuple[Monomial, Monomial]:
    g = _grid(C)
    return tuple(v[0] for v in g), tuple(v[-1] for v in g)


def exactness_check(C: ModuleComplex, validate: bool = True) -> ExactnessReport:
    """Check exactness of ``C`` in every multidegree of the truncation box.

    In degree ``nu`` each summand is a copy of the field or zero. Membership
    only changes when some coordinate crosses a generator exponent, so the
    box is covered by iterating over the exponents that actually occur. Below
    the box every summand vanishes; above it membership is that of the
    clamped degree. Identical membership patterns are checked once: the
    strand of each pattern is reduced by free-pair cancellation and only a
    strand that does not cancel out gets the per-map rank computation that
    locates the failure.
    """
    if validate:
        C.validate()
    grid = _grid(C)
    n = C.nvars
    box = (tuple(v[0] for v in grid), tuple(v[-1] for v in grid)) if n else None
    k = len(C.terms)
    # per term: list of (summand, generator); masks[t][i][j] = items with exponent_i <= grid[i][j]
    items = []
    masks = []
    for t in C.terms:
        its = [(s, g) for s, M in enumerate(t) for g in M.generators]
        items.append(its)
        tm = []
        for i in range(n):
            col = []
            for j, val in enumerate(grid[i]):
                m = 0
                for b, (_, g) in enumerate(its):
                    if g[i] <= val:
                        m |= 1 << b
                col.append(m)
            tm.append(col)
        masks.append(tm)
    principal_terms = [all(M.is_principal for M in t) for t in C.terms]

    cols_by_map = []
    for i, f in enumerate(C.maps):
        cols: dict[int, dict[int, int]] = {}
        for (r, c), v in f.items():
            if v:
                cols.setdefault(c, {})[r] = v
        cols_by_map.append(cols)

    def summand_mask(t, item_mask):
        if principal_terms[t]:
            return item_mask
        m = 0
        its = items[t]
        b = 0
        while item_mask:
            if item_mask & 1:
                m |= 1 << its[b][0]
            item_mask >>= 1
            b += 1
        return m

    rank_memo: dict[tuple, int] = {}

    def rank_of(i, src, dst):
        # rank of maps[i] restricted to present summands of T_{i+1} (src) and T_i (dst)
        key = (i, src, dst)
        if key not in rank_memo:
            cols = cols_by_map[i]
            sub = []
            for c in _bits(src):
                col = cols.get(c)
                if col:
                    cc = {r: v for r, v in col.items() if (dst >> r) & 1}
                    if cc:
                        sub.append(cc)
            rank_memo[key] = sparse_rank(sub)
        return rank_memo[key]

    offsets = [0]
    for t in C.terms:
        offsets.append(offsets[-1] + len(t))
    degree = [t for t in range(k) for _ in C.terms[t]]
    boundary: list[list] = [[] for _ in degree]
    for i, f in enumerate(C.maps):
        for (r, c), v in f.items():
            boundary[offsets[i + 1] + c].append((offsets[i] + r, v))
    strands = IndexedComplex(degree, boundary)

    seen: dict[tuple, bool] = {}
    checked = 0
    for idx in itertools.product(*[range(len(v)) for v in grid]):
        checked += 1
        pattern = []
        for t in range(k):
            m = -1
            for i, j in enumerate(idx):
                m &= masks[t][i][j]
            if m == -1:  # no variables at all
                m = (1 << len(items[t])) - 1
            pattern.append(summand_mask(t, m))
        pattern = tuple(pattern)
        if pattern in seen:
            continue
        members = [offsets[t] + b for t in range(k) for b in _bits(pattern[t])]
        if strands.homology(members, field=True).is_zero():
            seen[pattern] = True
            continue
        ranks = [0] + [rank_of(i, pattern[i + 1], pattern[i]) for i in range(k - 1)] + [0]
        for pos in range(k):
            dim = bin(pattern[pos]).count("1")
            if dim != ranks[pos] + ranks[pos + 1]:
                nu = tuple(grid[i][j] for i, j in enumerate(idx))
                kind = "not surjective" if pos == 0 else ("not injective" if pos == k - 1 else "homology")
                return ExactnessReport(
                    False, checked, len(seen) + 1, box, (pos, nu),
                    f"{kind} at position {pos} in degree {nu}: dim {dim}, "
                    f"image rank {ranks[pos + 1]}, outgoing rank {ranks[pos]}",
                )
        seen[pattern] = True
    return ExactnessReport(True, checked, len(seen), box)


def membership_vector(C: ModuleComplex, nu: Sequence[int]) -> list[list[int]]:
    """Indices of the summands of each term that contain ``x^nu``."""
    nu = tuple(nu)
    return [[s for s, M in enumerate(t) if nu in M] for t in C.terms]


def render_shape(C: ModuleComplex, top: str = "M") -> str:
    """``0 → ⊕₄ → ⊕₅ → M → 0`` style summary (leftmost is the highest term)."""
    sub = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
    parts = ["0"]
    for i in range(len(C.terms) - 1, -1, -1):
        t = C.terms[i]
        if i == 0 and len(t) == 1:
            parts.append(top)
        else:
            parts.append("⊕" + str(len(t)).translate(sub))
    parts.append("0")
    return " → ".join(parts)


def render_text(C: ModuleComplex) -> str:
    lines = [render_shape(C)]
    for i in range(len(C.terms) - 1, -1, -1):
        t = C.terms[i]
        names = C.names[i] if C.names else [None] * len(t)
        lines.append(f"T{i}:")
        for s, (M, nm) in enumerate(zip(t, names)):
            label = "" if nm is None else f" {list(nm) if isinstance(nm, tuple) else nm}"
            lines.append(f"  [{s}]{label} {M!r}")
    return "\n".join(lines)
