"""JSON encodings (schema ``cellres/1``) for inputs and results.

Rationals travel as strings ``"p/q"`` (or ``"p"``); plain JSON integers are
accepted on input as well. Parsers raise :class:`SchemaError` naming the
offending field.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any

from .arrangement import ArrangementComplex, DivisorialData
from .exact import format_rational, parse_rational
from .monomial import ModuleComplex, MonomialModule
from .multiplier import MonomialIdealInput
from .simplicial import HomologyResult, SimplicialComplex

SCHEMA = "cellres/1"


class SchemaError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _check_schema(obj, where="input"):
    if not isinstance(obj, dict):
        raise SchemaError(where, "expected a JSON object")
    tag = obj.get("schema", SCHEMA)
    if tag != SCHEMA:
        raise SchemaError("schema", f"unsupported schema {tag!r}, expected {SCHEMA!r}")


def _require(obj: dict, key: str, where: str = ""):
    if key not in obj:
        raise SchemaError(where + key, "missing")
    return obj[key]


def rational(x, field: str) -> Fraction:
    if isinstance(x, bool):
        raise SchemaError(field, "expected a rational, got a boolean")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return parse_rational(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(field, f"bad rational {x!r} ({exc})") from None
    raise SchemaError(field, f"expected a rational string 'p/q', got {x!r}")


def integer(x, field: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(field, f"expected an integer, got {x!r}")
    return x


def int_list(x, field: str) -> list[int]:
    if not isinstance(x, list):
        raise SchemaError(field, "expected an array of integers")
    return [integer(v, f"{field}[{i}]") for i, v in enumerate(x)]


def int_matrix(x, field: str) -> list[list[int]]:
    if not isinstance(x, list) or not x:
        raise SchemaError(field, "expected a nonempty array of integer arrays")
    return [int_list(row, f"{field}[{i}]") for i, row in enumerate(x)]


def fmt(q) -> str:
    return format_rational(q)


def fmt_vec(v) -> list[str]:
    return [fmt(x) for x in v]


# -- divisorial data ------------------------------------------------------------


def parse_divisorial(obj) -> DivisorialData:
    _check_schema(obj)
    A = int_matrix(_require(obj, "A"), "A")
    braw = _require(obj, "b")
    if not isinstance(braw, list):
        raise SchemaError("b", "expected an array of rationals")
    b = [rational(v, f"b[{i}]") for i, v in enumerate(braw)]
    alpha = rational(_require(obj, "alpha"), "alpha")
    try:
        return DivisorialData(A, b, alpha)
    except ValueError as exc:
        raise SchemaError("A/b/alpha", str(exc)) from None


def divisorial_json(D: DivisorialData) -> dict:
    return {"schema": SCHEMA, "A": [list(r) for r in D.A], "b": fmt_vec(D.b), "alpha": fmt(D.alpha)}


def arrangement_json(C: ArrangementComplex) -> dict:
    cells = []
    for c, sig in zip(C.cells, C.signatures):
        cells.append({
            "id": c.id,
            "dim": c.dim,
            "vertices": [fmt_vec(v) for v in c.polytope.vertices],
            "signature": [["exact" if l.exact else "open", l.z] for l in sig],
            "barycenter": fmt_vec(c.barycenter),
        })
    return {
        "schema": SCHEMA,
        "kind": "arrangement",
        "data": divisorial_json(C.data),
        "cells": cells,
        "faces": [list(p) for p in C.face_pairs()],
    }


# -- monomial ideals ------------------------------------------------------------


def parse_ideal(obj) -> MonomialIdealInput:
    _check_schema(obj)
    d = integer(_require(obj, "nvars"), "nvars")
    if d < 1:
        raise SchemaError("nvars", "must be at least 1")
    gens = int_matrix(_require(obj, "generators"), "generators")
    for i, g in enumerate(gens):
        if len(g) != d:
            raise SchemaError(f"generators[{i}]", f"expected {d} exponents, got {len(g)}")
        if any(x < 0 for x in g):
            raise SchemaError(f"generators[{i}]", "exponents must be nonnegative")
    aux = None
    if obj.get("aux") is not None:
        a = obj["aux"]
        if not isinstance(a, dict):
            raise SchemaError("aux", "expected an object with delta and beta")
        delta = int_list(_require(a, "delta", "aux."), "aux.delta")
        beta = rational(_require(a, "beta", "aux."), "aux.beta")
        if len(delta) != d or any(x < 0 for x in delta):
            raise SchemaError("aux.delta", f"expected {d} nonnegative integers")
        if beta <= 0:
            raise SchemaError("aux.beta", "must be positive")
        aux = (delta, beta)
    return MonomialIdealInput(d, gens, aux)


def ideal_json(I: MonomialIdealInput) -> dict:
    out = {"schema": SCHEMA, "nvars": I.nvars, "generators": [list(g) for g in I.generators]}
    if I.aux is not None:
        out["aux"] = {"delta": list(I.aux[0]), "beta": fmt(I.aux[1])}
    return out


def module_json(M: MonomialModule) -> list[list[int]]:
    return [list(g) for g in M.generators]


# -- simplicial complexes -----------------------------------------------------------


def parse_faces(obj, field: str = "faces") -> list[tuple[int, ...]]:
    if isinstance(obj, dict):
        _check_schema(obj)
        obj = _require(obj, field)
    if not isinstance(obj, list):
        raise SchemaError(field, "expected an array of vertex-id arrays")
    return [tuple(int_list(f, f"{field}[{i}]")) for i, f in enumerate(obj)]


def parse_complex(obj) -> SimplicialComplex:
    faces = parse_faces(obj)
    coords = None
    if isinstance(obj, dict) and obj.get("coords") is not None:
        raw = obj["coords"]
        if not isinstance(raw, dict):
            raise SchemaError("coords", "expected an object mapping vertex ids to points")
        coords = {}
        for k, v in raw.items():
            try:
                vid = int(k)
            except ValueError:
                raise SchemaError(f"coords.{k}", "vertex ids must be integers") from None
            if not isinstance(v, list):
                raise SchemaError(f"coords.{k}", "expected an array of rationals")
            coords[vid] = tuple(rational(x, f"coords.{k}[{i}]") for i, x in enumerate(v))
    K = SimplicialComplex(faces)
    if coords is not None:
        missing = [v for v in K.vertices if v not in coords]
        if missing:
            raise SchemaError("coords", f"vertex {missing[0]} has no coordinates")
        K = SimplicialComplex(faces, coords)
    return K


def complex_json(K: SimplicialComplex) -> dict:
    out = {"schema": SCHEMA, "kind": "simplicial", "faces": [list(f) for f in K.maximal_faces()]}
    if K.coords is not None:
        out["coords"] = {str(v): fmt_vec(p) for v, p in sorted(K.coords.items())}
    return out


def homology_json(h: HomologyResult) -> dict:
    return {
        "degrees": list(range(h.low, h.high + 1)),
        "betti": [h.betti.get(q, 0) for q in range(h.low, h.high + 1)],
        "torsion": [list(h.torsion.get(q, ())) for q in range(h.low, h.high + 1)],
    }


# -- module complexes ---------------------------------------------------------------


def _name_json(nm):
    if nm is None:
        return None
    if isinstance(nm, tuple):
        return list(nm)
    return nm


def module_complex_json(C: ModuleComplex) -> dict:
    terms = []
    for i, t in enumerate(C.terms):
        names = C.names[i] if C.names else [None] * len(t)
        terms.append([{"generators": module_json(M), "name": _name_json(nm)} for M, nm in zip(t, names)])
    maps = [[[r, c, v] for (r, c), v in sorted(f.items())] for f in C.maps]
    return {"schema": SCHEMA, "kind": "module-complex", "nvars": C.nvars, "terms": terms, "maps": maps}


def parse_module_complex(obj) -> ModuleComplex:
    _check_schema(obj)
    raw_terms = _require(obj, "terms")
    if not isinstance(raw_terms, list) or not raw_terms:
        raise SchemaError("terms", "expected a nonempty array of terms")
    terms, names = [], []
    for i, t in enumerate(raw_terms):
        if not isinstance(t, list):
            raise SchemaError(f"terms[{i}]", "expected an array of summands")
        mods, nms = [], []
        for j, s in enumerate(t):
            f = f"terms[{i}][{j}]"
            if not isinstance(s, dict):
                raise SchemaError(f, "expected an object with generators")
            gens = int_matrix(_require(s, "generators", f + "."), f + ".generators")
            try:
                mods.append(MonomialModule(gens))
            except ValueError as exc:
                raise SchemaError(f + ".generators", str(exc)) from None
            nm = s.get("name")
            nms.append(tuple(nm) if isinstance(nm, list) else nm)
        terms.append(mods)
        names.append(nms)
    raw_maps = _require(obj, "maps")
    if not isinstance(raw_maps, list):
        raise SchemaError("maps", "expected an array of entry lists")
    maps = []
    for i, m in enumerate(raw_maps):
        if not isinstance(m, list):
            raise SchemaError(f"maps[{i}]", "expected an array of [row, col, coeff] entries")
        f = {}
        for k, e in enumerate(m):
            e = int_list(e, f"maps[{i}][{k}]")
            if len(e) != 3:
                raise SchemaError(f"maps[{i}][{k}]", "expected [row, col, coeff]")
            f[(e[0], e[1])] = e[2]
        maps.append(f)
    try:
        return ModuleComplex(terms, maps, names)
    except ValueError as exc:
        raise SchemaError("maps", str(exc)) from None


def to_plain(x: Any):
    """Coerce Fractions and tuples into JSON-ready values."""
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, (list, tuple)):
        return [to_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): to_plain(v) for k, v in x.items()}
    return x
