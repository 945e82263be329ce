"""``cellres`` command line.

Exit status: 0 on success, 1 when a verification fails (a witness is
printed), 2 on unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import TextIO

from . import generators as gen
from .arrangement import all_shifts, subdivide, translate_refine
from .monomial import (
    bs_acyclicity,
    exactness_check,
    format_monomial,
    free_complex,
    label_complex,
    render_text,
)
from .multiplier import ROUTES, multiplier, skoda_from_ideal, summation_report
from .schema import (
    SCHEMA,
    SchemaError,
    arrangement_json,
    divisorial_json,
    homology_json,
    ideal_json,
    module_complex_json,
    module_json,
    parse_complex,
    parse_divisorial,
    parse_faces,
    parse_ideal,
    parse_module_complex,
    rational,
)
from .simplicial import barycentric_subdivision, boundary_complex, prop_m_check, reduced_homology

COMMANDS = ("subdivide", "resolve", "howald", "skoda", "homology", "prop-m", "verify-exact", "fuzz")
FUZZ_COMMANDS = ("howald", "resolve", "skoda", "prop-m")


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    format: str = "json"
    seed: int = 0
    shifts: str = "zero"
    alpha: str | None = None
    route: str = "all"
    check: bool = False
    complex: str | None = None
    delete: str | None = None
    ideal: str | None = None
    fuzz_command: str = "howald"
    max_instances: int = 100
    max_exponent: int = 5
    max_dims: int = 3
    threads: int = field(default_factory=lambda: _threads_from_env())


def _threads_from_env() -> int:
    raw = os.environ.get("CELLRES_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


class InputError(Exception):
    pass


def _load(path: str | None, what: str):
    if path is None:
        raise InputError(f"--{what} is required")
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# commands; each returns (exit status, json object, text)


def _cmd_subdivide(cfg: RunConfig):
    D = parse_divisorial(_load(cfg.input, "input"))
    if cfg.shifts == "all":
        C = translate_refine(D, all_shifts(D.r))
    elif cfg.shifts == "zero":
        C = subdivide(D)
    else:
        raise InputError(f"--shifts must be 'zero' or 'all', got {cfg.shifts!r}")
    obj = arrangement_json(C)
    lines = [f"{len(C)} cells " + " ".join(f"dim{d}:{k}" for d, k in sorted(C.count_by_dim().items()))]
    for cell in obj["cells"]:
        sig = " ".join(f"={z}" if kind == "exact" else f"({z},{z + 1})" for kind, z in cell["signature"])
        verts = " ".join("(" + ",".join(v) + ")" for v in cell["vertices"])
        lines.append(f"cell {cell['id']} dim {cell['dim']} [{sig}] {verts}")
    lines.append("faces " + " ".join(f"{p}<{q}" for p, q in obj["faces"]))
    return 0, obj, "\n".join(lines)


def _cmd_resolve(cfg: RunConfig):
    D = parse_divisorial(_load(cfg.input, "input"))
    L = label_complex(subdivide(D))
    C = free_complex(L)
    obj = module_complex_json(C)
    obj["data"] = divisorial_json(D)
    text = render_text(C)
    status = 0
    if cfg.check:
        ex = exactness_check(C)
        ac = bs_acyclicity(L)
        obj["checks"] = {
            "exactness": {"ok": ex.ok, "degrees": ex.degrees_checked, "detail": ex.detail},
            "acyclicity": {"ok": ac.ok, "checked": ac.checked,
                           "witness": list(ac.witness) if ac.witness else None},
        }
        text += f"\nexactness: {'pass' if ex.ok else 'FAIL ' + ex.detail}"
        text += f"\nacyclicity: {'pass' if ac.ok else 'FAIL at ' + format_monomial(ac.witness)}"
        status = 0 if ex.ok and ac.ok else 1
    return status, obj, text


def _cmd_howald(cfg: RunConfig):
    I = parse_ideal(_load(cfg.ideal or cfg.input, "ideal"))
    if cfg.alpha is None:
        raise InputError("--alpha is required")
    alpha = rational(cfg.alpha, "--alpha")
    if alpha <= 0:
        raise InputError("--alpha must be positive")
    if cfg.route not in ROUTES + ("all",):
        raise InputError(f"--route must be one of {', '.join(ROUTES + ('all',))}")
    obj = {"schema": SCHEMA, "kind": "multiplier", "ideal": ideal_json(I), "alpha": cfg.alpha}
    if cfg.route != "all":
        if I.aux is not None and cfg.route != "cellular":
            raise InputError(f"route {cfg.route} does not accept an auxiliary factor")
        M = multiplier(I, alpha, cfg.route)
        obj["route"] = cfg.route
        obj["generators"] = module_json(M)
        return 0, obj, f"{cfg.route}: {M!r}"
    rep = summation_report(I, alpha)
    obj["route"] = "all"
    obj["generators"] = module_json(rep.routes["cellular"])
    obj["routes"] = {k: module_json(v) for k, v in rep.routes.items()}
    obj["agree"] = rep.ok
    obj["translated"] = rep.translated
    obj["problems"] = rep.problems
    lines = [f"{k}: {v!r}" for k, v in rep.routes.items()]
    lines.append("routes agree" if rep.ok else "MISMATCH: " + "; ".join(rep.problems))
    return (0 if rep.ok else 1), obj, "\n".join(lines)


def _cmd_skoda(cfg: RunConfig):
    I = parse_ideal(_load(cfg.ideal or cfg.input, "ideal"))
    C = skoda_from_ideal(I)
    obj = module_complex_json(C)
    obj["ideal"] = ideal_json(I)
    text = render_text(C)
    status = 0
    if cfg.check:
        ex = exactness_check(C)
        obj["checks"] = {"exactness": {"ok": ex.ok, "degrees": ex.degrees_checked, "detail": ex.detail}}
        text += f"\nexactness: {'pass' if ex.ok else 'FAIL ' + ex.detail}"
        status = 0 if ex.ok else 1
    return status, obj, text


def _cmd_homology(cfg: RunConfig):
    K = parse_complex(_load(cfg.complex or cfg.input, "complex"))
    h = reduced_homology(K)
    obj = {"schema": SCHEMA, "kind": "homology", "reduced": True, **homology_json(h)}
    shown = range(0, h.high + 1) if h.high >= 0 else range(-1, 0)
    betti = ", ".join(str(h.betti.get(q, 0)) for q in shown)
    tors = [f"H{q}: " + ", ".join(f"Z/{t}" for t in h.torsion[q]) for q in sorted(h.torsion)]
    text = f"Betti ({betti})" + (" torsion " + "; ".join(tors) if tors else "")
    return 0, obj, text


def _cmd_prop_m(cfg: RunConfig):
    M = parse_complex(_load(cfg.complex or cfg.input, "complex"))
    S = parse_faces(_load(cfg.delete, "delete"), "faces")
    rep = prop_m_check(M, S)
    obj = {
        "schema": SCHEMA,
        "kind": "prop-m",
        "ok": rep.ok,
        "failure": rep.failure or None,
        "before": homology_json(rep.before) if rep.before is not None else None,
        "after": homology_json(rep.after) if rep.after is not None else None,
        "steps": len(rep.steps),
    }
    text = f"{'pass' if rep.ok else 'FAIL'}: {len(rep.steps)} deletion steps"
    if rep.before is not None:
        text += f"; before {rep.before}"
    if rep.after is not None:
        text += f"; after {rep.after}"
    if rep.failure:
        text += f"\n{rep.failure}"
    return (0 if rep.ok else 1), obj, text


def _cmd_verify_exact(cfg: RunConfig):
    C = parse_module_complex(_load(cfg.complex or cfg.input, "complex"))
    try:
        rep = exactness_check(C)
    except ValueError as exc:
        obj = {"schema": SCHEMA, "kind": "exactness", "ok": False, "detail": str(exc)}
        return 1, obj, f"FAIL: {exc}"
    obj = {
        "schema": SCHEMA,
        "kind": "exactness",
        "ok": rep.ok,
        "degrees": rep.degrees_checked,
        "failure": {"position": rep.failure[0], "degree": list(rep.failure[1])} if rep.failure else None,
        "detail": rep.detail,
    }
    text = "exact" if rep.ok else f"FAIL: {rep.detail}"
    return (0 if rep.ok else 1), obj, text


# ---------------------------------------------------------------------------
# fuzzing


def _fuzz_instances(cfg: RunConfig) -> list:
    rng = random.Random(cfg.seed)
    out = []
    for k in range(cfg.max_instances):
        if cfg.fuzz_command == "howald":
            I = gen.random_ideal(rng, cfg.max_dims, 4, cfg.max_exponent)
            out.append(("howald", I, gen.ALPHAS[k % len(gen.ALPHAS)]))
        elif cfg.fuzz_command == "resolve":
            out.append(("resolve", gen.random_divisorial(rng, cfg.max_dims, 4, 3, 3)))
        elif cfg.fuzz_command == "skoda":
            gens, aux = gen.random_principal_factors(rng, 3, cfg.max_dims, min(cfg.max_exponent, 3))
            out.append(("skoda", gens, aux))
        else:
            kind, P = gen.random_manifold(rng)
            M = barycentric_subdivision(P)
            S = gen.random_boundary_cocomplex(rng, boundary_complex(M), rng.choice((0.05, 0.2, 1.0)))
            out.append(("prop-m", kind, M, sorted(S)))
    return out


def _fuzz_one(inst) -> tuple[bool, str]:
    kind = inst[0]
    if kind == "howald":
        _, I, alpha = inst
        rep = summation_report(I, alpha)
        return rep.ok, f"{list(map(list, I.generators))} alpha={alpha}: " + ("ok" if rep.ok else "; ".join(rep.problems))
    if kind == "resolve":
        _, D = inst
        L = label_complex(subdivide(D))
        ac = bs_acyclicity(L)
        ex = exactness_check(free_complex(L))
        ok = ac.ok and ex.ok
        return ok, f"A={[list(r) for r in D.A]} alpha={D.alpha}: " + ("ok" if ok else f"acyclic={ac.ok} exact={ex.ok} {ex.detail}")
    if kind == "skoda":
        _, gens, aux = inst
        from .multiplier import skoda_complex

        ex = exactness_check(skoda_complex(gens, aux))
        return ex.ok, f"{gens} aux={aux}: " + ("ok" if ex.ok else ex.detail)
    _, name, M, S = inst
    rep = prop_m_check(M, S)
    return rep.ok, f"{name} |S|={len(S)}: " + ("ok" if rep.ok else rep.failure)


_FUZZ_SUMMARY = {
    "howald": "routes agree",
    "resolve": "resolutions exact and acyclic",
    "skoda": "Skoda complexes exact",
    "prop-m": "deletions preserve homology",
}


def _cmd_fuzz(cfg: RunConfig):
    if cfg.fuzz_command not in FUZZ_COMMANDS:
        raise InputError(f"--command must be one of {', '.join(FUZZ_COMMANDS)}")
    if cfg.max_instances < 1:
        raise InputError("--max-instances must be positive")
    insts = _fuzz_instances(cfg)
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(_fuzz_one, insts))
    else:
        results = [_fuzz_one(i) for i in insts]
    npass = sum(ok for ok, _ in results)
    n = len(results)
    summary = f"{npass}/{n} {_FUZZ_SUMMARY[cfg.fuzz_command]}"
    obj = {
        "schema": SCHEMA,
        "kind": "fuzz",
        "command": cfg.fuzz_command,
        "seed": cfg.seed,
        "instances": n,
        "passed": npass,
        "failures": [msg for ok, msg in results if not ok],
        "summary": summary,
    }
    lines = [f"# fuzz command={cfg.fuzz_command} seed={cfg.seed} instances={n}"]
    lines += [f"FAIL {msg}" for ok, msg in results if not ok]
    lines.append(summary)
    return (0 if npass == n else 1), obj, "\n".join(lines)


HANDLERS = {
    "subdivide": _cmd_subdivide,
    "resolve": _cmd_resolve,
    "howald": _cmd_howald,
    "skoda": _cmd_skoda,
    "homology": _cmd_homology,
    "prop-m": _cmd_prop_m,
    "verify-exact": _cmd_verify_exact,
    "fuzz": _cmd_fuzz,
}


def run(cfg: RunConfig, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    if cfg.format not in ("json", "text"):
        err.write(f"error: --format must be json or text, got {cfg.format!r}\n")
        return 2
    try:
        status, obj, text = HANDLERS[cfg.command](cfg)
    except (InputError, SchemaError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    payload = _dump(obj) if cfg.format == "json" else text + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(payload)
    else:
        out.write(payload)
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cellres", description="Cellular resolutions of multiplier ideals")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--input", help="input JSON file ('-' for stdin)")
        sp.add_argument("--output", help="write the result here instead of stdout")
        sp.add_argument("--format", default="json", choices=("json", "text"))
        return sp

    s = common(sub.add_parser("subdivide", help="subdivision of the simplex by the arrangement"))
    s.add_argument("--shifts", default="zero", choices=("zero", "all"))
    s = common(sub.add_parser("resolve", help="labeled cellular complex of divisorial data"))
    s.add_argument("--check", action="store_true", help="run exactness and acyclicity checks")
    s = common(sub.add_parser("howald", help="multiplier ideal of a monomial ideal"))
    s.add_argument("--ideal")
    s.add_argument("--alpha", required=True)
    s.add_argument("--route", default="all", choices=ROUTES + ("all",))
    s = common(sub.add_parser("skoda", help="Skoda complex of principal monomial factors"))
    s.add_argument("--ideal")
    s.add_argument("--check", action="store_true")
    s = common(sub.add_parser("homology", help="reduced integral homology"))
    s.add_argument("--complex")
    s = common(sub.add_parser("prop-m", help="delete boundary faces and compare homology"))
    s.add_argument("--complex")
    s.add_argument("--delete", required=True)
    s = common(sub.add_parser("verify-exact", help="degree-wise exactness of a module complex"))
    s.add_argument("--complex")
    s = common(sub.add_parser("fuzz", help="seeded random cross-validation"))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--command", dest="fuzz_command", default="howald", choices=FUZZ_COMMANDS)
    s.add_argument("--max-instances", type=int, default=100)
    s.add_argument("--max-exponent", type=int, default=5)
    s.add_argument("--max-dims", type=int, default=3)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if v is not None})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
