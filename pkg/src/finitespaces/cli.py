"""Command-line front end.

Exit codes: 0 Yes / WindowYes / success, 1 No, 2 Unknown, 3 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import classify, cohomology, homotopy, io, sheafmod
from .coeff.base import DegreeWindow
from .errors import FiniteSpaceError
from .space import flatness_report, is_finite_space
from .verdict import Value, Verdict

EXIT = {Value.YES: 0, Value.WINDOW_YES: 0, Value.NO: 1, Value.UNKNOWN: 2}
INPUT_ERROR = 3

SPACE_PREDICATES = {
    "finite": lambda X, w: is_finite_space(X),
    "quasicoherent-space": lambda X, w: classify.is_quasicoherent_space(X, w),
    "schematic": lambda X, w: classify.is_schematic(X, w),
    "schematic-general": lambda X, w: classify.is_schematic(X, w, method="general"),
    "semiseparated": lambda X, w: classify.is_semiseparated(X, w),
    "affine": lambda X, w: classify.is_affine_certified(X, None, w),
    "acyclic": lambda X, w: cohomology.is_acyclic(X, None, w),
}
MODULE_PREDICATES = {
    "quasicoherent": lambda M, w: sheafmod.is_quasicoherent(M, w),
    "finite-type": lambda M, w: sheafmod.is_finite_type(M, w),
    "coherent": lambda M, w: sheafmod.is_coherent(M, w),
}
MORPHISM_PREDICATES = {
    "schematic-morphism": lambda f, w: classify.is_schematic_morphism(f, w),
    "locally-acyclic": lambda f, w: classify.is_locally_acyclic(f, w),
    "affine-morphism": lambda f, w: classify.is_affine_morphism(f, w),
    "qc-isomorphism": lambda f, w: classify.is_qc_isomorphism(f, w),
    "topological-criterion": lambda f, w: classify.topological_criterion(f),
}


class InputError(Exception):
    pass


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _window(args, X):
    if getattr(args, "window", None):
        lo, hi = args.window
        return DegreeWindow(lo, hi)
    return X.window


def _load(path):
    return io.load(path)


def _pick(table, name, what, path):
    if name is None:
        if len(table) == 1:
            return next(iter(table.values()))
        raise InputError(f"{path}: choose a {what} with --{what} (available: {', '.join(table) or 'none'})")
    if name not in table:
        raise InputError(f"{path}: no {what} named {name!r} (available: {', '.join(table) or 'none'})")
    return table[name]


def _verdict_text(label, v: Verdict):
    return f"{label}: {v}"


# commands ----------------------------------------------------------------------

def cmd_validate(args) -> int:
    doc = _load(args.file)
    X = doc.space
    rep = flatness_report(X)
    fin = is_finite_space(X)
    payload = {
        "file": args.file,
        "backend": X.backend.name,
        "points": [io.point_name(p) for p in X.points],
        "dimension": X.poset.dimension(),
        "t0": X.poset.is_poset(),
        "flat": {f"{io.point_name(a)}->{io.point_name(b)}": v.value.value for (a, b), v in rep.items()},
        "finite_space": fin.to_dict(),
        "modules": sorted(doc.modules),
        "morphisms": sorted(doc.morphisms),
    }
    lines = [f"{args.file}: valid {X.backend.name} space with {len(X.points)} points, dimension {X.poset.dimension()}",
             f"  restrictions flat: {fin}"]
    for name in sorted(doc.modules):
        lines.append(f"  module {name}: valid")
    for name in sorted(doc.morphisms):
        lines.append(f"  morphism {name}: valid")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_check(args) -> int:
    doc = _load(args.file)
    X = doc.space
    w = _window(args, X)
    p = args.predicate
    if p in SPACE_PREDICATES:
        v = SPACE_PREDICATES[p](X, w)
        subject = X.name or args.file
    elif p in MODULE_PREDICATES:
        M = _pick(doc.modules, args.sheaf, "sheaf", args.file)
        v = MODULE_PREDICATES[p](M, w)
        subject = M.name
    elif p in MORPHISM_PREDICATES:
        f = _pick(doc.morphisms, args.morphism, "morphism", args.file)
        v = MORPHISM_PREDICATES[p](f, w)
        subject = args.morphism or next(iter(doc.morphisms))
    else:
        raise InputError(f"unknown predicate {p!r}")
    _emit(args, {"predicate": p, "subject": subject, "verdict": v.to_dict()}, _verdict_text(f"{p}({subject})", v))
    return EXIT[v.value]


def cmd_cohomology(args) -> int:
    doc = _load(args.file)
    X = doc.space
    w = _window(args, X)
    if args.sheaf:
        F = _pick(doc.modules, args.sheaf, "sheaf", args.file)
    else:
        F = sheafmod.structure_sheaf(X)
    U = None
    if args.open:
        U = [p.strip() for p in args.open.split(",")]
        if not X.poset.is_open(U):
            raise InputError(f"--open {args.open}: not an open subset")
    rep = cohomology.cohomology_report(F, U, w)
    lines = [f"H^i({'U' if U else 'X'}, {F.name})" + (f" on window {list(rep.window)}" if rep.window else "")]
    for i in sorted(rep.text):
        lines.append(f"  H^{i} = {rep.text[i]}")
    _emit(args, {"sheaf": F.name, "open": U, **rep.to_dict()}, "\n".join(lines))
    return 0


def cmd_core(args) -> int:
    doc = _load(args.file)
    res = homotopy.core(doc.space, args.seed)
    out = io.space_to_dict(res.core)
    trace = [{"point": io.point_name(b.point), "kind": b.kind, "partner": io.point_name(b.partner)} for b in res.trace]
    if args.output:
        io.save(out, args.output)
    payload = {"trace": trace, "core": out}
    lines = [f"core of {args.file}: {len(res.core.points)} of {len(doc.space.points)} points"]
    for t in trace:
        lines.append(f"  removed {t['kind']} beat point {t['point']} (partner {t['partner']})")
    if not args.output:
        lines.append(io.dumps(out).rstrip())
    else:
        lines.append(f"  core written to {args.output}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_hequiv(args) -> int:
    X = _load(args.file_a).space
    Y = _load(args.file_b).space
    v = homotopy.homotopy_equivalent(X, Y, args.budget)
    _emit(args, {"verdict": v.to_dict()}, _verdict_text("homotopy equivalent", v))
    return EXIT[v.value]


def cmd_fprod(args) -> int:
    dx, dy = _load(args.file_x), _load(args.file_y)
    f = _pick(dx.morphisms, args.f, "f", args.file_x)
    g = _pick(dy.morphisms, args.g, "g", args.file_y)
    if args.file_s:
        S = _load(args.file_s).space
        if f.target.poset != S.poset or g.target.poset != S.poset:
            raise InputError("morphism targets differ from the base space")
    res = classify.schematic_fibered_product(f, g, args.window and DegreeWindow(*args.window))
    Z = res.product.space
    out = io.space_to_dict(Z)
    if args.output:
        io.save(out, args.output)
    cert = {k: v.to_dict() for k, v in res.certificates.items()}
    lines = [f"fibered product: {len(Z.points)} points"]
    lines += [f"  {k}: {v}" for k, v in res.certificates.items()]
    if not args.output:
        lines.append(io.dumps(out).rstrip())
    _emit(args, {"certificates": cert, "product": out}, "\n".join(lines))
    bad = [v for v in res.certificates.values() if v.value in (Value.NO, Value.UNKNOWN)]
    if any(v.is_no for v in bad):
        return 1
    return 2 if bad else 0


def cmd_stein(args) -> int:
    doc = _load(args.file)
    f = _pick(doc.morphisms, args.morphism, "morphism", args.file)
    w = args.window and DegreeWindow(*args.window)
    sf = classify.stein_factorization(f, w)
    name = args.morphism or next(iter(doc.morphisms))
    tgt = next((m.get("target") for m in doc.raw.get("morphisms", []) if m.get("name", "") == name), None)
    target_path = os.path.join(os.path.dirname(args.file), tgt) if tgt else args.file
    out_dir = os.path.dirname(args.output) if args.output else os.getcwd()
    out = io.space_to_dict(sf.middle, {"g": (sf.second, os.path.relpath(target_path, out_dir or "."))})
    if args.output:
        io.save(out, args.output)
    first = {io.point_name(x): io.point_name(sf.first(x)) for x in f.source.points}
    lines = [f"Stein factorization of {name}: Y' has {len(sf.middle.points)} points"]
    lines += [f"  {k}: {v}" for k, v in sf.certificates.items()]
    if not args.output:
        lines.append(io.dumps(out).rstrip())
    _emit(args, {"certificates": {k: v.to_dict() for k, v in sf.certificates.items()}, "first": first,
                 "middle": out}, "\n".join(lines))
    vals = [v.value for v in sf.certificates.values()]
    if Value.NO in vals:
        return 1
    return 2 if Value.UNKNOWN in vals else 0


# parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="finitespaces", description="Computations on ringed finite spaces.")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    def win(p):
        p.add_argument("--window", nargs=2, type=int, metavar=("LO", "HI"), help="degree window (graded backend)")

    p = sub.add_parser("validate", help="parse and validate a document")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="run a predicate")
    p.add_argument("file")
    p.add_argument("predicate", choices=sorted(list(SPACE_PREDICATES) + list(MODULE_PREDICATES) + list(MORPHISM_PREDICATES)))
    p.add_argument("--sheaf")
    p.add_argument("--morphism")
    win(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cohomology", help="cohomology table of O or of a sheaf")
    p.add_argument("file")
    p.add_argument("--sheaf")
    p.add_argument("--open", help="comma-separated points of an open subset")
    win(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("core", help="beat-point reduction to the core")
    p.add_argument("file")
    p.add_argument("--seed", type=int)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("hequiv", help="homotopy equivalence via cores")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--budget", type=int, default=200000)
    p.set_defaults(func=cmd_hequiv)

    p = sub.add_parser("fprod", help="fibered product X x_S Y with certificates")
    p.add_argument("file_x")
    p.add_argument("file_y")
    p.add_argument("file_s", nargs="?")
    p.add_argument("--f", help="morphism X -> S in the X document")
    p.add_argument("--g", help="morphism Y -> S in the Y document")
    p.add_argument("--output", "-o")
    win(p)
    p.set_defaults(func=cmd_fprod)

    p = sub.add_parser("stein", help="Stein factorization of a morphism")
    p.add_argument("file")
    p.add_argument("morphism", nargs="?")
    p.add_argument("--output", "-o")
    win(p)
    p.set_defaults(func=cmd_stein)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else 0
    try:
        return args.func(args)
    except (FiniteSpaceError, InputError, OSError, KeyError, ValueError, TypeError) as e:
        msg = f"error: {e}"
        if getattr(args, "json", False):
            print(json.dumps({"error": str(e), "kind": type(e).__name__}))
        else:
            print(msg, file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
