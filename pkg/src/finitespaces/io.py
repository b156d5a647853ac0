"""Reading and writing space documents (TOML or JSON).

A document describes one ringed finite space, optionally with sheaves of
modules on it and morphisms out of it::

    format = 1
    backend = "GradedMonomial"        # or "ZConst", "FinDimQ"
    name = "P1"
    window = [-4, 4]                  # degree window (graded backend)
    points = ["x1", "x2", "x12"]
    relations = [["x1", "x12"], ["x2", "x12"]]   # generating relations a <= b

    [ring_defs.A]                     # graded: sign pattern per variable
    signs = "+"
    [rings]                           # ring of each point (omit on ZConst)
    x1 = "A"

    [[restrictions]]                  # on generating relations; the matrix may
    from = "x1"                       # be omitted for identity-lattice or
    to = "x12"                        # identical-ring inclusions
    matrix = [[1]]

    [[modules]]
    name = "O(2)"
    stalks = { x1 = { shifts = [[0]] }, x2 = { shifts = [[2]] }, x12 = { shifts = [[0]] } }
    [[modules.restrictions]]
    from = "x2"
    to = "x12"
    matrix = [[1]]

    [[morphisms]]
    name = "f"
    target = "other.toml"             # path relative to this document
    points = { x1 = "p" }
    comorphisms = { x1 = [[1]] }      # optional on ZConst

FinDimQ ring definitions use ``preset`` ("Q", "dual", "trunc:n", "split:n"),
``product = ["A", "B"]`` or explicit ``unit``/``mult``/``labels``
(``mult[i][j]`` is the coordinate vector of e_i e_j; entries may be
fraction strings such as "1/2"). ZConst stalks are strings such as
"Z^2 + Z/2" or tables ``{ gens = 2, relations = [[2, 0]] }`` (each
relation a list of coefficients). FinDimQ stalks are "free:n" or
``{ dim = n, actions = [...] }``. Graded stalks are ``{ shifts = [...] }``
(summands with the ring's own pattern) or ``{ summands = [[shift, pattern], ...] }``.
An ``[expected]`` table is carried along untouched.
"""
from __future__ import annotations

import json
import os
import re
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Tuple

from . import coeff
from .coeff import findimq as fq
from .coeff import graded as gr
from .coeff.base import BACKENDS, FINDIMQ, GRADED, ZCONST, ModMap, RingHom
from .coeff.matrix import Mat
from .errors import FiniteSpaceError, ParseError, ValidationError
from .poset import build_preorder
from .sheafmod import SheafModule, make_restriction
from .space import RingedSpace, SpaceMorphism

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import tomli_w

FORMAT_VERSION = 1


class Document:
    """A parsed document: the space, its named modules and morphisms."""

    def __init__(self, space, modules, morphisms, raw, path=None):
        self.space = space
        self.modules: Dict[str, SheafModule] = modules
        self.morphisms: Dict[str, SpaceMorphism] = morphisms
        self.raw = raw
        self.path = path

    @property
    def expected(self):
        return self.raw.get("expected", {})


# low level ---------------------------------------------------------------------

def _frac(x, where):
    if isinstance(x, bool):
        raise ParseError(f"{where}: expected a number, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            v = Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{where}: cannot read {x!r} as a rational number") from None
        return v.numerator if v.denominator == 1 else v
    if isinstance(x, float) and x.is_integer():
        return int(x)
    raise ParseError(f"{where}: expected an integer or a fraction string, got {x!r}")


def _matrix(rows, where, nrows=None, ncols=None) -> Mat:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise ParseError(f"{where}: a matrix is a list of rows")
    data = [[_frac(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]
    nr = len(data) if nrows is None else nrows
    nc = (len(data[0]) if data else 0) if ncols is None else ncols
    if len(data) != nr or any(len(r) != nc for r in data):
        raise ParseError(f"{where}: expected a {nr}x{nc} matrix")
    return Mat(data, nr, nc)


def _num_out(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _matrix_out(M: Mat):
    return [[_num_out(M[i, j]) for j in range(M.ncols)] for i in range(M.nrows)]


def point_name(p) -> str:
    if isinstance(p, tuple):
        return "(" + ",".join(point_name(x) for x in p) + ")"
    return str(p)


# loading --------------------------------------------------------------------------

def load_raw(path: str) -> dict:
    with open(path, "rb") as fh:
        data = fh.read()
    return loads_raw(data.decode("utf-8"), path)


def loads_raw(text: str, source: str = "<string>") -> dict:
    if source.endswith(".json"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, e.lineno, e.colno, source) from None
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        msg = str(e)
        m = re.search(r"\(at line (\d+), column (\d+)\)", msg)
        if m:
            raise ParseError(msg[: m.start()].strip(), int(m.group(1)), int(m.group(2)), source) from None
        if "(at end of document)" in msg:
            lines = text.split("\n")
            raise ParseError(msg.replace("(at end of document)", "").strip(), len(lines), len(lines[-1]) + 1,
                             source) from None
        raise ParseError(msg, source=source) from None


def load(path: str, _stack=()) -> Document:
    raw = load_raw(path)
    return from_dict(raw, path, _stack)


def _ring_def(defs, name, backend, where, cache):
    if name in cache:
        return cache[name]
    if name not in defs:
        raise ParseError(f"{where}: unknown ring definition {name!r}")
    d = defs[name]
    w = f"ring_defs.{name}"
    if backend == GRADED:
        if "signs" not in d:
            raise ParseError(f"{w}: graded rings need a 'signs' pattern")
        R = gr.MonomialRing(list(d["signs"]), d.get("names"))
    else:
        if "preset" in d:
            pre = str(d["preset"])
            kind, _, arg = pre.partition(":")
            if kind == "Q":
                R = fq.field()
            elif kind == "dual":
                R = fq.dual_numbers()
            elif kind == "trunc":
                R = fq.truncated_polynomial(int(arg or 2))
            elif kind == "split":
                R = fq.split_algebra(int(arg or 2))
            else:
                raise ParseError(f"{w}: unknown preset {pre!r}")
        elif "product" in d:
            R = fq.product_algebra([_ring_def(defs, n, backend, w, cache) for n in d["product"]])
        else:
            for key in ("unit", "mult"):
                if key not in d:
                    raise ParseError(f"{w}: missing {key!r}")
            unit = [_frac(x, f"{w}.unit") for x in d["unit"]]
            mult = [[[_frac(x, f"{w}.mult") for x in v] for v in row] for row in d["mult"]]
            R = fq.QAlgebra(mult, unit, d.get("labels"))
    cache[name] = R
    return R


def _ring_hom(S, T, backend, mat, where):
    if backend == ZCONST:
        return RingHom(S, T)
    if backend == GRADED:
        M = _matrix(mat, where, T.m, S.m) if mat is not None else Mat.identity(S.m)
        return RingHom(S, T, M, True)
    if mat is None:
        if S != T:
            raise ParseError(f"{where}: a matrix is required between different algebras")
        return coeff.QB.identity_hom(S)
    return RingHom(S, T, _matrix(mat, where, T.dim, S.dim), True)


_ZTERM = re.compile(r"^\s*Z(?:\^(\d+)|/(\d+))?\s*$")


def _zmodule(spec, where):
    if isinstance(spec, str):
        gens, rels = 0, []
        if spec.strip() == "0":
            return coeff.ZModule(0)
        for term in spec.split("+"):
            m = _ZTERM.match(term)
            if not m:
                raise ParseError(f"{where}: cannot read abelian group term {term.strip()!r}")
            if m.group(2):
                rels.append((gens, int(m.group(2))))
                gens += 1
            else:
                gens += int(m.group(1) or 1)
        cols = []
        for g, n in rels:
            col = [0] * gens
            col[g] = n
            cols.append(col)
        return coeff.ZModule(gens, Mat.from_columns(cols, gens) if cols else None)
    n = int(spec.get("gens", 0))
    rels = spec.get("relations", [])
    cols = [[_frac(x, f"{where}.relations") for x in r] for r in rels]
    if any(len(c) != n for c in cols):
        raise ParseError(f"{where}: each relation needs {n} coefficients")
    return coeff.ZModule(n, Mat.from_columns(cols, n) if cols else None)


def _stalk(spec, R, backend, where):
    if backend == ZCONST:
        return _zmodule(spec, where)
    if backend == FINDIMQ:
        if isinstance(spec, str):
            kind, _, arg = spec.partition(":")
            if kind == "free":
                return fq.free_module(R, int(arg or 1))
            if kind == "R":
                return fq.free_module(R, 1)
            raise ParseError(f"{where}: unknown module {spec!r}")
        n = int(spec["dim"])
        acts = [_matrix(a, f"{where}.actions[{i}]", n, n) for i, a in enumerate(spec["actions"])]
        return fq.QModule(R, n, acts)
    if isinstance(spec, str):
        raise ParseError(f"{where}: graded stalks are tables with 'shifts' or 'summands'")
    if "shifts" in spec:
        return gr.GModule(R, [(tuple(s), R.signs) for s in spec["shifts"]])
    return gr.GModule(R, [(tuple(s), list(q)) for s, q in spec.get("summands", [])])


def from_dict(raw: Mapping, path: Optional[str] = None, _stack=()) -> Document:
    fmt = raw.get("format", FORMAT_VERSION)
    if fmt != FORMAT_VERSION:
        raise ParseError(f"unsupported format version {fmt!r}", source=path)
    backend = raw.get("backend", ZCONST)
    if backend not in BACKENDS:
        raise ParseError(f"unknown backend {backend!r}; expected one of {', '.join(BACKENDS)}", source=path)
    pts = raw.get("points")
    if not isinstance(pts, list) or not pts:
        raise ParseError("'points' must be a non-empty list of ids", source=path)
    pts = [str(p) for p in pts]
    rels = raw.get("relations", [])
    for k, r in enumerate(rels):
        if not (isinstance(r, list) and len(r) == 2):
            raise ParseError(f"relations[{k}] must be a pair [a, b]", source=path)
    P = build_preorder(pts, [(str(a), str(b)) for a, b in rels])
    defs = raw.get("ring_defs", {})
    cache = {}
    if backend == ZCONST:
        rings = {p: coeff.ZZ for p in pts}
    else:
        rmap = raw.get("rings", {})
        if "*" in rmap:
            rmap = {**{p: rmap["*"] for p in pts}, **{k: v for k, v in rmap.items() if k != "*"}}
        rings = {}
        for p in pts:
            if p not in rmap:
                raise ParseError(f"rings: no ring given for point {p!r}", source=path)
            rings[p] = _ring_def(defs, rmap[p], backend, f"rings.{p}", cache)
    res = {}
    given = raw.get("restrictions", [])
    for k, r in enumerate(given):
        a, b = str(r["from"]), str(r["to"])
        if a not in P or b not in P:
            raise ParseError(f"restrictions[{k}]: unknown point", source=path)
        res[(a, b)] = _ring_hom(rings[a], rings[b], backend, r.get("matrix"), f"restrictions[{k}].matrix")
    # identity-lattice / identical-ring defaults on covers not listed
    for a, b in P.covers():
        if (a, b) in res:
            continue
        if backend == GRADED or (backend == FINDIMQ and rings[a] == rings[b]):
            res[(a, b)] = _ring_hom(rings[a], rings[b], backend, None, f"restriction {a}->{b}")
    window = raw.get("window")
    X = RingedSpace(P, rings, {e: h for e, h in res.items()}, tuple(window) if window else None, raw.get("name", ""))
    modules = {}
    for k, m in enumerate(raw.get("modules", [])):
        name = m.get("name", f"M{k}")
        st = m.get("stalks", {})
        stalks = {}
        for p in pts:
            if p not in st:
                raise ParseError(f"modules[{k}] ({name}): no stalk at {p!r}", source=path)
            stalks[p] = _stalk(st[p], rings[p], backend, f"modules[{k}].stalks.{p}")
        mres = {}
        for j, r in enumerate(m.get("restrictions", [])):
            a, b = str(r["from"]), str(r["to"])
            where = f"modules[{k}].restrictions[{j}]"
            if a not in P or b not in P:
                raise ParseError(f"{where}: unknown point", source=path)
            mat = r.get("matrix")
            if mat is None:
                raise ParseError(f"{where}: matrix required", source=path)
            mres[(a, b)] = make_restriction(stalks[a], stalks[b], X.res(a, b), _matrix(mat, where))
        modules[name] = SheafModule(X, stalks, mres, name)
    morphisms = {}
    for k, m in enumerate(raw.get("morphisms", [])):
        name = m.get("name", f"f{k}")
        tgt = m.get("target")
        if tgt is None:
            Y = X
        else:
            tpath = os.path.join(os.path.dirname(path or "."), tgt)
            key = os.path.abspath(tpath)
            if key in _stack:
                raise ParseError(f"morphisms[{k}]: circular target reference {tgt!r}", source=path)
            Y = load(tpath, _stack + (os.path.abspath(path or "."),)).space
        pm = {str(a): str(b) for a, b in m.get("points", {}).items()}
        co = {}
        for x, mat in m.get("comorphisms", {}).items():
            x = str(x)
            if x not in pm:
                raise ParseError(f"morphisms[{k}]: comorphism at unmapped point {x!r}", source=path)
            co[x] = _ring_hom(Y.ring(pm[x]), X.ring(x), backend, mat, f"morphisms[{k}].comorphisms.{x}")
        for x in pts:
            if x not in co and x in pm and backend != ZCONST:
                S, T = Y.ring(pm[x]), X.ring(x)
                if backend == GRADED or S == T:
                    co[x] = _ring_hom(S, T, backend, None, f"morphisms[{k}].comorphisms.{x}")
        morphisms[name] = SpaceMorphism(X, Y, pm, co)
    return Document(X, modules, morphisms, dict(raw), path)


# writing ---------------------------------------------------------------------------

def _ring_out(R, backend):
    if backend == GRADED:
        return {"signs": "".join(R.signs), "names": list(R.names)}
    return {
        "unit": [_num_out(x) for x in R.unit],
        "mult": [[[_num_out(x) for x in v] for v in row] for row in R.mult],
        "labels": list(R.labels),
    }


def space_to_dict(X: RingedSpace, morphisms: Mapping[str, Tuple[SpaceMorphism, str]] = None) -> dict:
    """Document for X; ``morphisms`` maps names to (morphism, target path)."""
    B = X.backend
    backend = B.name
    pts = X.points
    names = {p: point_name(p) for p in pts}
    if len(set(names.values())) != len(pts):
        raise ValidationError("point ids collide after conversion to strings")
    doc: Dict[str, Any] = {"format": FORMAT_VERSION, "backend": backend}
    if X.name:
        doc["name"] = X.name
    if X.window is not None:
        doc["window"] = list(X.window.as_tuple())
    doc["points"] = [names[p] for p in pts]
    doc["relations"] = [[names[a], names[b]] for a, b in X.covers()]
    if backend != ZCONST:
        defs, rmap = {}, {}
        seen: List = []
        for p in pts:
            R = X.ring(p)
            for i, S in enumerate(seen):
                if S == R:
                    rmap[names[p]] = f"R{i}"
                    break
            else:
                seen.append(R)
                rmap[names[p]] = f"R{len(seen) - 1}"
                defs[f"R{len(seen) - 1}"] = _ring_out(R, backend)
        doc["ring_defs"] = defs
        doc["rings"] = rmap
        doc["restrictions"] = [{"from": names[a], "to": names[b], "matrix": _matrix_out(X.res(a, b).data)}
                               for a, b in X.covers()]
    if morphisms:
        out = []
        for name, (f, tpath) in morphisms.items():
            d = {"name": name, "target": tpath,
                 "points": {names[x]: point_name(f(x)) for x in pts}}
            if backend != ZCONST:
                d["comorphisms"] = {names[x]: _matrix_out(f.co(x).data) for x in pts}
            out.append(d)
        doc["morphisms"] = out
    return doc


def dumps(doc: Mapping, fmt: str = "toml") -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    return tomli_w.dumps(doc)


def save(doc: Mapping, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc, "json" if path.endswith(".json") else "toml"))
