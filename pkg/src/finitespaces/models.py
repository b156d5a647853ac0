"""Canonical fixtures: classical finite topological spaces and finite models
of schemes, each with its documented classification table."""
from __future__ import annotations

from typing import Mapping, Optional

from . import coeff
from .coeff import findimq as fq
from .coeff import graded as gr
from .coeff.base import RingHom
from .errors import ValidationError
from .poset import build_preorder, chain_poset
from .sheafmod import SheafModule, make_restriction
from .space import RingedSpace, SpaceMorphism, as_finite_space, base_ring, global_sections, punctual, structure_map

GB = coeff.GB

__all__ = [
    "punctual", "cone", "chain_space", "pseudocircle", "p1_model", "twist", "twist_window",
    "doubled_origin_line", "doubled_origin_plane", "qc_refinement", "dual_point", "two_point_spec",
    "EXPECTED", "fixtures_dir",
]


def cone(X: RingedSpace, apex="apex", ring=None, maps: Mapping = None, name="") -> RingedSpace:
    """X with a new minimum below every point. The apex ring defaults to the
    global sections of O over X with their restriction maps."""
    if apex in X.poset:
        raise ValidationError(f"apex id {apex!r} already used")
    if ring is None:
        ring, maps = global_sections(X)
    elif maps is None:
        if X.backend is not coeff.ZB:
            raise ValidationError("apex maps are required off the ZConst backend")
        maps = {x: RingHom(ring, X.ring(x)) for x in X.points}
    pts = [apex] + list(X.points)
    rels = list(X.poset.relation_pairs()) + [(apex, x) for x in X.points]
    P = build_preorder(pts, rels)
    rings = {apex: ring, **X.rings}
    res = {}
    for p, q in P.covers():
        res[(p, q)] = maps[q] if p == apex else X.res(p, q)
    return RingedSpace(P, rings, res, X.window, name or f"cone({X.name})")


def chain_space(n: int, rings=None, restrictions: Mapping = None, prefix="c", window=None) -> RingedSpace:
    """The chain c0 < c1 < ... < cn, constant Z unless rings are given
    (a list, one per point, with restrictions on consecutive pairs)."""
    P = chain_poset(n, prefix)
    pts = P.sorted_points()
    if rings is None:
        return RingedSpace(P, {p: coeff.ZZ for p in pts}, {}, window, f"chain({n})")
    rings = dict(zip(pts, rings))
    res = {}
    for (a, b), h in (restrictions or {}).items():
        res[(f"{prefix}{a}", f"{prefix}{b}")] = h
    return RingedSpace(P, rings, res, window, f"chain({n})")


def pseudocircle() -> RingedSpace:
    """u, v < w1, w2 with constant Z: a finite model of the circle."""
    P = build_preorder(["u", "v", "w1", "w2"], [("u", "w1"), ("u", "w2"), ("v", "w1"), ("v", "w2")])
    return RingedSpace(P, {p: coeff.ZZ for p in P.points}, {}, None, "pseudocircle")


# projective line ------------------------------------------------------------------

def twist_window(n: int):
    return (-abs(n) - 2, abs(n) + 2)


def p1_model(window=(-4, 4)) -> RingedSpace:
    """x1, x2 < x12 with O = k[t], k[t^-1], k[t, t^-1]: the two affine charts
    of the projective line and their intersection."""
    P = build_preorder(["x1", "x2", "x12"], [("x1", "x12"), ("x2", "x12")])
    R1, R2, R12 = gr.MonomialRing("+", ["t"]), gr.MonomialRing("-", ["t"]), gr.MonomialRing("*", ["t"])
    res = {("x1", "x12"): GB.inclusion(R1, R12), ("x2", "x12"): GB.inclusion(R2, R12)}
    X = RingedSpace(P, {"x1": R1, "x2": R2, "x12": R12}, res, window, "P1")
    return as_finite_space(X)


def twist(n: int, X: Optional[RingedSpace] = None) -> SheafModule:
    """O(n): free of rank one on each chart, generator of degree n on the
    x2 chart, so that the transition on the x2 edge is multiplication by t^n.
    Without X, a projective-line model with window [-|n|-2, |n|+2] is built."""
    if X is None:
        X = p1_model(twist_window(n))
    R1, R2, R12 = X.ring("x1"), X.ring("x2"), X.ring("x12")
    st = {"x1": gr.twisted(R1, (0,)), "x2": gr.twisted(R2, (n,)), "x12": gr.twisted(R12, (0,))}
    res = {(p, "x12"): make_restriction(st[p], st["x12"], X.res(p, "x12"), [[1]]) for p in ("x1", "x2")}
    return SheafModule(X, st, res, f"O({n})")


# doubled origins --------------------------------------------------------------------

def doubled_origin_line(window=(-3, 3)) -> RingedSpace:
    """u1, u2 < g with O = k[t], k[t], k[t, t^-1]: two affine lines glued
    along the punctured line."""
    P = build_preorder(["u1", "u2", "g"], [("u1", "g"), ("u2", "g")])
    A, L = gr.MonomialRing("+", ["t"]), gr.MonomialRing("*", ["t"])
    res = {("u1", "g"): GB.inclusion(A, L), ("u2", "g"): GB.inclusion(A, L)}
    return as_finite_space(RingedSpace(P, {"u1": A, "u2": A, "g": L}, res, window, "line with doubled origin"))


def doubled_origin_plane(window=(-3, 3)) -> RingedSpace:
    """u1, u2 < dx, dy < dxy with O = k[x,y] (twice), k[x,y,1/x], k[x,y,1/y],
    k[x,y,1/xy]: two affine planes glued along the punctured plane, which is
    covered by the charts x != 0 and y != 0."""
    P = build_preorder(["u1", "u2", "dx", "dy", "dxy"],
                       [(u, d) for u in ("u1", "u2") for d in ("dx", "dy")] + [("dx", "dxy"), ("dy", "dxy")])
    names = ["x", "y"]
    A = gr.MonomialRing("++", names)
    Rx, Ry, Rxy = gr.MonomialRing("*+", names), gr.MonomialRing("+*", names), gr.MonomialRing("**", names)
    rings = {"u1": A, "u2": A, "dx": Rx, "dy": Ry, "dxy": Rxy}
    res = {(p, q): GB.inclusion(rings[p], rings[q]) for p, q in P.covers()}
    return as_finite_space(RingedSpace(P, rings, res, window, "plane with doubled origin"))


def qc_refinement(window=(-3, 3)) -> SpaceMorphism:
    """A finer model of the affine plane mapping to a coarser one:
    a < dx, dy < dxy (O = k[x,y], k[x,y,1/x], k[x,y,1/y], k[x,y,1/xy]) onto
    a < dx (O = k[x,y], k[x,y,1/x]), sending dy to a and dxy to dx."""
    names = ["x", "y"]
    A = gr.MonomialRing("++", names)
    Rx, Ry, Rxy = gr.MonomialRing("*+", names), gr.MonomialRing("+*", names), gr.MonomialRing("**", names)
    P = build_preorder(["a", "dx", "dy", "dxy"], [("a", "dx"), ("a", "dy"), ("dx", "dxy"), ("dy", "dxy")])
    rings = {"a": A, "dx": Rx, "dy": Ry, "dxy": Rxy}
    X = RingedSpace(P, rings, {(p, q): GB.inclusion(rings[p], rings[q]) for p, q in P.covers()}, window, "fine")
    Q = build_preorder(["a", "dx"], [("a", "dx")])
    Y = RingedSpace(Q, {"a": A, "dx": Rx}, {("a", "dx"): GB.inclusion(A, Rx)}, window, "coarse")
    pm = {"a": "a", "dx": "dx", "dy": "a", "dxy": "dx"}
    co = {x: GB.inclusion(Y.ring(pm[x]), X.ring(x)) for x in X.points}
    return SpaceMorphism(as_finite_space(X), as_finite_space(Y), pm, co)


# small FinDimQ spaces ---------------------------------------------------------------

def dual_point() -> RingedSpace:
    """(*, Q[e]/e^2)."""
    return punctual(fq.dual_numbers(), "*")


def two_point_spec() -> RingedSpace:
    """s < g with O = Q x Q -> Q (projection to the first factor): the
    open point of Spec(Q x Q) over the whole."""
    P = build_preorder(["s", "g"], [("s", "g")])
    A = fq.product_algebra([fq.field(), fq.field()])
    k = fq.field()
    proj = RingHom(A, k, coeff.Mat([[1, 0]], 1, 2), True)
    return RingedSpace(P, {"s": A, "g": k}, {("s", "g"): proj}, None, "Spec(QxQ) open point")


# classification tables -----------------------------------------------------------------

EXPECTED = {
    "pseudocircle": {
        "H": {"0": "Z", "1": "Z"},
        "core_size": 4,
        "schematic": "No",
        "affine": "No",
    },
    "P1": {
        "h0": {"0": 1, "1": 2, "2": 3, "3": 4},
        "h1": {"-2": 1, "-3": 2, "-4": 3},
        "schematic": "WindowYes",
        "semiseparated": "WindowYes",
        "affine": "Unknown",
    },
    "doubled_origin_line": {
        "schematic": "WindowYes",
        "semiseparated": "WindowYes",
    },
    "doubled_origin_plane": {
        "schematic": "WindowYes",
        "semiseparated": "No",
        "semiseparated_witness": {"pair": ["u1", "u2"], "degree": 1, "graded_degree": [-1, -1], "dimension": 1},
    },
    "qc_refinement": {
        "qc_isomorphism": "WindowYes",
    },
}


def fixtures_dir() -> str:
    """Directory of the fixture documents shipped with the package."""
    import os

    return os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")
