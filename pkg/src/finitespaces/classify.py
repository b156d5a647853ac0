"""Classification predicates for finite spaces and morphisms: quasi-coherent,
schematic and semi-separated spaces, affine certification, schematic,
locally acyclic, affine and qc-isomorphic morphisms, Stein factorization and
schematic fibered products."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import coeff
from .coeff import qmat
from .coeff.base import ModMap, RingHom, as_window
from .coeff.matrix import Mat
from .cohomology import comparison_failures, is_acyclic, standard_complex, complex_cohomology, vanishing_witness
from .errors import BackendLimitation, ValidationError, WindowRequired
from .homotopy import core
from .poset import sort_points
from .sheafmod import (SheafModule, pushforward, reinterpret, sections_over, stalkwise_iso, structure_sheaf)
from .space import (FiberedProduct, RingedSpace, SpaceMorphism, as_finite_space, compose, fibered_product_space,
                    global_sections, is_finite_space)
from .verdict import Value, Verdict, conjunction, no, unknown, yes


def _window(X, window):
    w = as_window(window) or X.window
    if X.backend is coeff.GB and w is None:
        raise WindowRequired("classification")
    return w


def _ok(X, w, rule):
    return yes(rule, w.as_tuple() if (X.backend is coeff.GB and w is not None) else None)


def _U(X, p, q):
    return sort_points(X.poset.min_open(p) & X.poset.min_open(q))


# spaces -------------------------------------------------------------------------

def _diagonal_check(X: RingedSpace, degrees, w):
    """First (p, q, p', i, witness) where H^i(U_pq) (x)_{O_p} O_p' -> H^i(U_p'q)
    is not an isomorphism, over covers p <= p'."""
    O = structure_sheaf(X)
    for p in X.points:
        for q in X.points:
            V = _U(X, p, q)
            phis = {x: X.res(p, x) for x in V}
            for p2 in X.poset.upper_covers(p):
                V2 = _U(X, p2, q)
                phis2 = {x: X.res(p2, x) for x in V2}
                bad = comparison_failures(O, V, X.ring(p), phis, V2, X.ring(p2), phis2, X.res(p, p2), degrees, w)
                if bad:
                    i, wit = bad[0]
                    return (p, q, p2, i, wit)
    return None


def is_quasicoherent_space(X: RingedSpace, window=None) -> Verdict:
    """O_pq (x)_{O_p} O_p' -> O_p'q is an isomorphism for all q and p <= p',
    with O_pq the sections of O over U_p n U_q."""
    w = _window(X, window)
    bad = _diagonal_check(X, [0], w)
    if bad is not None:
        p, q, p2, _, wit = bad
        return no("O_pq (x) O_p' -> O_p'q is not an isomorphism", {"pair": (p, q), "step": (p, p2), "detail": wit})
    return _ok(X, w, "diagonal pushforward of O is quasi-coherent")


def irreducible_components_witness(X: RingedSpace):
    """None if every connected component has a generic point (a maximum),
    else the maximal points of the first component without one."""
    for comp in X.poset.components():
        if X.poset.maximum(comp) is None:
            return X.poset.maximal_points(comp)
    return None


def is_schematic(X: RingedSpace, window=None, method: str = "auto") -> Verdict:
    """R^i delta_* O quasi-coherent for all i, tested pointwise:
    H^i(U_pq, O) (x)_{O_p} O_p' -> H^i(U_p'q, O) for q, p <= p', 0 <= i <= dim X.

    On ZConst, method "auto" uses the criterion that every connected
    component is irreducible; "general" forces the cohomological test."""
    if method not in ("auto", "general", "irreducible"):
        raise ValueError(f"unknown method {method!r}")
    if X.backend is coeff.ZB and method in ("auto", "irreducible"):
        bad = irreducible_components_witness(X)
        if bad is not None:
            return no("a connected component is not irreducible", bad)
        return yes("every connected component is irreducible")
    if method == "irreducible":
        raise BackendLimitation("the irreducibility criterion applies to constant-Z spaces")
    w = _window(X, window)
    degrees = range(max(X.poset.dimension(), 0) + 1)
    bad = _diagonal_check(X, degrees, w)
    if bad is not None:
        p, q, p2, i, wit = bad
        return no("H^i(U_pq) base change is not an isomorphism",
                  {"pair": (p, q), "step": (p, p2), "degree": i, "detail": wit})
    return _ok(X, w, "R^i delta_* O quasi-coherent for all i")


def is_semiseparated(X: RingedSpace, window=None) -> Verdict:
    """Quasi-coherent diagonal pushforward and H^i(U_pq, O) = 0 for i > 0."""
    w = _window(X, window)
    O = structure_sheaf(X)
    for p in X.points:
        for q in X.points:
            bad = vanishing_witness(O, _U(X, p, q), w)
            if bad is not None:
                i, wit = bad
                return no("H^i(U_pq, O) != 0 for some i > 0", {"pair": (p, q), "degree": i, "detail": wit})
    v = is_quasicoherent_space(X, w)
    if not v:
        return v
    return _ok(X, w, "quasi-coherent diagonal with acyclic U_pq")


def is_affine_certified(X: RingedSpace, U=None, window=None) -> Verdict:
    """Certification cascade for affineness of X (or of the open U inside X).

    Yes: a minimum; a one-point core; U acyclic inside a schematic space
    certified affine. No: not acyclic; on a connected constant-Z space, a core
    with more than one point. Otherwise Unknown."""
    if U is not None:
        U = sort_points(U)
        if not X.poset.is_open(U):
            raise ValidationError("affine certification of a subset needs an open subset")
        S = X.subspace(U)
        v = is_affine_certified(S, None, window)
        if v.value is not Value.UNKNOWN:
            return v
        amb = is_affine_certified(X, None, window)
        if amb and is_schematic(X, window) and is_acyclic(X, U, window or X.window):
            return yes("acyclic open subset of a schematic affine space", amb.window)
        return v
    P = X.poset
    if not X.points:
        return unknown("empty space")
    if P.minimum() is not None:
        return yes("space with a minimum")
    c = core(X).core
    if len(c.poset) == 1:
        return yes("homotopy equivalent to a punctual space")
    w = as_window(window) or X.window
    if X.backend is not coeff.GB or w is not None:
        acyc = is_acyclic(X, None, w)
        if acyc.is_no:
            return no("not acyclic", acyc.witness)
    if X.backend is coeff.ZB and P.is_connected():
        return no("connected topological space that is not homotopically trivial", sorted(c.points))
    return unknown("no certification rule applies")


# morphisms -------------------------------------------------------------------------

def U_xy(f: SpaceMorphism, x, y):
    X, Y = f.source, f.target
    return sort_points(X.poset.min_open(x) & f.preimage(Y.poset.min_open(y)))


def _xy_phis(f, x, y, V, side):
    X, Y = f.source, f.target
    if side == "x":
        return X.ring(x), {z: X.res(x, z) for z in V}
    return Y.ring(y), {z: f.co(z) @ Y.res(y, f(z)) for z in V}


def _graphic_check(f: SpaceMorphism, degrees, w):
    """First failing ((x, y), step, i, witness) of the pointwise test that
    R^i Gamma_* O_X is quasi-coherent on X x Y."""
    X, Y = f.source, f.target
    O = structure_sheaf(X)
    for x in X.points:
        for y in Y.points:
            V = U_xy(f, x, y)
            for x2 in X.poset.upper_covers(x):
                V2 = U_xy(f, x2, y)
                R, phis = _xy_phis(f, x, y, V, "x")
                R2, phis2 = _xy_phis(f, x2, y, V2, "x")
                bad = comparison_failures(O, V, R, phis, V2, R2, phis2, X.res(x, x2), degrees, w)
                if bad:
                    return (x, y), (x2, y), bad[0][0], bad[0][1]
            for y2 in Y.poset.upper_covers(y):
                V2 = U_xy(f, x, y2)
                R, phis = _xy_phis(f, x, y, V, "y")
                R2, phis2 = _xy_phis(f, x, y2, V2, "y")
                bad = comparison_failures(O, V, R, phis, V2, R2, phis2, Y.res(y, y2), degrees, w)
                if bad:
                    return (x, y), (x, y2), bad[0][0], bad[0][1]
    return None


def is_schematic_morphism(f: SpaceMorphism, window=None) -> Verdict:
    """R Gamma_* O_X quasi-coherent, tested pointwise on U_xy = U_x n f^-1(U_y):
    H^i(U_xy) (x) O_(x',y') -> H^i(U_x'y') for covering steps and
    0 <= i <= dim X."""
    X = f.source
    w = _window(X, window) if X.backend is coeff.GB else as_window(window)
    degrees = range(max(X.poset.dimension(), 0) + 1)
    bad = _graphic_check(f, degrees, w)
    if bad is not None:
        a, b, i, wit = bad
        return no("H^i(U_xy) base change is not an isomorphism", {"step": (a, b), "degree": i, "detail": wit})
    return _ok(X, w, "R^i Gamma_* O_X quasi-coherent for all i")


def is_locally_acyclic(f: SpaceMorphism, window=None) -> Verdict:
    X, Y = f.source, f.target
    w = _window(X, window) if X.backend is coeff.GB else as_window(window)
    O = structure_sheaf(X)
    for x in X.points:
        for y in Y.points:
            bad = vanishing_witness(O, U_xy(f, x, y), w)
            if bad is not None:
                return no("H^i(U_xy, O) != 0 for some i > 0", {"point": (x, y), "degree": bad[0], "detail": bad[1]})
    v = is_schematic_morphism(f, w)
    if not v:
        return v
    return _ok(X, w, "Gamma_* O_X quasi-coherent with acyclic U_xy")


def topological_criterion(f: SpaceMorphism) -> Verdict:
    """For constant-Z spaces: every U_xy is non-empty, connected and acyclic."""
    X, Y = f.source, f.target
    if X.backend is not coeff.ZB:
        raise BackendLimitation("the topological criterion is for constant-Z spaces")
    O = structure_sheaf(X)
    for x in X.points:
        for y in Y.points:
            V = U_xy(f, x, y)
            if not V:
                return no("U_xy is empty", (x, y))
            if not X.poset.is_connected(V):
                return no("U_xy is not connected", (x, y))
            if vanishing_witness(O, V) is not None:
                return no("U_xy is not acyclic", (x, y))
    return yes("every U_xy is non-empty, connected and acyclic")


def is_affine_morphism(f: SpaceMorphism, window=None) -> Verdict:
    """Schematic, and f^-1(U_y) certified affine for every y."""
    Y = f.target
    v = is_schematic_morphism(f, window)
    if not v:
        return v
    parts = [v]
    for y in Y.points:
        V = sort_points(f.preimage(Y.poset.min_open(y)))
        if not V:
            return unknown("empty preimage of a minimal open", y)
        a = is_affine_certified(f.source, V, window)
        if a.is_no:
            return no("preimage of a minimal open is not affine", y)
        if a.is_unknown:
            return unknown(a.rule, y)
        parts.append(a)
    return conjunction(parts, "schematic with affine preimages of minimal opens")


def _structure_into_sections(f: SpaceMorphism, y, w):
    """O_y -> (f_*O_X)_y = O_X(f^-1(U_y)) as a map of O_y-modules."""
    X, Y = f.source, f.target
    B = X.backend
    V = sort_points(f.preimage(Y.poset.min_open(y)))
    R = Y.ring(y)
    phis = {x: f.co(x) @ Y.res(y, f(x)) for x in V}
    O = structure_sheaf(X)
    L, projs = sections_over(O, V, R, phis, w)
    nodes = [B.restrict(O.stalk(x), phis[x]) for x in V]
    Pm, _, _ = B.direct_sum(nodes, R)
    src = B.ring_as_module(R)
    e = B.assemble(src, [src], Pm, nodes,
                   {(i, 0): reinterpret(B.hom_as_map(phis[x]), src, nodes[i]) for i, x in enumerate(V)})
    inc = B.assemble(L, [L], Pm, nodes, {(i, 0): reinterpret(projs[x], L, nodes[i]) for i, x in enumerate(V)})
    return B.lift(e, inc)


def pushforward_structure_failure(f: SpaceMorphism, window=None):
    """First y where O_y -> (f_*O_X)_y is not an isomorphism, with a witness."""
    w = as_window(window) or f.source.window or f.target.window
    for y in f.target.points:
        if not f.preimage(f.target.poset.min_open(y)):
            return y, "empty preimage"
        m = _structure_into_sections(f, y, w)
        bad = coeff.iso_failure(m, w)
        if bad is not None:
            return y, bad
    return None


def is_qc_isomorphism(f: SpaceMorphism, window=None) -> Verdict:
    """Affine schematic morphism with O_Y -> f_*O_X an isomorphism."""
    v = is_affine_morphism(f, window)
    if not v:
        return v
    bad = pushforward_structure_failure(f, window)
    if bad is not None:
        return no("O_y -> (f_*O_X)_y is not an isomorphism", bad)
    return conjunction([v], "affine schematic with f_*O_X = O_Y")


# Stein factorization ------------------------------------------------------------

def _section_ring_map(A, maps, A2, maps2, V2):
    """The ring map A -> A2 restricting sections to V2 (maps2 jointly injective)."""
    B = A.backend
    if B is coeff.ZB:
        return RingHom(A, A2)
    if B is coeff.GB:
        return B.inclusion(A, A2)
    if not V2:
        return RingHom(A, A2, Mat.zeros(0, A.dim), False)
    M2 = Mat.vstack([maps2[x].data for x in V2], A2.dim)
    M = Mat.vstack([maps[x].data for x in V2], A.dim)
    rho = qmat.solve(M2, M)
    if rho is None:
        raise ValidationError("restriction of sections does not factor through the smaller ring")
    return RingHom(A, A2, rho, True)


@dataclass
class SteinFactorization:
    middle: RingedSpace
    first: SpaceMorphism  # X -> Y'
    second: SpaceMorphism  # Y' -> Y
    certificates: Dict[str, Verdict] = field(default_factory=dict)


def stein_factorization(f: SpaceMorphism, window=None, check: bool = True) -> SteinFactorization:
    """f = g o f' with Y' = (Y, f_*O_X), f' = f on points and g the identity
    on points with the structural maps O_y -> (f_*O_X)_y."""
    X, Y = f.source, f.target
    B = X.backend
    w = as_window(window) or X.window or Y.window
    secs = {}
    for y in Y.points:
        V = sort_points(f.preimage(Y.poset.min_open(y)))
        secs[y] = (V,) + global_sections(X, V)
    rings = {y: secs[y][1] for y in Y.points}
    res = {}
    for y, y2 in Y.covers():
        V, A, maps = secs[y]
        V2, A2, maps2 = secs[y2]
        res[(y, y2)] = _section_ring_map(A, maps, A2, maps2, V2)
    Y2 = RingedSpace(Y.poset, rings, res, w, (Y.name + "'") if Y.name else "")
    f1 = SpaceMorphism(X, Y2, f.pointmap, {x: secs[f(x)][2][x] for x in X.points})
    co = {}
    for y in Y.points:
        V, A, maps = secs[y]
        # O_y -> A: the sections given by f#_x o r_{y f(x)}
        phis = {x: f.co(x) @ Y.res(y, f(x)) for x in V}
        co[y] = _section_ring_map(Y.ring(y), phis, A, maps, V)
    g = SpaceMorphism(Y2, Y, {y: y for y in Y.points}, co)
    cert = {}
    if check:
        bad = pushforward_structure_failure(f1, w)
        cert["first_pushforward"] = (yes("f'_*O_X = O_Y'", w.as_tuple() if (B is coeff.GB and w) else None)
                                     if bad is None else no("f'_*O_X differs from O_Y'", bad))
        cert["second_affine"] = is_affine_morphism(g, w)
    return SteinFactorization(Y2, f1, g, cert)


# fibered products -----------------------------------------------------------------

@dataclass
class SchematicFiberedProduct:
    product: FiberedProduct
    certificates: Dict[str, Verdict]


def schematic_fibered_product(f: SpaceMorphism, g: SpaceMorphism, window=None) -> SchematicFiberedProduct:
    """X x_S Y with certificates: flat restrictions, schematic, and when both
    legs are affine, h_*O = f_*O (x)_{O_S} g_*O stalkwise (h the structure
    map to S)."""
    fp = fibered_product_space(f, g)
    Z = fp.space
    w = as_window(window) or Z.window or f.target.window
    if w is not None:
        Z.window = w
    B = Z.backend
    cert = {"flat": is_finite_space(Z), "schematic": is_schematic(Z, w)}
    af, ag = is_affine_morphism(f, w), is_affine_morphism(g, w)
    cert["f_affine"], cert["g_affine"] = af, ag
    if af and ag:
        h = compose(f, fp.p1)
        S = f.target
        fo = pushforward(f, structure_sheaf(f.source), w)
        go = pushforward(g, structure_sheaf(g.source), w)
        ho = pushforward(h, structure_sheaf(Z), w)
        parts = []
        for s in S.points:
            t = B.tensor(fo.stalk(s), go.stalk(s))
            parts.append(_abstract_iso(t, ho.stalk(s), w, s))
        cert["pushforward_tensor"] = conjunction(parts, "h_*O = f_*O (x) g_*O stalkwise")
    return SchematicFiberedProduct(fp, cert)


def _abstract_iso(M, N, w, where):
    B = M.backend
    if B is coeff.GB:
        a, b = B.invariants(M, w), B.invariants(N, w)
        return yes("graded dimensions agree", w.as_tuple()) if a == b else no("graded dimensions differ", where)
    v = B.mod_iso_search(M, N)
    if v.is_no:
        return no(v.rule, where)
    return v
