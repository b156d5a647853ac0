"""The standard flasque resolution of a sheaf on a finite space and the
cohomology computed from it: H^i(U, F), acyclicity, higher direct images,
and base-change comparisons of cohomology used by the classification
predicates."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import coeff
from .coeff.base import ModMap, RingHom, as_window
from .errors import ValidationError, WindowRequired
from .poset import point_key, sort_points
from .sheafmod import SheafModule, reinterpret, sections_ring, structure_sheaf
from .space import RingedSpace, SpaceMorphism
from .verdict import Verdict, no, yes


@dataclass
class ChainComplex:
    """Cochain complex C^0 -> C^1 -> ... -> C^top over one ring.

    ``diffs[n]`` is d^n: C^n -> C^{n+1}; the last one maps into a zero
    module. ``chains[n]`` lists the chains indexing the summands of C^n."""

    ring: object
    terms: List
    diffs: List[ModMap]
    parts: List[List] = field(default_factory=list)
    chains: List[List[Tuple]] = field(default_factory=list)
    window: object = None

    @property
    def backend(self):
        return self.ring.backend

    @property
    def top(self):
        """Highest degree with a (possibly) nonzero term."""
        return len(self.diffs) - 1

    def d(self, n) -> ModMap:
        return self.diffs[n]

    def check_d2(self) -> bool:
        B = self.backend
        for n in range(len(self.diffs) - 1):
            if not B.map_is_zero(self.diffs[n + 1] @ self.diffs[n], self.window):
                return False
        return True


def standard_complex(F: SheafModule, U=None, R=None, phis: Mapping = None, window=None) -> ChainComplex:
    """C^n(U) = prod over chains x0 < ... < xn in U of F_{xn}, as modules
    over R (phis[x]: R -> O_x), with

        (da)(x0..x_{n+1}) = sum_{i<=n} (-1)^i a(x0..^xi..x_{n+1})
                            + (-1)^{n+1} r(a(x0..xn)),

    r the restriction F_{xn} -> F_{x_{n+1}}. Chains are in lexicographic
    order of point ids. With no ring given, R is the ring of sections of U."""
    X = F.space
    B = X.backend
    pts = X.points if U is None else sort_points(U)
    if R is None:
        R, phis = sections_ring(X, pts)
    w = as_window(window) or X.window
    P = X.poset
    top = max(P.dimension(pts), 0)
    chains = [P.chains(n, pts) for n in range(top + 2)]
    parts = []
    terms = []
    for n in range(top + 2):
        ps = [B.restrict(F.stalk(c[-1]), phis[c[-1]]) for c in chains[n]]
        T, _, _ = B.direct_sum(ps, R)
        parts.append(ps)
        terms.append(T)
    diffs = []
    for n in range(top + 1):
        src_idx = {c: i for i, c in enumerate(chains[n])}
        blocks = {}
        for j, c2 in enumerate(chains[n + 1]):
            tgt = parts[n + 1][j]
            for i in range(n + 1):
                face = c2[:i] + c2[i + 1:]
                k = src_idx[face]
                m = B.identity(parts[n][k]) if i % 2 == 0 else B.scale(B.identity(parts[n][k]), -1)
                blocks[(j, k)] = reinterpret(m, parts[n][k], tgt)
            last = c2[:-1]
            k = src_idx[last]
            r = F.res(last[-1], c2[-1])
            r = reinterpret(r, parts[n][k], tgt)
            blocks[(j, k)] = r if (n + 1) % 2 == 0 else B.scale(r, -1)
        diffs.append(B.assemble(terms[n], parts[n], terms[n + 1], parts[n + 1], blocks))
    # terms[top + 1] is zero (no longer chains) and serves as the last target
    return ChainComplex(R, terms, diffs, parts, chains, w)


@dataclass
class CohomologyGroup:
    """H^i = ker d^i / im d^{i-1} with the maps that present it."""

    module: object
    kernel: object
    inc: ModMap  # K -> C^i
    proj: ModMap  # K -> H


def complex_cohomology(C: ChainComplex, i: int, window=None) -> CohomologyGroup:
    B = C.backend
    w = as_window(window) or C.window
    if B is coeff.GB and w is None:
        raise WindowRequired("cohomology")
    if i < 0 or i > C.top:
        Z = B.zero(C.ring)
        return CohomologyGroup(Z, Z, B.identity(Z), B.identity(Z))
    K, inc = B.kernel(C.diffs[i], w)
    if i == 0:
        return CohomologyGroup(K, K, inc, B.identity(K))
    g = B.lift(C.diffs[i - 1], inc)
    H, proj = B.cokernel(g, w)
    return CohomologyGroup(H, K, inc, proj)


def induced_on_cohomology(phi: ModMap, G1: CohomologyGroup, G2: CohomologyGroup) -> ModMap:
    """H^i(C) -> H^i(C') for the degree-i component of a chain map."""
    B = phi.backend
    a = B.lift(phi @ G1.inc, G2.inc)
    return B.induced_on_cokernels(a, G1.proj, G2.proj)


def cohomology(F: SheafModule, U=None, i: int = 0, window=None):
    C = standard_complex(F, U, window=window)
    return complex_cohomology(C, i, window).module


@dataclass
class CohomologyReport:
    degrees: Dict[int, dict]
    window: Optional[tuple]
    text: Dict[int, str]

    def to_dict(self):
        return {"degrees": {str(k): v for k, v in self.degrees.items()}, "window": self.window,
                "text": {str(k): v for k, v in self.text.items()}}


def cohomology_report(F: SheafModule, U=None, window=None) -> CohomologyReport:
    C = standard_complex(F, U, window=window)
    B = C.backend
    w = C.window
    degs, text = {}, {}
    for i in range(C.top + 1):
        H = complex_cohomology(C, i, w).module
        degs[i] = B.invariants(H, w)
        text[i] = B.describe(H, w)
    return CohomologyReport(degs, w.as_tuple() if (B is coeff.GB and w) else None, text)


def _ok(B, w, rule):
    return yes(rule, w.as_tuple() if (B is coeff.GB and w is not None) else None)


def vanishing_witness(F: SheafModule, U=None, window=None, start=1):
    """(i, witness) for the first i >= start with H^i(U, F) != 0, else None."""
    C = standard_complex(F, U, window=window)
    for i in range(start, C.top + 1):
        H = complex_cohomology(C, i, window).module
        wit = coeff.nonzero_witness(H, C.window if C.backend is coeff.GB else None)
        if wit is not None:
            return i, wit
    return None


def is_acyclic(X: RingedSpace, U=None, window=None) -> Verdict:
    """H^i(U, O) = 0 for all i > 0."""
    O = structure_sheaf(X)
    w = as_window(window) or X.window
    bad = vanishing_witness(O, U, w)
    if bad is not None:
        return no("positive-degree cohomology of O is nonzero", bad)
    return _ok(X.backend, w, "H^i(O) = 0 for i > 0")


def resolution_check(F: SheafModule, window=None) -> bool:
    """The standard complex resolves F: on every U_p it satisfies d^2 = 0,
    the map F_p -> C^0(U_p) identifies F_p with H^0, and H^i = 0 for i > 0."""
    X = F.space
    B = X.backend
    w = as_window(window) or X.window
    for p in X.points:
        Up = sort_points(X.poset.min_open(p))
        phis = {x: X.res(p, x) for x in Up}
        C = standard_complex(F, Up, X.ring(p), phis, w)
        if not C.check_d2():
            return False
        H0 = complex_cohomology(C, 0, w)
        blocks = {(k, 0): reinterpret(F.res(p, c[-1]), F.stalk(p), C.parts[0][k]) for k, c in enumerate(C.chains[0])}
        e = B.assemble(F.stalk(p), [F.stalk(p)], C.terms[0], C.parts[0], blocks)
        try:
            a = B.lift(e, H0.inc)
        except ValidationError:
            return False
        if coeff.iso_failure(a, w) is not None:
            return False
        for i in range(1, C.top + 1):
            if coeff.nonzero_witness(complex_cohomology(C, i, w).module, w if B is coeff.GB else None) is not None:
                return False
    return True


# base change of complexes and comparison maps --------------------------------------

def base_change_complex(C: ChainComplex, h: RingHom) -> ChainComplex:
    """C (x)_R S for h: R -> S, termwise."""
    B = C.backend
    S = h.target
    ident = B.identity_hom(S)
    terms = [B.base_change(T, h) for T in C.terms]
    diffs = []
    for n, d in enumerate(C.diffs):
        m = B.tensor_map(d, h, h, ident, C.terms[n + 1])
        diffs.append(reinterpret(m, terms[n], terms[n + 1]))
    return ChainComplex(S, terms, diffs, [], C.chains, C.window)


def restriction_chain_map(C: ChainComplex, C2: ChainComplex, h: RingHom, degree: int) -> ModMap:
    """Degree-n map C^n -> restrict(C2^n, h) projecting onto the chains of C2
    (all of which are chains of C); identity on each kept factor."""
    B = C.backend
    tgt = B.restrict(C2.terms[degree], h)
    idx = {c: i for i, c in enumerate(C.chains[degree])}
    tparts = [B.restrict(P, h) for P in C2.parts[degree]]
    blocks = {}
    for j, c in enumerate(C2.chains[degree]):
        k = idx[c]
        blocks[(j, k)] = reinterpret(B.identity(C.parts[degree][k]), C.parts[degree][k], tparts[j])
    return B.assemble(C.terms[degree], C.parts[degree], tgt, tparts, blocks)


def comparison_failures(F: SheafModule, V, R, phis, V2, R2, phis2, h: RingHom, degrees, window=None):
    """For V2 inside V and h: R -> R2 compatible with phis/phis2, test that
    H^i(V, F) (x)_R R2 -> H^i(V2, F) is an isomorphism for i in ``degrees``.
    Computed as the map induced on cohomology by the chain map
    C(V) (x)_R R2 -> C(V2), which agrees with the comparison for flat h.
    Returns a list of (i, witness) for the failing degrees."""
    X = F.space
    B = X.backend
    w = as_window(window) or X.window
    C = standard_complex(F, V, R, phis, w)
    C2 = standard_complex(F, V2, R2, phis2, w)
    Cb = base_change_complex(C, h)
    out = []
    for i in degrees:
        if i > C.top and i > C2.top:
            continue
        G1 = complex_cohomology(Cb, i, w)
        G2 = complex_cohomology(C2, i, w)
        if i <= C.top and i <= C2.top:
            proj = restriction_chain_map(C, C2, h, i)
            phi = B.adjoint(proj, h, C2.terms[i])
            phi = reinterpret(phi, Cb.terms[i], C2.terms[i])
            m = induced_on_cohomology(phi, G1, G2)
            bad = coeff.iso_failure(m, w)
        else:
            # one side has no degree-i term: compare with zero
            a = coeff.nonzero_witness(G1.module, w if B is coeff.GB else None)
            b = coeff.nonzero_witness(G2.module, w if B is coeff.GB else None)
            bad = a if a is not None else b
        if bad is not None:
            out.append((i, bad))
    return out


# higher direct images --------------------------------------------------------------

def higher_direct_image(f: SpaceMorphism, F: SheafModule, i: int, window=None) -> SheafModule:
    """R^i f_* F: stalk H^i(f^{-1}(U_y), F) over O_y; restrictions induced by
    restricting cochains."""
    X, Y = f.source, f.target
    B = X.backend
    w = as_window(window) or X.window or Y.window
    data = {}
    for y in Y.points:
        V = sort_points(f.preimage(Y.poset.min_open(y)))
        phis = {x: f.co(x) @ Y.res(y, f(x)) for x in V}
        C = standard_complex(F, V, Y.ring(y), phis, w)
        data[y] = (V, C, complex_cohomology(C, i, w))
    stalks = {y: data[y][2].module for y in Y.points}
    res = {}
    for y, y2 in Y.covers():
        h = Y.res(y, y2)
        V, C, G = data[y]
        V2, C2, G2 = data[y2]
        tgtH = B.restrict(G2.module, h)
        if i > C2.top or i > C.top or not V2:
            res[(y, y2)] = ModMap(G.module, tgtH, B.zero_map(G.module, tgtH).mat, False)
            continue
        # C2 restricted along h, same carriers
        Gr = CohomologyGroup(tgtH, B.restrict(G2.kernel, h),
                             reinterpret(G2.inc, B.restrict(G2.kernel, h), B.restrict(C2.terms[i], h)),
                             reinterpret(G2.proj, B.restrict(G2.kernel, h), tgtH))
        phi = restriction_chain_map(C, C2, h, i)
        res[(y, y2)] = induced_on_cohomology(phi, G, Gr)
    return SheafModule(Y, stalks, res, f"R^{i}f_*{F.name}")
