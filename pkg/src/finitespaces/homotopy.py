"""Homotopy theory of ringed finite spaces: the order on morphisms, fences,
beat points, cores and the core-based homotopy-equivalence test."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from . import coeff
from .errors import BackendLimitation, SearchBudgetExceeded, ValidationError
from .poset import iter_poset_isos, monotone_maps, point_key
from .sheafmod import SheafModule, reinterpret
from .space import RingedSpace, SpaceMorphism, compose, identity_morphism, t0_ringed
from .verdict import Value, Verdict, no, unknown, yes


# order on morphisms ------------------------------------------------------------

@dataclass(frozen=True)
class MorphismOrderWitness:
    """f <= g: f(x) <= g(x) and g#_x o r_{f(x)g(x)} = f#_x for every x."""

    lower: SpaceMorphism
    upper: SpaceMorphism


def _same_spaces(f: SpaceMorphism, g: SpaceMorphism):
    if f.source.poset != g.source.poset or f.target.poset != g.target.poset:
        raise ValidationError("morphisms have different sources or targets")


def leq_morphisms(f: SpaceMorphism, g: SpaceMorphism) -> Optional[MorphismOrderWitness]:
    _same_spaces(f, g)
    Y = f.target
    for x in f.source.points:
        if not Y.poset.leq(f(x), g(x)):
            return None
        if not (g.co(x) @ Y.res(f(x), g(x)) == f.co(x)):
            return None
    return MorphismOrderWitness(f, g)


@dataclass
class Fence:
    """f_0, f_1, ..., f_n with f_i <= f_{i+1} (up[i] True) or f_i >= f_{i+1}."""

    maps: List[SpaceMorphism]
    up: List[bool]

    def __post_init__(self):
        if len(self.up) != max(len(self.maps) - 1, 0):
            raise ValidationError("a fence needs one direction per link")


def link_witness(F: Fence, i: int) -> Optional[MorphismOrderWitness]:
    a, b = F.maps[i], F.maps[i + 1]
    return leq_morphisms(a, b) if F.up[i] else leq_morphisms(b, a)


def verify_fence(F: Fence) -> bool:
    if not F.maps:
        return False
    try:
        return all(link_witness(F, i) is not None for i in range(len(F.up)))
    except ValidationError:
        return False


def homotopic_topological(f: SpaceMorphism, g: SpaceMorphism) -> bool:
    """Same connected component of the pointwise order on Hom(X, Y); only for
    constant-Z spaces, where morphisms are monotone maps."""
    if f.source.backend is not coeff.ZB:
        raise BackendLimitation("homotopy of ringed morphisms is decided only on ZConst; verify a fence instead")
    _same_spaces(f, g)
    X, Y = f.source.poset, f.target.poset
    maps = [tuple(m[x] for x in X.sorted_points()) for m in monotone_maps(X, Y)]
    pts = X.sorted_points()
    start = tuple(f(x) for x in pts)
    goal = tuple(g(x) for x in pts)

    def comparable(a, b):
        return all(Y.leq(u, v) for u, v in zip(a, b)) or all(Y.leq(v, u) for u, v in zip(a, b))

    seen = {start}
    stack = [start]
    while stack:
        a = stack.pop()
        if a == goal:
            return True
        for b in maps:
            if b not in seen and comparable(a, b):
                seen.add(b)
                stack.append(b)
    return goal in seen


# beat points ---------------------------------------------------------------------

@dataclass(frozen=True)
class BeatPoint:
    point: object
    kind: str  # "down" or "up"
    partner: object


def _beat(X: RingedSpace, p) -> List[BeatPoint]:
    P = X.poset
    out = []
    below = P.closure(p) - {p}
    if below:
        q = P.maximum(below)
        if q is not None:
            out.append(BeatPoint(p, "down", q))
    above = P.min_open(p) - {p}
    if above:
        q = P.minimum(above)
        if q is not None and X.backend.is_ring_iso(X.res(p, q)):
            out.append(BeatPoint(p, "up", q))
    return out


def find_beat_points(X: RingedSpace) -> List[BeatPoint]:
    if not X.poset.is_poset():
        raise ValidationError("beat points are defined on T0 spaces; take the T0 quotient first")
    out = []
    for p in X.points:
        out.extend(_beat(X, p))
    return out


@dataclass
class Removal:
    beat: BeatPoint
    space: RingedSpace
    retraction: SpaceMorphism  # X -> X - {p}
    inclusion: SpaceMorphism  # X - {p} -> X
    witness: MorphismOrderWitness  # between i o r and id_X


def remove_beat_point(X: RingedSpace, b: BeatPoint) -> Removal:
    if b not in _beat(X, b.point):
        raise ValidationError(f"{b.point!r} is not a {b.kind} beat point with partner {b.partner!r}")
    B = X.backend
    p, q = b.point, b.partner
    rest = [x for x in X.points if x != p]
    S = X.subspace(rest, X.name)
    if b.kind == "down":
        cop = X.res(q, p)
    else:
        cop = B.inverse_hom(X.res(p, q))
    co = {x: B.identity_hom(X.ring(x)) for x in rest}
    co[p] = cop
    r = SpaceMorphism(X, S, {**{x: x for x in rest}, p: q}, co)
    i = SpaceMorphism(S, X, {x: x for x in rest}, {x: B.identity_hom(X.ring(x)) for x in rest})
    ir = compose(i, r)
    idX = identity_morphism(X)
    w = leq_morphisms(ir, idX) if b.kind == "down" else leq_morphisms(idX, ir)
    if w is None:
        raise ValidationError("beat-point retraction failed its homotopy check")
    ri = compose(r, i)
    if any(ri(x) != x for x in rest) or any(not (ri.co(x) == B.identity_hom(X.ring(x))) for x in rest):
        raise ValidationError("beat-point retraction is not a retraction")
    return Removal(b, S, r, i, w)


@dataclass
class CoreResult:
    core: RingedSpace
    trace: List[BeatPoint]
    retraction: SpaceMorphism  # X -> core
    inclusion: SpaceMorphism  # core -> X
    removals: List[Removal] = field(default_factory=list)


def core(X: RingedSpace, seed: Optional[int] = None) -> CoreResult:
    """T0 quotient, then beat points removed one at a time: the first in
    point order, or a random one when ``seed`` is given."""
    rng = random.Random(seed) if seed is not None else None
    X0, retr, inc = t0_ringed(X)
    cur = X0
    removals = []
    while True:
        bs = find_beat_points(cur)
        if not bs:
            break
        b = bs[0] if rng is None else rng.choice(bs)
        rm = remove_beat_point(cur, b)
        removals.append(rm)
        retr = compose(rm.retraction, retr)
        inc = compose(inc, rm.inclusion)
        cur = rm.space
    return CoreResult(cur, [rm.beat for rm in removals], retr, inc, removals)


# isomorphism of ringed spaces -----------------------------------------------------

def _ring_candidates(S, T, budget):
    """Candidate isomorphisms S -> T, or a No verdict."""
    B = S.backend
    cands = []
    if S == T:
        cands.append(B.identity_hom(S))
    v = B.ring_iso_search(S, T) if budget is None else B.ring_iso_search(S, T, budget)
    if v.is_no:
        return v
    if v.value is Value.YES and v.witness is not None and not any(v.witness == c for c in cands):
        cands.append(v.witness)
    return cands


def ringed_isomorphism(X: RingedSpace, Y: RingedSpace, budget: int = 200000):
    """Search for an isomorphism X -> Y (poset iso with compatible ring
    isomorphisms O_{s(x)} -> O_x). Returns (Verdict, morphism or None)."""
    if X.backend is not Y.backend:
        return no("spaces over different backends", None), None
    if len(X.poset) != len(Y.poset):
        return no("different numbers of points", (len(X.poset), len(Y.poset))), None
    inconclusive = False
    found_poset_iso = False
    try:
        for sigma in iter_poset_isos(X.poset, Y.poset, budget):
            found_poset_iso = True
            pts = X.points
            cands = {}
            dead = False
            for x in pts:
                c = _ring_candidates(Y.ring(sigma[x]), X.ring(x), None)
                if isinstance(c, Verdict):
                    dead = True
                    break
                cands[x] = c
            if dead:
                continue
            choice = {}

            def ok(x):
                for p, q in X.covers():
                    if p in choice and q in choice and (x == p or x == q):
                        lhs = choice[q] @ Y.res(sigma[p], sigma[q])
                        rhs = X.res(p, q) @ choice[p]
                        if not (lhs == rhs):
                            return False
                return True

            def rec(k):
                if k == len(pts):
                    return True
                x = pts[k]
                for h in cands[x]:
                    choice[x] = h
                    if ok(x) and rec(k + 1):
                        return True
                    del choice[x]
                return False

            if rec(0):
                co = {x: choice[x] for x in pts}
                return yes("poset isomorphism with compatible ring isomorphisms"), SpaceMorphism(X, Y, sigma, co)
            inconclusive = True
    except SearchBudgetExceeded:
        return unknown("poset isomorphism search budget exhausted"), None
    if not found_poset_iso:
        return no("underlying posets are not isomorphic", None), None
    if inconclusive:
        return unknown("no compatible ring isomorphisms among the candidates tried"), None
    return no("no poset isomorphism matches the rings", None), None


def homotopy_equivalent(X: RingedSpace, Y: RingedSpace, budget: int = 200000) -> Verdict:
    """Homotopy equivalent iff the cores are isomorphic."""
    cx, cy = core(X).core, core(Y).core
    if len(cx.poset) != len(cy.poset):
        return no("cores have different sizes", (len(cx.poset), len(cy.poset)))
    v, _ = ringed_isomorphism(cx, cy, budget)
    return v


# homotopy invariance of pullback ----------------------------------------------------

def pullback_comparison(w: MorphismOrderWitness, M: SheafModule, x):
    """(f^*M)_x -> (g^*M)_x for f <= g, induced by M_{f(x)} -> M_{g(x)}."""
    f, g = w.lower, w.upper
    X = f.source
    B = X.backend
    r = M.res(f(x), g(x))
    return B.tensor_map(r, f.co(x), g.co(x), B.identity_hom(X.ring(x)), M.stalk(g(x)))


def pullback_homotopy_invariance_check(F: Fence, M: SheafModule, window=None) -> bool:
    """Every link of the fence induces stalkwise isomorphisms f_i^*M -> f_{i+1}^*M."""
    if not verify_fence(F):
        raise ValidationError("fence is not valid")
    X = F.maps[0].source
    w = window or X.window or M.space.window
    for i in range(len(F.up)):
        wit = link_witness(F, i)
        for x in X.points:
            m = pullback_comparison(wit, M, x)
            if coeff.iso_failure(m, w) is not None:
                return False
    return True


def contraction_fence(X: RingedSpace, p=None) -> Fence:
    """On a space with minimum p: identity <= i_p o pi, the contraction to p."""
    P = X.poset
    if p is None:
        p = P.minimum()
    if p is None:
        raise ValidationError("space has no minimum")
    B = X.backend
    c = SpaceMorphism(X, X, {x: p for x in X.points}, {x: X.res(p, x) for x in X.points})
    return Fence([identity_morphism(X), c], [False])
