"""Sheaves of O-modules on ringed finite spaces: quasi-coherence and
finite-type predicates, sections, pullback, pushforward, tensor products."""
from __future__ import annotations

from collections import deque
from typing import Dict, Mapping, Optional, Tuple

from . import coeff
from .coeff import findimq as fq
from .coeff import graded as gr
from .coeff.base import ModMap, RingHom, as_window
from .coeff.matrix import Mat
from .errors import BackendLimitation, ValidationError, WindowRequired
from .poset import point_key, sort_points
from .space import RingedSpace, SpaceMorphism, global_sections, to_point
from .verdict import Value, Verdict, conjunction, no, unknown, yes


def reinterpret(f: ModMap, source, target) -> ModMap:
    """The same matrix viewed between other modules with the same carriers
    (used when restriction of scalars changes only the ring)."""
    return ModMap(source, target, f.mat, False)


class SheafModule:
    """Stalks M_p over O_p and restrictions M_p -> restrict(M_q, r_pq),
    given on generating relations and composed along paths."""

    def __init__(self, space: RingedSpace, stalks: Mapping, restrictions: Mapping = None, name: str = ""):
        self.space = space
        self.name = name
        X = space
        B = X.backend
        self.backend = B
        self.stalks = {}
        for p in X.points:
            if p not in stalks:
                raise ValidationError(f"missing stalk at {p!r}")
            M = stalks[p]
            if M.backend is not B:
                raise ValidationError(f"stalk at {p!r} is over a different backend")
            if M.ring != X.ring(p):
                raise ValidationError(f"stalk at {p!r} is not a module over O_{p}")
            self.stalks[p] = M
        given = dict(restrictions or {})
        for (p, q), f in given.items():
            if not X.poset.leq(p, q):
                raise ValidationError(f"restriction given for {p!r},{q!r} but {p!r} is not <= {q!r}")
        self._res: Dict[Tuple, ModMap] = {}
        for p, q in X.covers():
            if (p, q) not in given:
                raise ValidationError(f"missing module restriction for {p!r} <= {q!r}")
            f = given[(p, q)]
            tgt = B.restrict(self.stalks[q], X.res(p, q))
            given[(p, q)] = ModMap(self.stalks[p], tgt, f.mat, True)
        self._given = given
        for p in X.points:
            self._res[(p, p)] = B.identity(self.stalks[p])
            queue = deque([p])
            while queue:
                a = queue.popleft()
                for b in X.poset.upper_covers(a):
                    if (p, b) not in self._res:
                        self._res[(p, b)] = self._compose(p, a, b, self._given[(a, b)], self._res[(p, a)])
                        queue.append(b)
        for p, r in X.covers():
            for q in X.poset.min_open(r):
                via = self._compose(p, r, q, self._res[(r, q)], self._given[(p, r)])
                if not self._same(via, self._res[(p, q)]):
                    raise ValidationError(f"module restrictions do not commute: paths {p!r} -> {q!r} via {r!r} differ")

    def _compose(self, p, a, b, g, f):
        """g o f for f: M_p -> res(M_a) and g: M_a -> res(M_b), as a map
        M_p -> restrict(M_b, r_pb)."""
        B = self.backend
        tgt = B.restrict(self.stalks[b], self.space.res(p, b))
        g2 = reinterpret(g, f.target, tgt)
        return B.compose(g2, f)

    def _same(self, f, g):
        B = self.backend
        return B.map_is_zero(B.add(f, B.scale(g, -1)), self.space.window)

    def stalk(self, p):
        return self.stalks[p]

    def res(self, p, q) -> ModMap:
        return self._res[(p, q)]

    def cover_restrictions(self):
        return {(p, q): self._res[(p, q)] for p, q in self.space.covers()}

    def comparison(self, p, q) -> ModMap:
        """The base-change map M_p (x)_{O_p} O_q -> M_q."""
        return self.backend.adjoint(self._res[(p, q)], self.space.res(p, q), self.stalks[q])

    def __repr__(self):
        return f"SheafModule({self.name or ''} on {self.space!r})"


def make_restriction(M_p, M_q, h: RingHom, mat) -> ModMap:
    """Semilinear map M_p -> M_q over h, given by its matrix."""
    B = M_p.backend
    tgt = B.restrict(M_q, h)
    if not isinstance(mat, (Mat, dict)):
        mat = Mat(mat, len(mat), len(mat[0]) if mat else 0)
    return ModMap(M_p, tgt, mat, True)


def structure_sheaf(X: RingedSpace) -> SheafModule:
    B = X.backend
    stalks = {p: B.ring_as_module(X.ring(p)) for p in X.points}
    res = {(p, q): B.hom_as_map(X.res(p, q)) for p, q in X.covers()}
    return SheafModule(X, stalks, res, "O")


def free_sheaf(X: RingedSpace, rank: int) -> SheafModule:
    B = X.backend
    stalks = {p: B.free(X.ring(p), rank) for p in X.points}
    res = {}
    for p, q in X.covers():
        one = B.hom_as_map(X.res(p, q))
        S, incs, _ = B.direct_sum([one.source] * rank, X.ring(p))
        T, tincs, _ = B.direct_sum([one.target] * rank, X.ring(p))
        f = B.assemble(S, [one.source] * rank, T, [one.target] * rank, {(i, i): one for i in range(rank)})
        res[(p, q)] = f
    return SheafModule(X, stalks, res, f"O^{rank}")


def constant_zsheaf(X: RingedSpace, M) -> SheafModule:
    """Constant sheaf with stalk the abelian group M (ZConst spaces)."""
    if X.backend is not coeff.ZB:
        raise ValidationError("constant abelian sheaves live on ZConst spaces")
    B = X.backend
    return SheafModule(X, {p: M for p in X.points}, {e: B.identity(M) for e in X.covers()}, "const")


def zero_sheaf(X: RingedSpace) -> SheafModule:
    B = X.backend
    stalks = {p: B.zero(X.ring(p)) for p in X.points}
    res = {(p, q): ModMap(stalks[p], B.restrict(stalks[q], X.res(p, q)), B.zero_map(stalks[p], stalks[p]).mat, False)
           for p, q in X.covers()}
    return SheafModule(X, stalks, res, "0")


def _window(X, window):
    w = as_window(window) or X.window
    if X.backend is coeff.GB and w is None:
        raise WindowRequired("graded predicate")
    return w


def _edges(X):
    return sorted(X.covers(), key=lambda e: (point_key(e[0]), point_key(e[1])))


def _ok(X, w, rule):
    return yes(rule, w.as_tuple() if (X.backend is coeff.GB and w is not None) else None)


# predicates ---------------------------------------------------------------------

def is_quasicoherent(M: SheafModule, window=None) -> Verdict:
    """Every comparison M_p (x) O_q -> M_q along a generating relation is an
    isomorphism (composites are then isomorphisms too)."""
    X = M.space
    w = _window(X, window)
    for p, q in _edges(X):
        bad = coeff.iso_failure(M.comparison(p, q), w)
        if bad is not None:
            return no("base-change comparison not an isomorphism", (p, q), detail=f"{bad}")
    return _ok(X, w, "all edge comparisons are isomorphisms")


def is_finite_type(M: SheafModule, window=None) -> Verdict:
    """Stalks are finitely generated (always, for these presentations) and
    every comparison M_p (x) O_q -> M_q is surjective."""
    X = M.space
    w = _window(X, window)
    B = X.backend
    for p, q in _edges(X):
        if not B.is_surjective(M.comparison(p, q), w):
            return no("base-change comparison not surjective", (p, q))
    return _ok(X, w, "stalks finitely generated; edge comparisons surjective")


def structure_coherent(X: RingedSpace) -> Verdict:
    """O is coherent iff every restriction is flat (Noetherian stalks)."""
    from .space import is_finite_space

    if X.backend is coeff.GB:
        v = is_finite_space(X)
        if v:
            return yes("restrictions are localizations (flat)")
        return v
    return is_finite_space(X) if X.covers() else yes("no restrictions")


def is_coherent(M: SheafModule, window=None) -> Verdict:
    """Three-valued coherence: a coherent module is quasi-coherent; on ZConst a
    quasi-coherent module with finitely generated stalks is coherent; other
    backends answer Unknown after the quasi-coherence test."""
    v = is_quasicoherent(M, window)
    if v.is_no:
        return no("not quasi-coherent", v.witness)
    if M.backend is coeff.ZB:
        return yes("quasi-coherent with finitely generated stalks over Z")
    return unknown("general coherence is not decided on this backend")


# sections ---------------------------------------------------------------------

def sections_ring(X: RingedSpace, U):
    """A ring R with maps R -> O_p (p in U) over which sections over U form a
    module: O(U) when representable, the base ring otherwise."""
    pts = sort_points(U)
    B = X.backend
    if not pts:
        from .space import base_ring

        k = base_ring(X)
        return k, {}
    try:
        return global_sections(X, pts)
    except BackendLimitation:
        from .space import base_ring, structure_map

        k = base_ring(X)
        return k, {p: structure_map(k, X.ring(p)) for p in pts}


def sections_over(M: SheafModule, U, R, phis: Mapping, window=None):
    """Sections over U as a module over R, where phis[p]: R -> O_p is
    compatible with the restrictions. Returns (module, {p: projection})."""
    X = M.space
    B = X.backend
    pts = sort_points(U)
    if not pts:
        Z = B.zero(R)
        return Z, {}
    w = as_window(window) or X.window
    nodes = [B.restrict(M.stalk(p), phis[p]) for p in pts]
    idx = {p: i for i, p in enumerate(pts)}
    sub = X.poset.subspace(pts)
    arrows = []
    for p, q in sub.covers():
        f = M.res(p, q)
        arrows.append((idx[p], idx[q], reinterpret(f, nodes[idx[p]], nodes[idx[q]])))
    if B is coeff.GB and w is None:
        raise WindowRequired("sections")
    L, projs = coeff.finite_limit(nodes, arrows, w if B is coeff.GB else None)
    return L, {p: projs[idx[p]] for p in pts}


def sections(M: SheafModule, U=None, window=None):
    """M(U) for an open U (default the whole space), as a module over O(U)
    (or over the base ring when O(U) is not representable)."""
    X = M.space
    U = X.points if U is None else U
    if not X.poset.is_open(U):
        raise ValidationError("sections are taken over open (upward closed) subsets")
    R, phis = sections_ring(X, U)
    return sections_over(M, U, R, phis, window)[0]


# functors ------------------------------------------------------------------------

def pullback(f: SpaceMorphism, N: SheafModule) -> SheafModule:
    """(f^*N)_x = N_{f(x)} (x)_{O_{f(x)}} O_x with induced restrictions."""
    X, Y = f.source, f.target
    if N.space.poset != Y.poset:
        raise ValidationError("module lives on a different space than the morphism target")
    B = X.backend
    stalks = {x: B.base_change(N.stalk(f(x)), f.co(x)) for x in X.points}
    res = {}
    for x, x2 in X.covers():
        r = N.res(f(x), f(x2))
        res[(x, x2)] = B.tensor_map(r, f.co(x), f.co(x2), X.res(x, x2), N.stalk(f(x2)))
    return SheafModule(X, stalks, res, f"f^*{N.name}")


def tilde(X: RingedSpace, M, maps: Mapping = None) -> SheafModule:
    """The module M (x)_A O on X for an A-module M, with A -> O_x given by
    ``maps`` (default: global sections and their structure maps)."""
    if maps is None:
        A, maps = global_sections(X)
    else:
        A = M.ring
    f = to_point(X, A, maps)
    P = f.target
    N = SheafModule(P, {"*": M}, {}, "M")
    return pullback(f, N)


def pushforward(f: SpaceMorphism, M: SheafModule, window=None) -> SheafModule:
    """(f_*M)_y = M(f^{-1}(U_y)) as an O_y-module via the comorphisms."""
    X, Y = f.source, f.target
    B = X.backend
    w = as_window(window) or X.window or Y.window
    data = {}
    for y in Y.points:
        V = f.preimage(Y.poset.min_open(y))
        phis = {x: f.co(x) @ Y.res(y, f(x)) for x in V}
        data[y] = (V,) + sections_over(M, V, Y.ring(y), phis, w)
    stalks = {y: data[y][1] for y in Y.points}
    res = {}
    for y, y2 in Y.covers():
        V, L, projs = data[y]
        V2, L2, projs2 = data[y2]
        h = Y.res(y, y2)
        tgt = B.restrict(L2, h)
        if not V2:
            res[(y, y2)] = ModMap(L, tgt, _zero_mat(B, L, tgt), False)
            continue
        # project onto the factors over V2, then lift into L2
        nodes2 = [B.restrict(B.restrict(M.stalk(x), f.co(x) @ Y.res(y2, f(x))), h) for x in sort_points(V2)]
        P2, _, _ = B.direct_sum(nodes2, Y.ring(y))
        blocks = {}
        for i, x in enumerate(sort_points(V2)):
            blocks[(i, 0)] = reinterpret(projs[x], L, nodes2[i])
        g = B.assemble(L, [L], P2, nodes2, blocks)
        inc_parts = [reinterpret(projs2[x], tgt, nodes2[i]) for i, x in enumerate(sort_points(V2))]
        inc = B.assemble(tgt, [tgt], P2, nodes2, {(i, 0): p for i, p in enumerate(inc_parts)})
        res[(y, y2)] = B.lift(g, inc)
    return SheafModule(Y, stalks, res, f"f_*{M.name}")


def _zero_mat(B, S, T):
    return B.zero_map(S, T).mat


def tensor_modules(M: SheafModule, N: SheafModule) -> SheafModule:
    X = M.space
    if N.space.poset != X.poset:
        raise ValidationError("tensor of modules on different spaces")
    B = X.backend
    stalks = {p: B.tensor(M.stalk(p), N.stalk(p)) for p in X.points}
    res = {}
    for p, q in X.covers():
        res[(p, q)] = B.tensor_maps(M.res(p, q), N.res(p, q), M.stalk(q), N.stalk(q), X.res(p, q))
    return SheafModule(X, stalks, res, f"{M.name}(x){N.name}")


def restrict_to(M: SheafModule, U) -> SheafModule:
    """M restricted to the open subspace U."""
    S = M.space.subspace(U)
    return SheafModule(S, {p: M.stalk(p) for p in S.points}, {e: M.res(*e) for e in S.covers()}, M.name)


def stalkwise_iso(M: SheafModule, N: SheafModule, window=None) -> Verdict:
    """Stalkwise isomorphism (abstract, per point) of two modules on one space."""
    X = M.space
    w = _window(X, window)
    B = X.backend
    for p in X.points:
        if B is coeff.GB:
            a = B.invariants(M.stalk(p), w)
            b = B.invariants(N.stalk(p), w)
            if a != b:
                return no("graded dimensions differ", p)
            continue
        v = B.mod_iso_search(M.stalk(p), N.stalk(p))
        if v.is_no:
            return no(v.rule, p)
        if v.is_unknown:
            return unknown(v.rule, p)
    return _ok(X, w, "stalks isomorphic")
