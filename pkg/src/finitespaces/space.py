"""Ringed finite spaces, their morphisms, and the constructions built from
them: products, fibered products, graphics, global sections."""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from . import coeff
from .coeff import findimq as fq
from .coeff import graded as gr
from .coeff.base import DegreeWindow, RingHom, as_window
from .coeff.matrix import Mat
from .coeff import qmat
from .errors import BackendLimitation, BackendMismatch, ValidationError
from .poset import (MonotoneMap, Preorder, build_preorder, fibered_product_poset, point_key, sort_points,
                    t0_quotient)
from .verdict import Verdict, conjunction, no, yes


class RingedSpace:
    """A finite preorder with a ring at each point and restriction maps
    r_pq: O_p -> O_q for p <= q.

    Restrictions are given on generating relations (``poset.covers()``);
    composites are derived along paths and validated to be path independent.
    ``window`` is the degree window used by graded computations.
    """

    def __init__(self, poset: Preorder, rings: Mapping, restrictions: Mapping, window=None, name: str = ""):
        self.poset = poset
        self.rings = {p: rings[p] for p in poset.points if p in rings}
        missing = [p for p in poset.sorted_points() if p not in self.rings]
        if missing:
            raise ValidationError(f"missing ring at point {missing[0]!r}")
        for key in rings:
            if key not in poset:
                raise ValidationError(f"ring given for unknown point {key!r}")
        backs = {R.backend for R in self.rings.values()}
        if len(backs) > 1:
            raise BackendMismatch("rings of one space must share a backend")
        self.backend = backs.pop() if backs else coeff.ZB
        self.window = as_window(window)
        self.name = name
        self._given = dict(restrictions)
        self._res: Dict[Tuple, RingHom] = {}
        self._validate()

    # validation --------------------------------------------------------------
    def _validate(self):
        P = self.poset
        B = self.backend
        if B is coeff.GB:
            ms = {R.m for R in self.rings.values()}
            if len(ms) > 1:
                raise ValidationError("graded rings of one space must share a lattice")
        for (p, q), h in self._given.items():
            if p not in P or q not in P:
                raise ValidationError(f"restriction given for unknown pair {(p, q)!r}")
            if not P.leq(p, q):
                raise ValidationError(f"restriction given for {p!r},{q!r} but {p!r} is not <= {q!r}")
            if h.source != self.rings[p] or h.target != self.rings[q]:
                raise ValidationError(f"restriction {p!r}->{q!r} has the wrong source or target ring")
        for p in P.sorted_points():
            if (p, p) in self._given and not self._given[(p, p)] == B.identity_hom(self.rings[p]):
                raise ValidationError(f"restriction r_pp is not the identity at {p!r}")
        covers = P.covers()
        for p, q in covers:
            if (p, q) not in self._given:
                if B is coeff.ZB:
                    self._given[(p, q)] = B.identity_hom(self.rings[p])
                else:
                    raise ValidationError(f"missing restriction for {p!r} <= {q!r}")
        # composites along a breadth-first spanning tree of cover paths
        for p in P.sorted_points():
            self._res[(p, p)] = B.identity_hom(self.rings[p])
            queue = deque([p])
            while queue:
                a = queue.popleft()
                for b in P.upper_covers(a):
                    if (p, b) not in self._res:
                        self._res[(p, b)] = self._given[(a, b)] @ self._res[(p, a)]
                        queue.append(b)
        # every path agrees: r_{r q} o r_{p r} = r_{p q} for each cover p -> r
        for p, r in covers:
            for q in P.min_open(r):
                if not (self._res[(r, q)] @ self._given[(p, r)] == self._res[(p, q)]):
                    raise ValidationError(f"restrictions do not commute: paths from {p!r} to {q!r} via {r!r} differ")
        for (p, q), h in self._given.items():
            if not (h == self._res[(p, q)]):
                raise ValidationError(f"given restriction {p!r}->{q!r} differs from the composite along covers")

    # queries ---------------------------------------------------------------------
    @property
    def points(self):
        return self.poset.sorted_points()

    def ring(self, p):
        return self.rings[p]

    def res(self, p, q) -> RingHom:
        try:
            return self._res[(p, q)]
        except KeyError:
            raise ValidationError(f"{p!r} is not <= {q!r}") from None

    def covers(self):
        return self.poset.covers()

    def cover_restrictions(self):
        return {(p, q): self._res[(p, q)] for p, q in self.poset.covers()}

    def dimension(self):
        return self.poset.dimension()

    def subspace(self, subset, name: str = "") -> "RingedSpace":
        sub = self.poset.subspace(subset)
        rings = {p: self.rings[p] for p in sub.points}
        res = {(p, q): self._res[(p, q)] for p, q in sub.covers()}
        return RingedSpace(sub, rings, res, self.window, name)

    def with_window(self, window) -> "RingedSpace":
        X = RingedSpace(self.poset, self.rings, self.cover_restrictions(), window, self.name)
        return X

    def __repr__(self):
        return f"RingedSpace({self.name or ''} {len(self.poset)} points, backend={self.backend.name})"


class FiniteSpace(RingedSpace):
    """A ringed finite space whose restriction maps are certified flat."""

    def __init__(self, X: RingedSpace, certificates: Dict[Tuple, Verdict]):
        self.__dict__.update(X.__dict__)
        self.certificates = certificates


def build_space(poset: Preorder, rings: Mapping, restrictions: Mapping = None, window=None, name="") -> RingedSpace:
    return RingedSpace(poset, rings, restrictions or {}, window, name)


def flatness_report(X: RingedSpace) -> Dict[Tuple, Verdict]:
    return {(p, q): X.backend.is_flat(X.res(p, q)) for p, q in X.covers()}


def as_finite_space(X: RingedSpace) -> FiniteSpace:
    """Certify flatness of every generating restriction (composites of flat
    maps are flat). Raises ValidationError naming every failing edge."""
    if isinstance(X, FiniteSpace):
        return X
    rep = flatness_report(X)
    bad = [(e, v) for e, v in rep.items() if not v]
    if bad:
        lines = [f"{e[0]}->{e[1]}: {v.value}" for e, v in bad]
        raise ValidationError("restrictions not certified flat: " + "; ".join(lines))
    return FiniteSpace(X, rep)


def is_finite_space(X: RingedSpace) -> Verdict:
    rep = flatness_report(X)
    return conjunction((rep[e] if rep[e] else _edge_fail(rep[e], e) for e in sorted(rep, key=lambda e: (point_key(e[0]), point_key(e[1])))),
                       "all restrictions flat")


def _edge_fail(v, e):
    if v.is_no:
        return no(v.rule, e)
    return v


# morphisms ---------------------------------------------------------------------

class SpaceMorphism:
    """A monotone point map f with comorphisms f#_x: O_{f(x)} -> O_x."""

    def __init__(self, source: RingedSpace, target: RingedSpace, pointmap: Mapping, comorphisms: Mapping = None):
        if source.backend is not target.backend:
            raise BackendMismatch("morphism between spaces over different backends")
        self.source = source
        self.target = target
        self.map = MonotoneMap.make(source.poset, target.poset, dict(pointmap))
        self.pointmap = self.map.as_dict()
        B = source.backend
        co = dict(comorphisms or {})
        self.comorphisms = {}
        for x in source.points:
            fx = self.pointmap[x]
            if x in co:
                h = co[x]
            elif B is coeff.ZB:
                h = B.identity_hom(target.ring(fx))
            else:
                raise ValidationError(f"missing comorphism at {x!r}")
            if h.source != target.ring(fx) or h.target != source.ring(x):
                raise ValidationError(f"comorphism at {x!r} must map O_{fx} to O_{x}")
            self.comorphisms[x] = h
        for p, q in source.covers():
            lhs = self.comorphisms[q] @ target.res(self.pointmap[p], self.pointmap[q])
            rhs = source.res(p, q) @ self.comorphisms[p]
            if not (lhs == rhs):
                raise ValidationError(f"comorphism square does not commute on {p!r} <= {q!r}")

    def __call__(self, x):
        return self.pointmap[x]

    def co(self, x) -> RingHom:
        return self.comorphisms[x]

    def preimage(self, subset):
        return self.map.preimage(subset)

    def __repr__(self):
        return f"SpaceMorphism({self.source!r} -> {self.target!r})"


def build_morphism(X, Y, pointmap, comorphisms=None) -> SpaceMorphism:
    return SpaceMorphism(X, Y, pointmap, comorphisms)


def identity_morphism(X: RingedSpace) -> SpaceMorphism:
    return SpaceMorphism(X, X, {p: p for p in X.points}, {p: X.backend.identity_hom(X.ring(p)) for p in X.points})


def compose(g: SpaceMorphism, f: SpaceMorphism) -> SpaceMorphism:
    """g o f."""
    pm = {x: g(f(x)) for x in f.source.points}
    co = {x: f.co(x) @ g.co(f(x)) for x in f.source.points}
    return SpaceMorphism(f.source, g.target, pm, co)


def inclusion_morphism(X: RingedSpace, U) -> SpaceMorphism:
    S = X.subspace(U)
    return SpaceMorphism(S, X, {p: p for p in S.points}, {p: X.backend.identity_hom(X.ring(p)) for p in S.points})


# punctual spaces and base rings --------------------------------------------------------

def punctual(A, name="*", window=None) -> RingedSpace:
    return RingedSpace(build_preorder([name]), {name: A}, {}, window)


def base_ring(X: RingedSpace):
    """The base ring k over which every stalk is an algebra."""
    B = X.backend
    if B is coeff.ZB:
        return coeff.ZZ
    if B is coeff.QB:
        return fq.field()
    m = next(iter(X.rings.values())).m if X.rings else 0
    return gr.base_field(m)


def structure_map(k, R) -> RingHom:
    B = R.backend
    if B is coeff.ZB:
        return RingHom(k, R)
    if B is coeff.QB:
        return RingHom(k, R, Mat.from_columns([R.unit], R.dim), True)
    return B.inclusion(k, R)


def to_point(X: RingedSpace, A=None, maps: Mapping = None, name="*") -> SpaceMorphism:
    """X -> (*, A); by default A is the base ring with structural maps."""
    if A is None:
        A = base_ring(X)
    P = punctual(A, name, X.window)
    co = dict(maps) if maps is not None else {x: structure_map(A, X.ring(x)) for x in X.points}
    return SpaceMorphism(X, P, {x: name for x in X.points}, co)


# tensor products of rings and maps out of them ----------------------------------------

def tensor_hom(T, i1: RingHom, i2: RingHom, u: RingHom, v: RingHom) -> RingHom:
    """The ring map T = R1 (x)_{R0} R2 -> C restricting to u on R1 and v on R2."""
    B = T.backend
    C = u.target
    if B is coeff.ZB:
        return RingHom(T, C)
    if B is coeff.GB:
        # first coordinates come from R1, appended ones from R2
        R1, R2 = i1.source, i2.source
        cols = [u.data.column(j) for j in range(R1.m)]
        cols += [[0] * C.m for _ in range(T.m - R1.m)]
        for j in range(R2.m):
            pos = i2.data.column(j).index(1)
            if pos >= R1.m:
                cols[pos] = v.data.column(j)
        return RingHom(T, C, Mat.from_columns(cols, C.m), True)
    # FinDimQ: pick pure tensors forming a basis of T
    R1, R2 = i1.source, i2.source
    vecs, imgs = [], []
    cur = None
    for a in range(R1.dim):
        for b in range(R2.dim):
            w = T.mul(i1.data.column(a), i2.data.column(b))
            cand = Mat.from_columns(vecs + [w], T.dim)
            if qmat.rank(cand) > len(vecs):
                vecs.append(w)
                imgs.append(C.mul(u.data.column(a), v.data.column(b)))
    if len(vecs) != T.dim:
        raise ValidationError("pure tensors do not span the tensor algebra")
    W = Mat.from_columns(vecs, T.dim)
    phi = Mat.from_columns(imgs, C.dim) @ qmat.inverse(W)
    return RingHom(T, C, phi, True)


# fibered products -----------------------------------------------------------

class FiberedProduct:
    """X x_S Y with its projections and the tensor data at each point."""

    def __init__(self, space, p1, p2, tensors):
        self.space = space
        self.p1 = p1
        self.p2 = p2
        self.tensors = tensors  # (x, y) -> (T, i1, i2)

    def __iter__(self):
        return iter((self.space, self.p1, self.p2))


def fibered_product_space(f: SpaceMorphism, g: SpaceMorphism, name="") -> FiberedProduct:
    if f.target.poset != g.target.poset:
        raise ValidationError("fibered product needs morphisms into the same space")
    X, Y, S = f.source, g.source, f.target
    B = X.backend
    P = fibered_product_poset(f.map, g.map)
    tensors = {}
    for x, y in P.points:
        s = f(x)
        tensors[(x, y)] = B.tensor_rings(X.ring(x), Y.ring(y), S.ring(s), f.co(x), g.co(y))
    rings = {pt: t[0] for pt, t in tensors.items()}
    res = {}
    for a, b in P.covers():
        T, i1, i2 = tensors[a]
        T2, j1, j2 = tensors[b]
        u = j1 @ X.res(a[0], b[0])
        v = j2 @ Y.res(a[1], b[1])
        res[(a, b)] = tensor_hom(T, i1, i2, u, v)
    window = X.window or Y.window
    Z = RingedSpace(P, rings, res, window, name)
    p1 = SpaceMorphism(Z, X, {pt: pt[0] for pt in P.points}, {pt: tensors[pt][1] for pt in P.points})
    p2 = SpaceMorphism(Z, Y, {pt: pt[1] for pt in P.points}, {pt: tensors[pt][2] for pt in P.points})
    return FiberedProduct(Z, p1, p2, tensors)


def product_space(X: RingedSpace, Y: RingedSpace, name="") -> FiberedProduct:
    """X x_k Y over the punctual space of the base ring."""
    k = base_ring(X)
    return fibered_product_space(to_point(X, k), to_point(Y, k), name)


def graphic(f: SpaceMorphism, q: SpaceMorphism = None) -> Tuple[SpaceMorphism, FiberedProduct]:
    """Gamma_f: X -> X x_S Y, for f: X -> Y and q: Y -> S (default: Y to the
    base point). Returns (graphic, fibered product)."""
    X, Y = f.source, f.target
    if q is None:
        q = to_point(Y, base_ring(Y))
    fp = fibered_product_space(compose(q, f), q)
    Z = fp.space
    B = X.backend
    co = {}
    for x in X.points:
        T, i1, i2 = fp.tensors[(x, f(x))]
        co[x] = tensor_hom(T, i1, i2, B.identity_hom(X.ring(x)), f.co(x))
    G = SpaceMorphism(X, Z, {x: (x, f(x)) for x in X.points}, co)
    return G, fp


# global sections -----------------------------------------------------------------

def global_sections(X: RingedSpace, U=None):
    """(A, {p: A -> O_p}) with A the ring of sections of O over U (default X)."""
    pts = X.points if U is None else sort_points(U)
    B = X.backend
    if B is coeff.ZB:
        if not pts:
            raise BackendLimitation("the zero ring is not representable on ZConst")
        if len(X.poset.components(pts)) > 1:
            raise BackendLimitation("sections of O over a disconnected set are Z^c, not representable on ZConst")
        return coeff.ZZ, {p: RingHom(coeff.ZZ, coeff.ZZ) for p in pts}
    if B is coeff.GB:
        if not pts:
            raise BackendLimitation("the zero ring is not representable on GradedMonomial")
        if len(X.poset.components(pts)) > 1:
            raise BackendLimitation("sections over a disconnected set are not a monomial ring")
        m = X.ring(pts[0]).m
        for p in pts:
            for q in X.poset.min_open(p):
                if q in set(pts) and not B._is_identity_lattice(X.res(p, q)):
                    raise BackendLimitation("graded sections need identity-lattice restrictions")
        signs = list(X.ring(pts[0]).signs)
        for p in pts[1:]:
            signs = [gr.sign_meet(a, b) for a, b in zip(signs, X.ring(p).signs)]
        A = gr.MonomialRing(signs, X.ring(pts[0]).names)
        return A, {p: B.inclusion(A, X.ring(p)) for p in pts}
    # FinDimQ: equalizer inside the product algebra
    algs = [X.ring(p) for p in pts]
    Pr = fq.product_algebra(algs)
    offs = {}
    o = 0
    for p in pts:
        offs[p] = o
        o += X.ring(p).dim
    rows = []
    S = set(pts)
    for p in pts:
        for q in [q for q in pts if q != p and X.poset.leq(p, q)]:
            h = X.res(p, q)
            for r in range(X.ring(q).dim):
                row = [Fraction(0)] * Pr.dim
                for c in range(X.ring(p).dim):
                    row[offs[p] + c] += h.data[r, c]
                row[offs[q] + r] -= 1
                rows.append(row)
    D = Mat(rows, len(rows), Pr.dim) if rows else Mat.zeros(0, Pr.dim)
    W = qmat.nullspace(D)
    A, inc = fq.subalgebra(Pr, W)
    maps = {}
    for p in pts:
        d = X.ring(p).dim
        proj = Mat([[int(j == offs[p] + i) for j in range(Pr.dim)] for i in range(d)], d, Pr.dim)
        maps[p] = RingHom(A, X.ring(p), proj @ inc.data, True)
    return A, maps


# T0 quotient of a ringed space ----------------------------------------------------

def t0_ringed(X: RingedSpace):
    """(X0, retraction X -> X0, inclusion X0 -> X). Equivalent points have
    mutually inverse restrictions, so the class representative carries the
    ring."""
    P0, qmap = t0_quotient(X.poset)
    B = X.backend
    for p in X.points:
        for q in X.points:
            if X.poset.equivalent(p, q) and not B.is_ring_iso(X.res(p, q)):
                raise ValidationError(f"restriction between equivalent points {p!r},{q!r} is not an isomorphism")
    rings = {r: X.ring(r) for r in P0.points}
    res = {(a, b): X.res(a, b) for a, b in P0.covers()}
    X0 = RingedSpace(P0, rings, res, X.window, X.name)
    retr = SpaceMorphism(X, X0, qmap, {p: X.res(qmap[p], p) for p in X.points})
    inc = SpaceMorphism(X0, X, {r: r for r in P0.points}, {r: B.identity_hom(X.ring(r)) for r in P0.points})
    return X0, retr, inc
