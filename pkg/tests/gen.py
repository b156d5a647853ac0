"""Random ringed finite spaces and sheaves for property tests.

ZConst sheaves are Z^k / K_p with K_p growing along the order and
restrictions given by multiplication by d^(h(q) - h(p)); FinDimQ spaces use
truncations Q[t]/t^a with a decreasing along the order, and modules are
quotients of free modules by relations that accumulate along the order.
"""
from __future__ import annotations

import random
from fractions import Fraction

from finitespaces import coeff
from finitespaces.coeff import findimq as fq
from finitespaces.coeff import qmat
from finitespaces.coeff.base import RingHom
from finitespaces.coeff.matrix import Mat
from finitespaces.coeff.zconst import ZModule
from finitespaces.poset import build_preorder
from finitespaces.sheafmod import SheafModule, make_restriction
from finitespaces.space import RingedSpace

ZB, QB = coeff.ZB, coeff.QB


def random_poset(rng: random.Random, n: int, density: float = 0.35, with_minimum: bool = False):
    pts = [f"p{i}" for i in range(n)]
    rels = [(pts[i], pts[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    if with_minimum:
        rels += [(pts[0], q) for q in pts[1:]]
    return build_preorder(pts, rels)


def height(P, p):
    return len(P.closure(p))


# ZConst -----------------------------------------------------------------------

def zconst_space(P, name=""):
    return RingedSpace(P, {p: coeff.ZZ for p in P.points}, {}, None, name)


def random_zsheaf(rng: random.Random, X: RingedSpace, rank: int = None, scale: int = None):
    P = X.poset
    k = rank if rank is not None else rng.randint(1, 2)
    d = scale if scale is not None else rng.choice([1, 1, 2])
    gens = {}
    for r in P.points:
        gens[r] = [[rng.choice([0, 1, 2, 3]) for _ in range(k)] for _ in range(rng.choice([0, 0, 1]))]
    stalks = {}
    for p in P.points:
        cols = [g for r in P.closure(p) for g in gens[r]]
        stalks[p] = ZModule(k, Mat.from_columns(cols, k) if cols else None)
    res = {}
    for p, q in P.covers():
        c = d ** (height(P, q) - height(P, p))
        mat = Mat.identity(k).scale(c)
        res[(p, q)] = make_restriction(stalks[p], stalks[q], X.res(p, q), mat)
    return SheafModule(X, stalks, res, "random")


# FinDimQ ----------------------------------------------------------------------

def _truncation(a: int, b: int) -> Mat:
    return Mat([[int(i == j) for j in range(a)] for i in range(b)], b, a)


def random_qspace(rng: random.Random, P, top: int = 3, name=""):
    """Rings Q[t]/t^a_p with a_p decreasing along the order; restrictions
    are the truncation maps."""
    drop = {r: rng.choice([0, 0, 0, 1]) for r in P.points}
    a = {p: max(1, top - sum(drop[r] for r in P.closure(p))) for p in P.points}
    rings = {p: fq.truncated_polynomial(a[p], "t") for p in P.points}
    res = {(p, q): RingHom(rings[p], rings[q], _truncation(a[p], a[q])) for p, q in P.covers()}
    return RingedSpace(P, rings, res, None, name)


def _t_power(A, e: int) -> Mat:
    """Multiplication by t^e on Q[t]/t^n."""
    n = A.dim
    return Mat([[int(i == j + e) for j in range(n)] for i in range(n)], n, n)


def random_qsheaf(rng: random.Random, X: RingedSpace, rank: int = None, shift: bool = None):
    """M_p = O_p^r / relations accumulated over the closure of p."""
    P = X.poset
    r = rank if rank is not None else rng.randint(1, 2)
    shift = rng.random() < 0.3 if shift is None else shift
    rels = {}
    for s in P.points:
        rels[s] = [[[rng.choice([0, 0, 1, -1]) for _ in range(3)] for _ in range(r)] for _ in range(rng.choice([0, 0, 1]))]
    quo = {}
    stalks = {}
    for p in P.points:
        A = X.ring(p)
        F = fq.free_module(A, r)
        vecs = []
        for s in P.closure(p):
            for rel in rels[s]:
                v = []
                for g in range(r):
                    v.extend(Fraction(x) for x in rel[g][: A.dim])
                for i in range(A.dim):
                    vecs.append(F.actions[i].apply(v))
        W = Mat.from_columns(vecs, F.dim) if vecs else Mat.zeros(F.dim, 0)
        Pm, Sm = qmat.quotient_maps(W, F.dim)
        acts = [Pm @ L @ Sm for L in F.actions]
        stalks[p] = fq.QModule(A, Pm.nrows, acts)
        quo[p] = (Pm, Sm)
    res = {}
    for p, q in P.covers():
        Ap, Aq = X.ring(p), X.ring(q)
        e = height(P, q) - height(P, p) if shift else 0
        T = _t_power(Aq, e) @ _truncation(Ap.dim, Aq.dim)
        free = Mat.block_diag([T] * r)
        mat = quo[q][0] @ free @ quo[p][1]
        res[(p, q)] = make_restriction(stalks[p], stalks[q], X.res(p, q), mat)
    return SheafModule(X, stalks, res, "random")


def random_space(rng: random.Random, n: int, backend: str, **kw):
    P = random_poset(rng, n, **kw)
    return zconst_space(P) if backend == "ZConst" else random_qspace(rng, P)


def random_sheaf(rng: random.Random, X: RingedSpace):
    return random_zsheaf(rng, X) if X.backend is ZB else random_qsheaf(rng, X)
