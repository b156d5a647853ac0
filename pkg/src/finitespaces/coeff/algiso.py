"""Isomorphism search between finite-dimensional commutative Q-algebras.

Strategy: compare invariants (dimension, powers of the radical); split both
algebras into local factors with idempotents lifted from a separating
element; match factors by invariants; inside a local factor search images of
generators of the maximal ideal on a small coefficient grid. Algebras whose
semisimple part is not split over Q, and searches that find nothing on the
grid, end in Unknown.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import List, Optional, Tuple

import sympy

from ..verdict import Value, Verdict, no, unknown
from . import qmat
from .base import RingHom
from .matrix import Mat

GRID = (0, 1, -1, 2, -2)


def _power_dims(R) -> Tuple[int, ...]:
    from .findimq import QB

    return QB.ring_invariants(R)[1]


def _rad_generators(R, J: Mat) -> List[list]:
    """Elements of the radical spanning it modulo its square."""
    if J.ncols == 0:
        return []
    cols = J.columns()
    sq = [R.mul(a, b) for a in cols for b in cols]
    J2 = qmat.column_basis(Mat.from_columns(sq, R.dim)) if sq else Mat.zeros(R.dim, 0)
    gens = []
    cur = J2
    for c in cols:
        if cur.ncols == 0 or not qmat.in_span(cur, c):
            gens.append(c)
            cur = Mat.hstack([cur, Mat.from_columns([c], R.dim)]) if cur.ncols else Mat.from_columns([c], R.dim)
    return gens


def _eigenvalues(L: Mat):
    M = sympy.Matrix(L.nrows, L.ncols, lambda i, j: sympy.Rational(L[i, j].numerator, L[i, j].denominator))
    lam = sympy.Symbol("lam")
    poly = sympy.Poly(M.charpoly(lam).as_expr(), lam)
    roots = sympy.roots(poly, filter="Q")
    if sum(roots.values()) != L.nrows:
        return None
    return {Fraction(int(r.p), int(r.q)): m for r, m in roots.items()}


def _lift_idempotent(R, e):
    for _ in range(64):
        e2 = R.mul(e, e)
        if tuple(e2) == tuple(e):
            return tuple(e)
        e3 = R.mul(e2, e)
        e = tuple(3 * a - 2 * b for a, b in zip(e2, e3))
    raise ArithmeticError("idempotent lifting did not converge")


def primitive_idempotents(R, seed=0, tries=12) -> Optional[List[tuple]]:
    """Orthogonal primitive idempotents summing to 1, or None if the
    semisimple quotient is not split over Q."""
    from .findimq import quotient_algebra

    if R.dim == 0:
        return []
    J = R.radical()
    S, pi = quotient_algebra(R, J)
    rng = random.Random(seed)
    for t in range(tries):
        a = [Fraction(rng.randint(-5, 5)) for _ in range(R.dim)] if t else [Fraction(i + 1) for i in range(R.dim)]
        La = S.lmul(pi.data.apply(a))
        ev = _eigenvalues(La)
        if ev is None:
            continue
        if len(ev) != S.dim:
            continue
        idems = []
        lams = sorted(ev)
        for lam in lams:
            e = R.unit
            for mu in lams:
                if mu == lam:
                    continue
                factor = tuple((x - mu * u) / (lam - mu) for x, u in zip(a, R.unit))
                e = R.mul(e, factor)
            idems.append(_lift_idempotent(R, e))
        # make them orthogonal and complete by successive correction
        fixed = []
        rest = R.unit
        for e in idems[:-1]:
            e = _lift_idempotent(R, R.mul(e, rest))
            fixed.append(e)
            rest = tuple(x - y for x, y in zip(rest, e))
        fixed.append(_lift_idempotent(R, rest))
        return fixed
    return None


def local_factor(R, e):
    """The algebra eR with unit e, and the projection R -> eR as a matrix
    (coordinates in a basis of eR)."""
    from .findimq import QAlgebra, structure_constants_from_basis

    W = qmat.column_basis(R.lmul(e))
    mult, u = structure_constants_from_basis(R, W, e)
    C = QAlgebra(mult, u, check=False)
    proj = qmat.solve(W, R.lmul(e))
    return C, W, proj


def _monomial_basis(R, gens):
    """Exponent tuples whose monomials in ``gens`` form a basis of R (R local,
    gens generating the maximal ideal mod its square)."""
    g = len(gens)
    basis_exps = [tuple([0] * g)]
    vecs = [tuple(R.unit)]
    W = Mat.from_columns(vecs, R.dim)
    frontier = [tuple([0] * g)]
    while frontier and len(vecs) < R.dim:
        new = []
        for ex in frontier:
            for i in range(g):
                e2 = list(ex)
                e2[i] += 1
                e2 = tuple(e2)
                if e2 in basis_exps or e2 in new:
                    continue
                v = _mono(R, gens, e2)
                if not qmat.in_span(W, v):
                    basis_exps.append(e2)
                    vecs.append(tuple(v))
                    W = Mat.from_columns(vecs, R.dim)
                    new.append(e2)
        frontier = new
    if len(vecs) != R.dim:
        return None
    return basis_exps, W


def _mono(R, gens, ex):
    v = tuple(R.unit)
    for x, k in zip(gens, ex):
        for _ in range(k):
            v = R.mul(v, x)
    return v


def _local_iso(C, D, budget):
    """Search an isomorphism C -> D of local algebras; returns (matrix or
    None, nodes used, exhausted flag)."""
    JC, JD = C.radical(), D.radical()
    if C.dim == 1:
        return Mat([[Fraction(1)]], 1, 1), 1, False
    gens = _rad_generators(C, JC)
    mb = _monomial_basis(C, gens)
    if mb is None:
        return None, 0, True
    exps, WC = mb
    WCinv = qmat.inverse(WC)
    dgens = _rad_generators(D, JD)
    if len(dgens) != len(gens):
        return None, 0, False
    Jcols = JD.columns()
    k = len(Jcols)
    nodes = 0
    coeff_iter = itertools.product(GRID, repeat=k)
    cands = []
    for coeffs in coeff_iter:
        if not any(coeffs):
            continue
        cands.append(tuple(sum((c * col[r] for c, col in zip(coeffs, Jcols)), Fraction(0)) for r in range(D.dim)))
        if len(cands) > 400:
            break
    for images in itertools.product(cands, repeat=len(gens)):
        nodes += 1
        if nodes > budget:
            return None, nodes, True
        cols = [_mono(D, images, ex) for ex in exps]
        phiW = Mat.from_columns(cols, D.dim)
        if not qmat.is_invertible(phiW):
            continue
        phi = phiW @ WCinv
        ok = True
        pc = phi.columns()
        for i in range(C.dim):
            for j in range(i, C.dim):
                if tuple(phi.apply(C.mult[i][j])) != D.mul(pc[i], pc[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return phi, nodes, False
    return None, nodes, len(cands) > 400


def ring_iso_search(A, B, budget=20000) -> Verdict:
    from .findimq import QB

    if A == B:
        return Verdict(Value.YES, "identical structure constants", QB.identity_hom(A))
    if A.dim != B.dim:
        return no("dimensions differ", (A.dim, B.dim))
    pa, pb = _power_dims(A), _power_dims(B)
    if pa != pb:
        return no("radical power dimensions differ", (pa, pb))
    ea, eb = primitive_idempotents(A), primitive_idempotents(B)
    if ea is None or eb is None:
        return unknown("semisimple part not split over Q; no search implemented")
    if len(ea) != len(eb):
        return no("numbers of local factors differ", (len(ea), len(eb)))
    fa = [local_factor(A, e) for e in ea]
    fb = [local_factor(B, e) for e in eb]
    sig_a = [(C.dim, _power_dims(C)) for C, _, _ in fa]
    sig_b = [(C.dim, _power_dims(C)) for C, _, _ in fb]
    if sorted(sig_a) != sorted(sig_b):
        return no("local factor invariants differ", (sorted(sig_a), sorted(sig_b)))
    used = 0
    exhausted = False
    cache = {}
    for perm in itertools.permutations(range(len(fb))):
        if any(sig_a[i] != sig_b[perm[i]] for i in range(len(fa))):
            continue
        total = Mat.zeros(B.dim, A.dim)
        ok = True
        for i, (C, WC, projC) in enumerate(fa):
            D, WD, _ = fb[perm[i]]
            key = (i, perm[i])
            if key not in cache:
                phi, n, ex = _local_iso(C, D, budget - used)
                used += n
                exhausted = exhausted or ex
                cache[key] = phi
            phi = cache[key]
            if phi is None:
                ok = False
                break
            total = total + WD @ phi @ projC
        if ok:
            return Verdict(Value.YES, "local factors matched", RingHom(A, B, total, check=True))
        if used > budget:
            break
    if exhausted:
        return unknown("ring isomorphism search budget exhausted")
    return unknown("no isomorphism found on the coefficient grid")
