"""Finite-dimensional commutative Q-algebras given by structure constants, and
finitely generated modules over them.

A module is stored as a Q-vector space with one action matrix per basis
element of the algebra; every presentation is converted to this form, which
turns kernels, cokernels and base change into rational linear algebra.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import List, Optional, Sequence

from ..errors import BackendMismatch, ValidationError
from ..verdict import Value, Verdict, no, unknown, yes
from .base import FINDIMQ, ModMap, RingHom
from .matrix import Mat
from . import qmat


def _F(x):
    return Fraction(x)


class QAlgebra:
    """Commutative unital Q-algebra with basis e_0..e_{d-1};
    ``mult[i][j]`` is the coordinate vector of e_i * e_j."""

    __slots__ = ("dim", "mult", "unit", "labels", "_lmul", "_hash", "_rad")

    def __init__(self, mult, unit, labels=None, check=True):
        d = len(unit)
        self.dim = d
        self.mult = tuple(tuple(tuple(_F(x) for x in mult[i][j]) for j in range(d)) for i in range(d))
        self.unit = tuple(_F(x) for x in unit)
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(d))
        self._lmul = None
        self._hash = None
        self._rad = None
        if check:
            self._validate()

    @property
    def backend(self):
        return QB

    def _validate(self):
        d = self.dim
        if len(self.mult) != d or any(len(r) != d for r in self.mult):
            raise ValidationError("structure constants have the wrong shape")
        for i in range(d):
            for j in range(d):
                if len(self.mult[i][j]) != d:
                    raise ValidationError("structure constants have the wrong shape")
                if self.mult[i][j] != self.mult[j][i]:
                    raise ValidationError(f"algebra not commutative at ({i},{j})")
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    if self.mul(self.mult[i][j], self.basis(k)) != self.mul(self.basis(i), self.mult[j][k]):
                        raise ValidationError(f"algebra not associative at ({i},{j},{k})")
        for i in range(d):
            if self.mul(self.unit, self.basis(i)) != self.basis(i):
                raise ValidationError("unit vector is not a unit")

    def basis(self, i):
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def mul(self, a, b):
        d = self.dim
        out = [Fraction(0)] * d
        for i in range(d):
            if a[i]:
                for j in range(d):
                    if b[j]:
                        c = a[i] * b[j]
                        for k, x in enumerate(self.mult[i][j]):
                            if x:
                                out[k] += c * x
        return tuple(out)

    def lmul_basis(self, i) -> Mat:
        if self._lmul is None:
            d = self.dim
            self._lmul = [
                Mat([[self.mult[i][j][k] for j in range(d)] for k in range(d)], d, d) for i in range(d)
            ]
        return self._lmul[i]

    def lmul(self, a) -> Mat:
        d = self.dim
        out = Mat.zeros(d, d)
        for i in range(d):
            if a[i]:
                out = out + self.lmul_basis(i).scale(a[i])
        return out

    def __eq__(self, other):
        return isinstance(other, QAlgebra) and self.dim == other.dim and self.mult == other.mult and self.unit == other.unit

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, self.mult, self.unit))
        return self._hash

    def __repr__(self):
        return f"QAlgebra(dim={self.dim}, basis={list(self.labels)})"

    def radical(self) -> Mat:
        """Jacobson radical as column basis: kernel of the trace form
        (a, b) -> Tr(L_{ab}), valid in characteristic 0."""
        if self._rad is None:
            d = self.dim
            T = Mat([[_trace(self.lmul(self.mult[i][j])) for j in range(d)] for i in range(d)], d, d)
            self._rad = qmat.nullspace(T)
        return self._rad


def _trace(A: Mat):
    return sum((A[i, i] for i in range(A.nrows)), Fraction(0))


# algebra constructors ------------------------------------------------------------

def field() -> QAlgebra:
    return QAlgebra([[[1]]], [1], ["1"])


def dual_numbers() -> QAlgebra:
    """Q[e]/(e^2) with basis 1, e."""
    return truncated_polynomial(2, "e")


def truncated_polynomial(n: int, var="x") -> QAlgebra:
    """Q[x]/(x^n), basis 1, x, ..., x^{n-1}."""
    mult = [[[int(k == i + j) if i + j < n else 0 for k in range(n)] for j in range(n)] for i in range(n)]
    labels = ["1"] + [var if i == 1 else f"{var}^{i}" for i in range(1, n)]
    return QAlgebra(mult, [1] + [0] * (n - 1), labels)


def product_algebra(algs: Sequence[QAlgebra]) -> QAlgebra:
    algs = list(algs)
    d = sum(A.dim for A in algs)
    mult = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    unit = []
    labels = []
    off = 0
    for t, A in enumerate(algs):
        for i in range(A.dim):
            for j in range(A.dim):
                for k in range(A.dim):
                    mult[off + i][off + j][off + k] = A.mult[i][j][k]
        unit.extend(A.unit)
        labels.extend(f"{lab}@{t}" for lab in A.labels)
        off += A.dim
    if d == 0:
        return QAlgebra([], [], [])
    return QAlgebra(mult, unit, labels, check=False)


def split_algebra(n: int) -> QAlgebra:
    """Q^n."""
    return product_algebra([field()] * n)


def structure_constants_from_basis(A: QAlgebra, W: Mat, unit=None):
    """Structure constants of the subalgebra spanned by the columns of W
    (assumed closed under multiplication and containing ``unit``, by
    default the unit of A)."""
    k = W.ncols
    cols = W.columns()
    mult = [[None] * k for _ in range(k)]
    for a in range(k):
        for b in range(a, k):
            prod = A.mul(cols[a], cols[b])
            c = qmat.solve_vec(W, prod)
            if c is None:
                raise ValidationError("subspace is not closed under multiplication")
            mult[a][b] = mult[b][a] = c
    u = qmat.solve_vec(W, A.unit if unit is None else unit)
    if u is None:
        raise ValidationError("subspace does not contain the unit")
    return mult, u


def subalgebra(A: QAlgebra, W: Mat):
    """(B, inclusion B -> A) for the subalgebra spanned by W's columns."""
    W = qmat.column_basis(W) if W.ncols else W
    mult, u = structure_constants_from_basis(A, W)
    B = QAlgebra(mult, u, check=False) if W.ncols else zero_algebra()
    return B, RingHom(B, A, W, check=False)


def zero_algebra() -> QAlgebra:
    return QAlgebra([], [], [], check=False)


def quotient_algebra(A: QAlgebra, I: Mat):
    """(A/I, projection) for an ideal spanned by the columns of I."""
    d = A.dim
    P, S = qmat.quotient_maps(I, d)
    q = P.nrows
    mult = [[None] * q for _ in range(q)]
    Scols = S.columns()
    for a in range(q):
        for b in range(q):
            mult[a][b] = P.apply(A.mul(Scols[a], Scols[b]))
    unit = P.apply(A.unit)
    B = QAlgebra(mult, unit)
    return B, RingHom(A, B, P)


def ideal_generated(A: QAlgebra, gens: Sequence[Sequence]) -> Mat:
    """Column basis of the ideal generated by the given elements."""
    vecs = []
    for g in gens:
        for i in range(A.dim):
            vecs.append(A.mul(A.basis(i), tuple(_F(x) for x in g)))
    if not vecs:
        return Mat.zeros(A.dim, 0)
    return qmat.column_basis(Mat.from_columns(vecs, A.dim))


# modules ------------------------------------------------------------------------

class QModule:
    """A module over a QAlgebra: a Q-space of dimension ``dim`` with action
    matrices ``actions[i]`` for each algebra basis element e_i."""

    __slots__ = ("ring", "dim", "actions")

    def __init__(self, ring: QAlgebra, dim: int, actions: Sequence[Mat], check=True):
        self.ring = ring
        self.dim = dim
        self.actions = tuple(actions)
        if check:
            self._validate()

    @property
    def backend(self):
        return QB

    def _validate(self):
        R, n = self.ring, self.dim
        if len(self.actions) != R.dim:
            raise ValidationError("need one action matrix per algebra basis element")
        for L in self.actions:
            if L.shape != (n, n):
                raise ValidationError("action matrix has wrong shape")
        U = self.act(R.unit)
        if U != Mat.identity(n):
            raise ValidationError("unit does not act as the identity")
        for i in range(R.dim):
            for j in range(i, R.dim):
                if self.actions[i] @ self.actions[j] != self.act(R.mult[i][j]):
                    raise ValidationError(f"action not multiplicative at ({i},{j})")

    def act(self, a) -> Mat:
        n = self.dim
        out = Mat.zeros(n, n)
        for i, x in enumerate(a):
            if x:
                out = out + self.actions[i].scale(x)
        return out

    def __repr__(self):
        return f"QModule(dim={self.dim} over {self.ring!r})"


def free_module(A: QAlgebra, rank: int) -> QModule:
    acts = [Mat.block_diag([A.lmul_basis(i)] * rank) if rank else Mat.zeros(0, 0) for i in range(A.dim)]
    return QModule(A, A.dim * rank, acts, check=False)


def module_from_presentation(A: QAlgebra, ngens: int, relations: Sequence[Sequence[Sequence]]) -> QModule:
    """Cokernel of A^r -> A^ngens, each relation a list of ngens algebra
    elements (coordinate vectors)."""
    F = free_module(A, ngens)
    d = A.dim
    vecs = []
    for rel in relations:
        v = []
        for g in range(ngens):
            v.extend(_F(x) for x in rel[g])
        # the submodule generated by v
        for i in range(d):
            vecs.append(F.actions[i].apply(v))
    W = Mat.from_columns(vecs, F.dim) if vecs else Mat.zeros(F.dim, 0)
    P, S = qmat.quotient_maps(W, F.dim)
    acts = [P @ L @ S for L in F.actions]
    return QModule(A, P.nrows, acts)


def quotient_ring_module(A: QAlgebra, I: Mat) -> QModule:
    """A/I as an A-module."""
    P, S = qmat.quotient_maps(I, A.dim)
    return QModule(A, P.nrows, [P @ A.lmul_basis(i) @ S for i in range(A.dim)])


class QBackend:
    name = FINDIMQ
    exact = True

    # rings -------------------------------------------------------------------
    def check_ring_hom(self, h):
        A, B = h.source, h.target
        H = h.data
        if not isinstance(H, Mat):
            H = Mat(H, B.dim, A.dim)
            h.data = H
        H = h.data
        if H.shape != (B.dim, A.dim):
            raise ValidationError(f"ring map matrix has shape {H.shape}, expected {(B.dim, A.dim)}")
        if A.dim == 0:
            return
        if tuple(H.apply(A.unit)) != B.unit:
            raise ValidationError("ring map does not preserve the unit")
        cols = H.columns()
        for i in range(A.dim):
            for j in range(i, A.dim):
                if tuple(H.apply(A.mult[i][j])) != B.mul(cols[i], cols[j]):
                    raise ValidationError(f"ring map not multiplicative on basis pair ({i},{j})")

    def make_hom(self, A, B, mat, check=True):
        if not isinstance(mat, Mat):
            mat = Mat([[_F(x) for x in row] for row in mat], B.dim, A.dim)
        return RingHom(A, B, mat, check)

    def identity_hom(self, R):
        return RingHom(R, R, Mat.identity(R.dim).to_fractions(), check=False)

    def compose_hom(self, g, f):
        return RingHom(f.source, g.target, g.data @ f.data, check=False)

    def hom_equal(self, f, g):
        return f.data == g.data

    def is_ring_iso(self, h):
        return qmat.is_invertible(h.data)

    def inverse_hom(self, h):
        return RingHom(h.target, h.source, qmat.inverse(h.data), check=False)

    def ring_invariants(self, R: QAlgebra):
        """(dim, dims of rad^k for k = 1, 2, ... until zero)."""
        dims = []
        P = R.radical()
        while P.ncols:
            dims.append(P.ncols)
            prods = []
            rad = R.radical().columns()
            for a in P.columns():
                for b in rad:
                    prods.append(R.mul(a, b))
            P = qmat.column_basis(Mat.from_columns(prods, R.dim)) if prods else Mat.zeros(R.dim, 0)
            if len(dims) > R.dim + 1:
                break
        return (R.dim, tuple(dims))

    def is_flat(self, h):
        """Flatness of the target as a module over the source via
        Tor_1(target, source/rad) = ker(rad (x) target -> target)."""
        A, B = h.source, h.target
        if A.dim == 0:
            return yes("zero ring")
        J = A.radical()
        if J.ncols == 0:
            return yes("source is semisimple (radical zero)")
        # J as an A-module
        Jmod = QModule(A, J.ncols, [qmat.solve(J, A.lmul_basis(i) @ J) for i in range(A.dim)], check=False)
        Bmod = self.restrict(self.ring_as_module(B), h)
        # Tor_1 = kernel of J (x)_A B -> A (x)_A B = B
        T, P, S = self._tensor_data(Jmod, Bmod)
        incl = ModMap(Jmod, self.ring_as_module(A), J, check=False)
        big = self._tensor_space_map(incl.mat, Mat.identity(B.dim), Jmod.dim, B.dim, A.dim, B.dim)
        # A (x)_A B is identified with B via a (x) b -> h(a) b
        mult = Mat.from_columns(
            [B.mul(h.data.column(a), B.basis(b)) for a in range(A.dim) for b in range(B.dim)], B.dim
        )
        G = mult @ big @ S
        K = qmat.nullspace(G)
        if K.ncols == 0:
            return yes("Tor_1(target, source/rad) = 0")
        return no("Tor_1(target, source/rad) != 0", K.ncols)

    def tensor_rings(self, R1, R2, R0, h1, h2):
        """R1 (x)_{R0} R2 with its canonical maps."""
        d1, d2 = R1.dim, R2.dim
        n = d1 * d2
        rels = []
        for i in range(R0.dim):
            a1 = h1.data.column(i)
            a2 = h2.data.column(i)
            for x in range(d1):
                for y in range(d2):
                    v = [Fraction(0)] * n
                    l = R1.mul(a1, R1.basis(x))
                    for s in range(d1):
                        if l[s]:
                            v[s * d2 + y] += l[s]
                    r = R2.mul(a2, R2.basis(y))
                    for t in range(d2):
                        if r[t]:
                            v[x * d2 + t] -= r[t]
                    rels.append(v)
        W = Mat.from_columns(rels, n) if rels else Mat.zeros(n, 0)
        P, S = qmat.quotient_maps(W, n)
        q = P.nrows
        Scols = S.columns()

        def tmul(u, v):
            out = [Fraction(0)] * n
            for a in range(n):
                if u[a]:
                    x1, y1 = divmod(a, d2)
                    for b in range(n):
                        if v[b]:
                            x2, y2 = divmod(b, d2)
                            c = u[a] * v[b]
                            m1 = R1.mult[x1][x2]
                            m2 = R2.mult[y1][y2]
                            for s in range(d1):
                                if m1[s]:
                                    for t in range(d2):
                                        if m2[t]:
                                            out[s * d2 + t] += c * m1[s] * m2[t]
            return out

        mult = [[P.apply(tmul(Scols[a], Scols[b])) for b in range(q)] for a in range(q)]
        one = [Fraction(0)] * n
        for s in range(d1):
            for t in range(d2):
                one[s * d2 + t] = R1.unit[s] * R2.unit[t]
        T = QAlgebra(mult, P.apply(one), check=False)
        i1 = Mat.from_columns(
            [P.apply([R1.basis(x)[s] * R2.unit[t] for s in range(d1) for t in range(d2)]) for x in range(d1)], q
        )
        i2 = Mat.from_columns(
            [P.apply([R1.unit[s] * R2.basis(y)[t] for s in range(d1) for t in range(d2)]) for y in range(d2)], q
        )
        return T, RingHom(R1, T, i1, check=False), RingHom(R2, T, i2, check=False)

    # module constructors ---------------------------------------------------
    def free(self, R, rank):
        return free_module(R, rank)

    def zero(self, R):
        return QModule(R, 0, [Mat.zeros(0, 0)] * R.dim, check=False)

    def ring_as_module(self, R):
        return free_module(R, 1)

    def hom_as_map(self, h):
        """A ring map A -> B as the A-module map A -> restrict(B, h)."""
        tgt = self.restrict(self.ring_as_module(h.target), h)
        return ModMap(self.ring_as_module(h.source), tgt, h.data, False)

    # maps ------------------------------------------------------------------
    def check_map(self, f):
        M, N = f.source, f.target
        if M.ring != N.ring:
            raise BackendMismatch("module map between modules over different algebras")
        F = f.mat
        if F.shape != (N.dim, M.dim):
            raise ValidationError(f"map matrix has shape {F.shape}, expected {(N.dim, M.dim)}")
        for LM, LN in zip(M.actions, N.actions):
            if F @ LM != LN @ F:
                raise ValidationError("map is not linear over the algebra")

    def make_map(self, M, N, mat, check=True):
        if not isinstance(mat, Mat):
            mat = Mat([[_F(x) for x in row] for row in mat], N.dim, M.dim)
        return ModMap(M, N, mat, check)

    def identity(self, M):
        return ModMap(M, M, Mat.identity(M.dim), False)

    def zero_map(self, M, N):
        return ModMap(M, N, Mat.zeros(N.dim, M.dim), False)

    def compose(self, g, f):
        return ModMap(f.source, g.target, g.mat @ f.mat, False)

    def add(self, f, g):
        return ModMap(f.source, f.target, f.mat + g.mat, False)

    def scale(self, f, c):
        return ModMap(f.source, f.target, f.mat.scale(c), False)

    def direct_sum(self, mods, ring=None):
        mods = list(mods)
        if ring is None:
            if not mods:
                raise ValidationError("ring needed for an empty direct sum")
            ring = mods[0].ring
        for M in mods:
            if M.ring != ring:
                raise BackendMismatch("direct sum of modules over different algebras")
        n = sum(M.dim for M in mods)
        acts = [Mat.block_diag([M.actions[i] for M in mods]) if mods else Mat.zeros(0, 0) for i in range(ring.dim)]
        S = QModule(ring, n, acts, check=False)
        incs, projs = [], []
        off = 0
        for M in mods:
            E = Mat([[int(i == off + j) for j in range(M.dim)] for i in range(n)], n, M.dim)
            incs.append(ModMap(M, S, E, False))
            projs.append(ModMap(S, M, E.T, False))
            off += M.dim
        return S, incs, projs

    def assemble(self, src, src_parts, tgt, tgt_parts, blocks):
        ssz = [P.dim for P in src_parts]
        tsz = [P.dim for P in tgt_parts]
        rows = [[Fraction(0)] * sum(ssz) for _ in range(sum(tsz))]
        roff = [sum(tsz[:i]) for i in range(len(tsz))]
        coff = [sum(ssz[:j]) for j in range(len(ssz))]
        for (i, j), f in blocks.items():
            A = f.mat
            for a in range(A.nrows):
                row = A.rows[a]
                out = rows[roff[i] + a]
                for b in range(A.ncols):
                    if row[b]:
                        out[coff[j] + b] += row[b]
        return ModMap(src, tgt, Mat(rows, sum(tsz), sum(ssz)), False)

    # kernels and cokernels ----------------------------------------------------
    def kernel(self, f, window=None):
        M = f.source
        B = qmat.nullspace(f.mat)
        acts = [qmat.solve(B, L @ B) for L in M.actions]
        K = QModule(M.ring, B.ncols, acts, check=False)
        return K, ModMap(K, M, B, False)

    def cokernel(self, f, window=None):
        N = f.target
        W = qmat.column_basis(f.mat) if f.mat.ncols else Mat.zeros(N.dim, 0)
        P, S = qmat.quotient_maps(W, N.dim)
        C = QModule(N.ring, P.nrows, [P @ L @ S for L in N.actions], check=False)
        return C, ModMap(N, C, P, False)

    def image(self, f, window=None):
        N = f.target
        W = qmat.column_basis(f.mat) if f.mat.ncols else Mat.zeros(N.dim, 0)
        acts = [qmat.solve(W, L @ W) for L in N.actions]
        I = QModule(N.ring, W.ncols, acts, check=False)
        return I, ModMap(I, N, W, False)

    def lift(self, g, inc):
        X = qmat.solve(inc.mat, g.mat)
        if X is None:
            raise ValidationError("map does not factor through the given inclusion")
        return ModMap(g.source, inc.source, X, False)

    def factors_through(self, g, inc):
        return qmat.solve(inc.mat, g.mat) is not None

    def induced_on_cokernels(self, g, pa, pb):
        S = qmat.solve(pa.mat, Mat.identity(pa.mat.nrows))
        return ModMap(pa.target, pb.target, pb.mat @ g.mat @ S, False)

    def is_zero(self, M, window=None):
        return M.dim == 0

    def is_iso(self, f, window=None):
        return qmat.is_invertible(f.mat)

    def is_injective(self, f, window=None):
        return qmat.rank(f.mat) == f.mat.ncols

    def is_surjective(self, f, window=None):
        return qmat.rank(f.mat) == f.mat.nrows

    def map_is_zero(self, f, window=None):
        return f.mat.is_zero()

    def invariants(self, M, window=None):
        return {"dim": M.dim}

    def describe(self, M, window=None):
        return f"Q^{M.dim}" if M.dim else "0"

    # change of rings -------------------------------------------------------
    def restrict(self, N, h):
        """N viewed as a module over h.source."""
        A = h.source
        acts = []
        for i in range(A.dim):
            acts.append(N.act(h.data.column(i)))
        return QModule(A, N.dim, acts, check=False)

    def _tensor_space_map(self, F, G, n1, n2, m1, m2):
        """Kronecker product F (x) G on tensor coordinates (i*n2 + j)."""
        rows = []
        for a in range(m1):
            for b in range(m2):
                row = []
                for i in range(n1):
                    fa = F[a, i]
                    for j in range(n2):
                        row.append(fa * G[b, j] if fa else Fraction(0))
                rows.append(row)
        return Mat(rows, m1 * m2, n1 * n2)

    def _base_change_data(self, M, h):
        A, S = h.source, h.target
        n, dS = M.dim, S.dim
        N = n * dS
        rels = []
        hcols = h.data.columns()
        for i in range(A.dim):
            Li = M.actions[i]
            hi = hcols[i]
            for j in range(n):
                for k in range(dS):
                    v = [Fraction(0)] * N
                    for l in range(n):
                        x = Li[l, j]
                        if x:
                            v[l * dS + k] += x
                    prod = S.mul(hi, S.basis(k))
                    for t in range(dS):
                        if prod[t]:
                            v[j * dS + t] -= prod[t]
                    rels.append(v)
        W = Mat.from_columns(rels, N) if rels else Mat.zeros(N, 0)
        P, Ssec = qmat.quotient_maps(W, N)
        acts = []
        for l in range(dS):
            Ll = self._tensor_space_map(Mat.identity(n), S.lmul_basis(l), n, dS, n, dS)
            acts.append(P @ Ll @ Ssec)
        MS = QModule(S, P.nrows, acts, check=False)
        return MS, P, Ssec

    def base_change(self, M, h):
        return self._base_change_data(M, h)[0]

    def unit(self, M, h):
        """m -> m (x) 1 as a map M -> restrict(M (x) S, h)."""
        MS, P, _ = self._base_change_data(M, h)
        S = h.target
        n, dS = M.dim, S.dim
        cols = []
        for j in range(n):
            v = [Fraction(0)] * (n * dS)
            for t in range(dS):
                v[j * dS + t] = S.unit[t]
            cols.append(P.apply(v))
        return ModMap(M, self.restrict(MS, h), Mat.from_columns(cols, MS.dim), False)

    def adjoint(self, f, h, N):
        """For f: M -> restrict(N, h), the map M (x) S -> N, m (x) s -> s f(m)."""
        M = f.source
        MS, P, Ssec = self._base_change_data(M, h)
        S = h.target
        n, dS = M.dim, S.dim
        cols = []
        for j in range(n):
            fj = f.mat.column(j)
            for k in range(dS):
                cols.append(N.actions[k].apply(fj))
        G = Mat.from_columns(cols, N.dim)
        return ModMap(MS, N, G @ Ssec, False)

    def tensor_map(self, f, h1, h2, k, M2):
        """For f: M1 -> restrict(M2, r) and a commuting square k h1 = h2 r,
        the map M1 (x) S1 -> restrict(M2 (x) S2, k), m (x) s -> f(m) (x) k(s)."""
        N = self.base_change(M2, h2)
        u = self.unit(M2, h2)
        Nk = self.restrict(N, k)
        g = ModMap(f.source, self.restrict(Nk, h1), u.mat @ f.mat, False)
        return self.adjoint(g, h1, Nk)

    # tensor products of modules -----------------------------------------------
    def _tensor_data(self, M, N):
        A = M.ring
        n1, n2 = M.dim, N.dim
        n = n1 * n2
        rels = []
        for i in range(A.dim):
            L1, L2 = M.actions[i], N.actions[i]
            for x in range(n1):
                for y in range(n2):
                    v = [Fraction(0)] * n
                    for s in range(n1):
                        if L1[s, x]:
                            v[s * n2 + y] += L1[s, x]
                    for t in range(n2):
                        if L2[t, y]:
                            v[x * n2 + t] -= L2[t, y]
                    rels.append(v)
        W = Mat.from_columns(rels, n) if rels else Mat.zeros(n, 0)
        P, S = qmat.quotient_maps(W, n)
        acts = [P @ self._tensor_space_map(M.actions[i], Mat.identity(n2), n1, n2, n1, n2) @ S for i in range(A.dim)]
        return QModule(A, P.nrows, acts, check=False), P, S

    def tensor(self, M, N):
        if M.ring != N.ring:
            raise BackendMismatch("tensor of modules over different algebras")
        return self._tensor_data(M, N)[0]

    def tensor_maps(self, f, g, M2, N2, r):
        """f: M1 -> restrict(M2, r), g: N1 -> restrict(N2, r); returns
        M1 (x) N1 -> restrict(M2 (x) N2, r)."""
        T1, P1, S1 = self._tensor_data(f.source, g.source)
        T2, P2, S2 = self._tensor_data(M2, N2)
        G = self._tensor_space_map(f.mat, g.mat, f.source.dim, g.source.dim, M2.dim, N2.dim)
        return ModMap(T1, self.restrict(T2, r), P2 @ G @ S1, False)

    # isomorphism search ---------------------------------------------------------
    def hom_space(self, M, N) -> List[Mat]:
        """Basis of Hom_A(M, N) as matrices."""
        n, m = N.dim, M.dim
        nvar = n * m
        eqs = []
        for LM, LN in zip(M.actions, N.actions):
            # (F LM - LN F)[a][b] = sum_c F[a][c] LM[c][b] - sum_c LN[a][c] F[c][b]
            for a in range(n):
                for b in range(m):
                    row = [Fraction(0)] * nvar
                    for c in range(m):
                        if LM[c, b]:
                            row[a * m + c] += LM[c, b]
                    for c in range(n):
                        if LN[a, c]:
                            row[c * m + b] -= LN[a, c]
                    eqs.append(row)
        K = qmat.nullspace(Mat(eqs, len(eqs), nvar)) if eqs else Mat.identity(nvar)
        out = []
        for v in K.columns():
            out.append(Mat([[v[a * m + b] for b in range(m)] for a in range(n)], n, m))
        return out

    def mod_iso_search(self, M, N, budget=64):
        if M.ring != N.ring:
            return no("different algebras", None)
        if M.dim != N.dim:
            return no("dimensions differ", (M.dim, N.dim))
        n = M.dim
        if n == 0:
            return Verdict(Value.YES, "zero modules", self.zero_map(M, N))
        basis = self.hom_space(M, N)
        if len(basis) != len(self.hom_space(M, M)):
            return no("dim Hom(M,N) != dim End(M)", (len(basis), len(self.hom_space(M, M))))
        rng = random.Random(0)
        cands = list(basis)
        for _ in range(budget):
            cands.append(None)
        for c in cands:
            if c is None:
                F = Mat.zeros(n, n)
                for B in basis:
                    F = F + B.scale(rng.randint(-3, 3))
            else:
                F = c
            if qmat.is_invertible(F):
                return Verdict(Value.YES, "invertible element of Hom found", ModMap(M, N, F, False))
        return unknown("search budget exhausted")

    def ring_iso_search(self, A, B, budget=20000):
        from .algiso import ring_iso_search

        return ring_iso_search(A, B, budget)


QB = QBackend()
