"""The constant-integer backend: every ring is Z, modules are finitely
presented abelian groups Z^n / im(R)."""
from __future__ import annotations

from typing import List, Sequence

from ..errors import BackendMismatch, ValidationError
from ..verdict import Value, Verdict, no, yes
from .base import ZCONST, ModMap, RingHom
from .intmat import IntSolver, lattice_kernel, lattice_span_basis, smith_normal_form
from .matrix import Mat


class ZRing:
    """The ring of integers (a singleton)."""

    name = "Z"

    @property
    def backend(self):
        return ZB

    def __eq__(self, other):
        return isinstance(other, ZRing)

    def __hash__(self):
        return hash("ZRing")

    def __repr__(self):
        return "Z"


ZZ = ZRing()


class ZModule:
    """Z^ngens / span(columns of rels)."""

    __slots__ = ("ngens", "rels", "_inv")

    def __init__(self, ngens: int, rels: Mat = None):
        if rels is None:
            rels = Mat.zeros(ngens, 0)
        if rels.nrows != ngens:
            raise ValidationError("relation matrix must have one row per generator")
        self.ngens = ngens
        self.rels = rels
        self._inv = None

    ring = ZZ

    @property
    def backend(self):
        return ZB

    def invariants(self):
        """(rank, torsion invariant factors > 1)."""
        if self._inv is None:
            s = smith_normal_form(self.rels)
            tors = tuple(d for d in s.diag if d != 1)
            self._inv = (self.ngens - s.rank, tors)
        return self._inv

    def __repr__(self):
        return f"ZModule({describe(self)})"


def describe(M: ZModule) -> str:
    r, tors = M.invariants()
    parts = []
    if r:
        parts.append("Z" if r == 1 else f"Z^{r}")
    parts.extend(f"Z/{d}" for d in tors)
    return " + ".join(parts) if parts else "0"


class ZBackend:
    name = ZCONST
    exact = True

    # rings -------------------------------------------------------------------
    def check_ring_hom(self, h):
        if not (isinstance(h.source, ZRing) and isinstance(h.target, ZRing)):
            raise BackendMismatch("ZConst ring maps go from Z to Z")

    def identity_hom(self, R):
        return RingHom(R, R, None)

    def compose_hom(self, g, f):
        return RingHom(f.source, g.target, None)

    def hom_equal(self, f, g):
        return True

    def is_ring_iso(self, h):
        return True

    def inverse_hom(self, h):
        return h

    def is_flat(self, h):
        return yes("identity of Z is flat")

    def tensor_rings(self, R1, R2, R0, h1, h2):
        return ZZ, RingHom(ZZ, ZZ), RingHom(ZZ, ZZ)

    def ring_iso_search(self, A, B, budget=None):
        return Verdict(Value.YES, "Z = Z", RingHom(ZZ, ZZ))

    def ring_invariants(self, R):
        return ("Z",)

    # module constructors ---------------------------------------------------
    def free(self, R, rank):
        return ZModule(rank)

    def zero(self, R):
        return ZModule(0)

    def cyclic(self, n):
        return ZModule(1, Mat([[n]], 1, 1))

    def from_invariants(self, rank, torsion=()):
        n = rank + len(torsion)
        cols = []
        for k, d in enumerate(torsion):
            c = [0] * n
            c[rank + k] = d
            cols.append(c)
        return ZModule(n, Mat.from_columns(cols, n))

    def ring_as_module(self, R):
        return ZModule(1)

    def hom_as_map(self, h):
        return ModMap(ZModule(1), ZModule(1), Mat.identity(1), False)

    # maps ------------------------------------------------------------------
    def check_map(self, f):
        M, N = f.source, f.target
        A = f.mat
        if A.shape != (N.ngens, M.ngens):
            raise ValidationError(f"map matrix has shape {A.shape}, expected {(N.ngens, M.ngens)}")
        if M.rels.ncols:
            img = A @ M.rels
            sol = IntSolver(N.rels)
            for j in range(img.ncols):
                if sol.solve(img.column(j)) is None:
                    raise ValidationError("map does not respect the source relations")

    def make_map(self, M, N, mat, check=True):
        if not isinstance(mat, Mat):
            mat = Mat(mat, N.ngens, M.ngens)
        return ModMap(M, N, mat, check)

    def identity(self, M):
        return ModMap(M, M, Mat.identity(M.ngens), False)

    def zero_map(self, M, N):
        return ModMap(M, N, Mat.zeros(N.ngens, M.ngens), False)

    def compose(self, g, f):
        return ModMap(f.source, g.target, g.mat @ f.mat, False)

    def add(self, f, g):
        return ModMap(f.source, f.target, f.mat + g.mat, False)

    def scale(self, f, c):
        return ModMap(f.source, f.target, f.mat.scale(int(c)), False)

    def direct_sum(self, mods: Sequence[ZModule], ring=None):
        mods = list(mods)
        n = sum(M.ngens for M in mods)
        S = ZModule(n, Mat.block_diag([M.rels for M in mods]))
        incs, projs = [], []
        off = 0
        for M in mods:
            E = Mat([[int(i == off + j) for j in range(M.ngens)] for i in range(n)], n, M.ngens)
            incs.append(ModMap(M, S, E, False))
            projs.append(ModMap(S, M, E.T, False))
            off += M.ngens
        return S, incs, projs

    def assemble(self, src, src_parts, tgt, tgt_parts, blocks):
        """Map between direct sums from blocks {(i, j): map part_j -> part_i}."""
        ssz = [P.ngens for P in src_parts]
        tsz = [P.ngens for P in tgt_parts]
        rows = [[0] * sum(ssz) for _ in range(sum(tsz))]
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
        M, N = f.source, f.target
        m = M.ngens
        big = Mat.hstack([f.mat, N.rels], N.ngens) if N.ngens else Mat.zeros(0, m + N.rels.ncols)
        K = lattice_kernel(big)
        proj = K.submatrix(range(m), range(K.ncols))
        B = lattice_span_basis(proj)
        k = B.ncols
        sol = IntSolver(B)
        rel_cols = []
        for j in range(M.rels.ncols):
            c = sol.solve(M.rels.column(j))
            if c is None:
                raise ArithmeticError("kernel lattice does not contain the relations")
            rel_cols.append(c)
        Kmod = ZModule(k, Mat.from_columns(rel_cols, k))
        return Kmod, ModMap(Kmod, M, B, False)

    def cokernel(self, f, window=None):
        N = f.target
        C = ZModule(N.ngens, Mat.hstack([N.rels, f.mat], N.ngens))
        return C, ModMap(N, C, Mat.identity(N.ngens), False)

    def image(self, f, window=None):
        K, inc = self.kernel(f)
        M = f.source
        I = ZModule(M.ngens, Mat.hstack([M.rels, inc.mat], M.ngens))
        return I, ModMap(I, f.target, f.mat, False)

    def lift(self, g, inc):
        """h with inc o h = g, for g whose image lies in the image of inc."""
        M = inc.target
        A = Mat.hstack([inc.mat, M.rels], M.ngens)
        sol = IntSolver(A)
        cols = []
        for j in range(g.mat.ncols):
            x = sol.solve(g.mat.column(j))
            if x is None:
                raise ValidationError("map does not factor through the given inclusion")
            cols.append(x[: inc.mat.ncols])
        return ModMap(g.source, inc.source, Mat.from_columns(cols, inc.mat.ncols), False)

    def factors_through(self, g, inc) -> bool:
        M = inc.target
        A = Mat.hstack([inc.mat, M.rels], M.ngens)
        sol = IntSolver(A)
        return all(sol.solve(g.mat.column(j)) is not None for j in range(g.mat.ncols))

    def induced_on_cokernels(self, g, pa, pb):
        """g: A -> B, pa: A -> CA, pb: B -> CB cokernel projections from
        ``cokernel``; the map CA -> CB induced by g."""
        return ModMap(pa.target, pb.target, pb.mat @ g.mat, True)

    def is_zero(self, M, window=None):
        r, tors = M.invariants()
        return r == 0 and not tors

    def is_iso(self, f, window=None):
        K, _ = self.kernel(f)
        C, _ = self.cokernel(f)
        return self.is_zero(K) and self.is_zero(C)

    def is_injective(self, f, window=None):
        return self.is_zero(self.kernel(f)[0])

    def is_surjective(self, f, window=None):
        return self.is_zero(self.cokernel(f)[0])

    def map_is_zero(self, f, window=None):
        sol = IntSolver(f.target.rels)
        return all(sol.solve(f.mat.column(j)) is not None for j in range(f.mat.ncols))

    def invariants(self, M, window=None):
        r, tors = M.invariants()
        return {"rank": r, "torsion": list(tors)}

    def describe(self, M, window=None):
        return describe(M)

    # change of rings (all trivial over Z) --------------------------------------
    def restrict(self, N, h):
        return N

    def base_change(self, M, h):
        return M

    def unit(self, M, h):
        return self.identity(M)

    def adjoint(self, f, h, N):
        return ModMap(f.source, N, f.mat, False)

    def tensor_map(self, f, h1, h2, k, M2):
        return ModMap(f.source, M2, f.mat, False)

    # tensor products -------------------------------------------------------------
    def tensor(self, M, N):
        n1, n2 = M.ngens, N.ngens
        cols = []
        for c in M.rels.columns():
            for j in range(n2):
                v = [0] * (n1 * n2)
                for i in range(n1):
                    v[i * n2 + j] = c[i]
                cols.append(v)
        for c in N.rels.columns():
            for i in range(n1):
                v = [0] * (n1 * n2)
                for j in range(n2):
                    v[i * n2 + j] = c[j]
                cols.append(v)
        return ZModule(n1 * n2, Mat.from_columns(cols, n1 * n2))

    def tensor_maps(self, f, g, M2, N2, r=None):
        src, tgt = self.tensor(f.source, g.source), self.tensor(M2, N2)
        A, B = f.mat, g.mat
        rows = []
        for i in range(A.nrows):
            for k in range(B.nrows):
                rows.append([A[i, j] * B[k, l] for j in range(A.ncols) for l in range(B.ncols)])
        return ModMap(src, tgt, Mat(rows, A.nrows * B.nrows, A.ncols * B.ncols), False)

    # isomorphism search ---------------------------------------------------------
    def _canonical(self, M):
        """Map M -> Z^r + sum Z/d_i (standard presentation) as an iso, and its inverse."""
        s = smith_normal_form(M.rels)
        n = M.ngens
        keep = [i for i in range(n) if i >= s.rank or s.diag[i] != 1]
        tors_idx = [i for i in keep if i < s.rank]
        free_idx = [i for i in keep if i >= s.rank]
        order = tors_idx + free_idx
        k = len(order)
        rels = []
        for pos, i in enumerate(order):
            if i < s.rank:
                c = [0] * k
                c[pos] = s.diag[i]
                rels.append(c)
        C = ZModule(k, Mat.from_columns(rels, k))
        to_c = Mat([s.U.rows[i] for i in order], k, n)
        from_c = s.Uinv.submatrix(range(n), order)
        return C, ModMap(M, C, to_c, False), ModMap(C, M, from_c, False)

    def mod_iso_search(self, M, N, budget=None):
        if M.invariants() != N.invariants():
            return no("invariant factors differ", (M.invariants(), N.invariants()))
        CM, toM, _ = self._canonical(M)
        CN, _, fromN = self._canonical(N)
        iso = ModMap(M, N, fromN.mat @ toM.mat, True)
        return Verdict(Value.YES, "equal invariant factors", iso)


ZB = ZBackend()
