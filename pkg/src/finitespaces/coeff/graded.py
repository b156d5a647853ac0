"""Monomial rings k[P] over Q for sign-pattern monoids P inside Z^m, and
graded modules that are finite direct sums of shifted rank-one pieces.

A sign pattern assigns each lattice coordinate one of

    '0'  the coordinate is absent         ({0})
    '+'  the variable t_j                 (N)
    '-'  the variable t_j^{-1}            (-N)
    '*'  both t_j and t_j^{-1}            (Z)

so k[t], k[t^{-1}] and k[t, t^{-1}] all live on the same lattice Z and the
restrictions of a scheme model are inclusions of subrings of one Laurent
ring. A summand (d, Q) of a module is the k[P]-module t^d k[Q] with Q a
pattern containing P.

Maps between such modules are scalar matrices: entry c at (j, i) sends the
generator e_i to c t^{d_i - d'_j} e'_j. Kernels, cokernels and cohomology are
computed degreewise and returned as windowed graded vector spaces (``GWin``)
on a box of multidegrees.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import BackendLimitation, BackendMismatch, ValidationError, WindowRequired
from ..verdict import Value, Verdict, no, unknown, yes
from .base import GRADED, DegreeWindow, ModMap, RingHom, as_window
from .matrix import Mat
from . import qmat

SIGNS = "0+-*"
_UNION = {
    ("0", "0"): "0", ("0", "+"): "+", ("0", "-"): "-", ("0", "*"): "*",
    ("+", "+"): "+", ("+", "-"): "*", ("+", "*"): "*",
    ("-", "-"): "-", ("-", "*"): "*", ("*", "*"): "*",
}


def sign_union(a: str, b: str) -> str:
    """Smallest pattern monoid containing both."""
    return _UNION.get((a, b)) or _UNION[(b, a)]


def sign_meet(a: str, b: str) -> str:
    if a == b:
        return a
    if a == "*":
        return b
    if b == "*":
        return a
    return "0"


def sign_leq(a: str, b: str) -> bool:
    return sign_meet(a, b) == a


def sign_contains(s: str, x: int) -> bool:
    if s == "*":
        return True
    if s == "+":
        return x >= 0
    if s == "-":
        return x <= 0
    return x == 0


def pattern_contains(signs, deg) -> bool:
    return all(sign_contains(s, x) for s, x in zip(signs, deg))


def _default_names(m):
    if m == 1:
        return ("t",)
    if m == 2:
        return ("x", "y")
    if m == 3:
        return ("x", "y", "z")
    return tuple(f"t{i + 1}" for i in range(m))


class MonomialRing:
    """k[P] for the sign pattern ``signs`` on Z^m (k = Q)."""

    __slots__ = ("signs", "names")

    def __init__(self, signs: Sequence[str], names: Optional[Sequence[str]] = None):
        signs = tuple(signs)
        for s in signs:
            if s not in SIGNS:
                raise ValidationError(f"unknown sign {s!r}; use one of 0 + - *")
        self.signs = signs
        self.names = tuple(names) if names is not None else _default_names(len(signs))
        if len(self.names) != len(signs):
            raise ValidationError("one variable name per lattice coordinate")

    @property
    def backend(self):
        return GB

    @property
    def m(self):
        return len(self.signs)

    def contains(self, deg) -> bool:
        return pattern_contains(self.signs, deg)

    def __eq__(self, other):
        return isinstance(other, MonomialRing) and self.signs == other.signs

    def __hash__(self):
        return hash(("MonomialRing", self.signs))

    def __repr__(self):
        gens = []
        for s, n in zip(self.signs, self.names):
            if s in "+*":
                gens.append(n)
            if s in "-*":
                gens.append(f"{n}^-1")
        return "k[" + ",".join(gens) + "]" if gens else "k"


def polynomial_ring(m: int, inverted: Sequence[int] = (), names=None) -> MonomialRing:
    """k[t_1..t_m] with the variables in ``inverted`` (0-based) made invertible."""
    inv = set(inverted)
    return MonomialRing(["*" if j in inv else "+" for j in range(m)], names)


def base_field(m: int, names=None) -> MonomialRing:
    return MonomialRing(["0"] * m, names)


class GModule:
    """Direct sum of shifted rank-one modules t^{d_i} k[Q_i] over ``ring``."""

    __slots__ = ("ring", "summands")

    def __init__(self, ring: MonomialRing, summands: Sequence[Tuple[Sequence[int], Sequence[str]]] = ()):
        self.ring = ring
        out = []
        for d, q in summands:
            d = tuple(int(x) for x in d)
            q = tuple(q) if q is not None else ring.signs
            if len(d) != ring.m or len(q) != ring.m:
                raise ValidationError("summand shift/pattern has the wrong length")
            for s, p in zip(q, ring.signs):
                if s not in SIGNS:
                    raise ValidationError(f"unknown sign {s!r}")
                if not sign_leq(p, s):
                    raise ValidationError("summand pattern must contain the ring pattern")
            out.append((d, q))
        self.summands = tuple(out)

    @property
    def backend(self):
        return GB

    @property
    def rank(self):
        return len(self.summands)

    def active(self, deg) -> List[int]:
        return [i for i, (d, q) in enumerate(self.summands) if pattern_contains(q, [a - b for a, b in zip(deg, d)])]

    def __eq__(self, other):
        return isinstance(other, GModule) and self.ring == other.ring and self.summands == other.summands

    def __hash__(self):
        return hash((self.ring, self.summands))

    def __repr__(self):
        parts = []
        for d, q in self.summands:
            r = repr(MonomialRing(q, self.ring.names))
            parts.append(f"{r}({','.join(map(str, d))})" if any(d) else r)
        return " + ".join(parts) if parts else "0"


def twisted(ring: MonomialRing, shift: Sequence[int]) -> GModule:
    return GModule(ring, [(shift, ring.signs)])


class GWin:
    """A graded Q-vector space known on the degree box ``window``^m:
    ``dims[a]`` is the dimension in multidegree a."""

    __slots__ = ("ring", "window", "dims")

    def __init__(self, ring: MonomialRing, window: DegreeWindow, dims: Dict[tuple, int]):
        self.ring = ring
        self.window = window
        self.dims = dict(dims)

    @property
    def backend(self):
        return GB

    def degrees(self):
        return list(self.window.degrees(self.ring.m))

    def support(self):
        return {a: n for a, n in sorted(self.dims.items(), key=lambda kv: degree_key(kv[0])) if n}

    def __repr__(self):
        return f"GWin(window={self.window}, support={self.support()})"


def degree_key(a):
    """Order degrees by distance to the origin, then lexicographically."""
    return (sum(abs(x) for x in a), tuple(a))


def _dim(M, a) -> int:
    if isinstance(M, GModule):
        return len(M.active(a))
    return M.dims.get(a, 0)


class GradedBackend:
    name = GRADED
    exact = True

    # rings -------------------------------------------------------------------
    def check_ring_hom(self, h):
        A, B = h.source, h.target
        if not isinstance(h.data, Mat):
            h.data = Mat(h.data, B.m, A.m)
        Phi = h.data
        if Phi.shape != (B.m, A.m):
            raise ValidationError(f"lattice map has shape {Phi.shape}, expected {(B.m, A.m)}")
        for j, s in enumerate(A.signs):
            v = Phi.column(j)
            if s in "+*" and not B.contains(v):
                raise ValidationError(f"t_{j + 1} maps outside the target ring")
            if s in "-*" and not B.contains([-x for x in v]):
                raise ValidationError(f"t_{j + 1}^-1 maps outside the target ring")

    def make_hom(self, A, B, mat=None, check=True):
        if mat is None:
            mat = Mat.identity(A.m)
        if not isinstance(mat, Mat):
            mat = Mat(mat, B.m, A.m)
        return RingHom(A, B, mat, check)

    def inclusion(self, A, B):
        """The identity-lattice inclusion k[P] -> k[P'] (P inside P')."""
        return RingHom(A, B, Mat.identity(A.m), True)

    def identity_hom(self, R):
        return RingHom(R, R, Mat.identity(R.m), False)

    def compose_hom(self, g, f):
        return RingHom(f.source, g.target, g.data @ f.data, False)

    def hom_equal(self, f, g):
        act = [j for j, s in enumerate(f.source.signs) if s != "0"]
        return all(f.data.column(j) == g.data.column(j) for j in act)

    def _is_identity_lattice(self, h):
        A = h.source
        if h.source.m != h.target.m:
            return False
        return all(h.data.column(j) == [int(i == j) for i in range(A.m)] for j, s in enumerate(A.signs) if s != "0")

    def _signed_permutation(self, h):
        """For a signed permutation lattice map return (perm, signs) else None."""
        A, B = h.source, h.target
        if A.m != B.m:
            return None
        perm, sg = [], []
        for j in range(A.m):
            col = h.data.column(j)
            nz = [(i, x) for i, x in enumerate(col) if x]
            if len(nz) != 1 or abs(nz[0][1]) != 1:
                return None
            perm.append(nz[0][0])
            sg.append(nz[0][1])
        if len(set(perm)) != A.m:
            return None
        return perm, sg

    @staticmethod
    def _flip(s, sign):
        if sign > 0 or s in "0*":
            return s
        return "-" if s == "+" else "+"

    def is_ring_iso(self, h):
        sp = self._signed_permutation(h)
        if sp is None:
            return False
        perm, sg = sp
        A, B = h.source, h.target
        return all(self._flip(A.signs[j], sg[j]) == B.signs[perm[j]] for j in range(A.m))

    def inverse_hom(self, h):
        if not self.is_ring_iso(h):
            raise ValidationError("ring map is not an isomorphism")
        return RingHom(h.target, h.source, h.data.T, False)

    def is_flat(self, h):
        """Yes for coordinatewise inclusions of patterns (localizations and
        adjoining free variables) composed with signed renamings."""
        sp = self._signed_permutation(h)
        if sp is None:
            return unknown("lattice map is not a signed renaming of coordinates")
        perm, sg = sp
        A, B = h.source, h.target
        if all(sign_leq(self._flip(A.signs[j], sg[j]), B.signs[perm[j]]) for j in range(A.m)):
            return yes("coordinatewise localization or free extension")
        return unknown("not a coordinatewise localization")

    def ring_invariants(self, R):
        return (sum(s != "0" for s in R.signs), sum(s == "*" for s in R.signs))

    def ring_iso_search(self, A, B, budget=None):
        if self.ring_invariants(A) != self.ring_invariants(B) or A.m != B.m:
            return no("dimension or unit rank differs", (self.ring_invariants(A), self.ring_invariants(B)))
        m = A.m
        for perm in itertools.permutations(range(m)):
            if any((A.signs[j] == "0") != (B.signs[perm[j]] == "0") for j in range(m)):
                continue
            sg = []
            ok = True
            for j in range(m):
                s, t = A.signs[j], B.signs[perm[j]]
                if s == t:
                    sg.append(1)
                elif {s, t} == {"+", "-"}:
                    sg.append(-1)
                else:
                    ok = False
                    break
            if ok:
                Phi = Mat([[sg[j] if perm[j] == i else 0 for j in range(m)] for i in range(m)], m, m)
                return Verdict(Value.YES, "signed renaming of variables", RingHom(A, B, Phi, True))
        return no("no signed renaming matches the patterns", None)

    def tensor_rings(self, R1, R2, R0, h1, h2):
        """R1 (x)_{R0} R2 for identity-lattice inclusions. Coordinates absent
        from R0 are duplicated: the second factor's copy is appended."""
        if not (self._is_identity_lattice(h1) and self._is_identity_lattice(h2)):
            raise BackendLimitation("graded tensor of rings needs canonical inclusions")
        m = R0.m
        shared = [j for j in range(m) if R0.signs[j] != "0"]
        free = [j for j in range(m) if R0.signs[j] == "0"]
        for j in shared:
            for R in (R1, R2):
                s, p = R.signs[j], R0.signs[j]
                if not (s == p or (s == "*" and p in "+-")):
                    raise BackendLimitation("graded tensor of rings needs localizations of the base")
        signs = []
        for j in range(m):
            signs.append(sign_union(R1.signs[j], R2.signs[j]) if j in shared else R1.signs[j])
        signs.extend(R2.signs[j] for j in free)
        names = list(R1.names) + [R2.names[j] + "'" if R2.names[j] in R1.names else R2.names[j] for j in free]
        T = MonomialRing(signs, names)
        n = len(signs)
        i1 = Mat([[int(i == j) for j in range(m)] for i in range(n)], n, m)
        pos = {j: m + k for k, j in enumerate(free)}
        i2 = Mat([[int(i == pos.get(j, j)) for j in range(m)] for i in range(n)], n, m)
        return T, RingHom(R1, T, i1, True), RingHom(R2, T, i2, True)

    # module constructors ---------------------------------------------------
    def free(self, R, rank):
        return GModule(R, [((0,) * R.m, R.signs)] * rank)

    def zero(self, R):
        return GModule(R, [])

    def ring_as_module(self, R):
        return self.free(R, 1)

    def hom_as_map(self, h):
        """A ring map R -> S as the R-module map R -> restrict(S, h)."""
        return ModMap(self.ring_as_module(h.source), self.restrict(self.ring_as_module(h.target), h), Mat([[1]], 1, 1), True)

    # maps ------------------------------------------------------------------
    def _piece(self, f, a) -> Mat:
        if isinstance(f.mat, Mat):
            return f.mat.submatrix(f.target.active(a), f.source.active(a))
        P = f.mat.get(a)
        if P is None:
            return Mat.zeros(_dim(f.target, a), _dim(f.source, a))
        return P

    def check_map(self, f):
        M, N = f.source, f.target
        if M.ring != N.ring:
            raise BackendMismatch("module map between modules over different rings")
        if isinstance(f.mat, Mat):
            if not (isinstance(M, GModule) and isinstance(N, GModule)):
                raise ValidationError("scalar matrices only map between free-type modules")
            if f.mat.shape != (N.rank, M.rank):
                raise ValidationError(f"map matrix has shape {f.mat.shape}, expected {(N.rank, M.rank)}")
            for j in range(N.rank):
                dj, qj = N.summands[j]
                for i in range(M.rank):
                    if f.mat[j, i]:
                        di, qi = M.summands[i]
                        if not all(sign_leq(a, b) for a, b in zip(qi, qj)):
                            raise ValidationError(f"entry ({j},{i}) maps a larger localization into a smaller one")
                        if not pattern_contains(qj, [x - y for x, y in zip(di, dj)]):
                            raise ValidationError(f"entry ({j},{i}) has a degree shift outside the target")
        else:
            for a, P in f.mat.items():
                if P.shape != (_dim(N, a), _dim(M, a)):
                    raise ValidationError(f"degree {a} piece has the wrong shape")

    def make_map(self, M, N, mat, check=True):
        if not isinstance(mat, (Mat, dict)):
            mat = Mat([[Fraction(x) for x in row] for row in mat], N.rank, M.rank)
        return ModMap(M, N, mat, check)

    def identity(self, M):
        if isinstance(M, GModule):
            return ModMap(M, M, Mat.identity(M.rank), False)
        return ModMap(M, M, {a: Mat.identity(n) for a, n in M.dims.items()}, False)

    def zero_map(self, M, N):
        if isinstance(M, GModule) and isinstance(N, GModule):
            return ModMap(M, N, Mat.zeros(N.rank, M.rank), False)
        return ModMap(M, N, {}, False)

    def _window_of(self, *objs, window=None):
        w = as_window(window)
        for o in objs:
            if isinstance(o, GWin):
                if w is not None and o.window != w:
                    raise ValidationError("degree windows of the operands differ")
                w = o.window
        return w

    def _degreewise(self, f, window):
        return {a: self._piece(f, a) for a in window.degrees(f.source.ring.m)}

    def compose(self, g, f):
        if isinstance(g.mat, Mat) and isinstance(f.mat, Mat):
            return ModMap(f.source, g.target, g.mat @ f.mat, False)
        w = self._window_of(f.source, f.target, g.target)
        out = {}
        for a in w.degrees(f.source.ring.m):
            out[a] = self._piece(g, a) @ self._piece(f, a)
        return ModMap(f.source, g.target, out, False)

    def add(self, f, g):
        if isinstance(g.mat, Mat) and isinstance(f.mat, Mat):
            return ModMap(f.source, f.target, f.mat + g.mat, False)
        w = self._window_of(f.source, f.target)
        return ModMap(f.source, f.target, {a: self._piece(f, a) + self._piece(g, a) for a in w.degrees(f.source.ring.m)}, False)

    def scale(self, f, c):
        if isinstance(f.mat, Mat):
            return ModMap(f.source, f.target, f.mat.scale(c), False)
        return ModMap(f.source, f.target, {a: P.scale(c) for a, P in f.mat.items()}, False)

    def direct_sum(self, mods, ring=None):
        mods = list(mods)
        if ring is None:
            if not mods:
                raise ValidationError("ring needed for an empty direct sum")
            ring = mods[0].ring
        if all(isinstance(M, GModule) for M in mods):
            S = GModule(ring, [s for M in mods for s in M.summands])
            incs, projs = [], []
            n = S.rank
            off = 0
            for M in mods:
                E = Mat([[int(i == off + j) for j in range(M.rank)] for i in range(n)], n, M.rank)
                incs.append(ModMap(M, S, E, False))
                projs.append(ModMap(S, M, E.T, False))
                off += M.rank
            return S, incs, projs
        w = self._window_of(*mods)
        degs = list(w.degrees(ring.m))
        S = GWin(ring, w, {a: sum(_dim(M, a) for M in mods) for a in degs})
        incs, projs = [], []
        offs = {a: 0 for a in degs}
        for M in mods:
            inc, proj = {}, {}
            for a in degs:
                n, k, o = S.dims[a], _dim(M, a), offs[a]
                E = Mat([[int(i == o + j) for j in range(k)] for i in range(n)], n, k)
                inc[a], proj[a] = E, E.T
                offs[a] += k
            incs.append(ModMap(M, S, inc, False))
            projs.append(ModMap(S, M, proj, False))
        return S, incs, projs

    def assemble(self, src, src_parts, tgt, tgt_parts, blocks):
        if all(isinstance(P, GModule) for P in list(src_parts) + list(tgt_parts)) and all(
            isinstance(f.mat, Mat) for f in blocks.values()
        ):
            ssz = [P.rank for P in src_parts]
            tsz = [P.rank for P in tgt_parts]
            rows = [[0] * sum(ssz) for _ in range(sum(tsz))]
            for (i, j), f in blocks.items():
                r0, c0 = sum(tsz[:i]), sum(ssz[:j])
                for a in range(f.mat.nrows):
                    for b in range(f.mat.ncols):
                        if f.mat[a, b]:
                            rows[r0 + a][c0 + b] += f.mat[a, b]
            return ModMap(src, tgt, Mat(rows, sum(tsz), sum(ssz)), False)
        w = self._window_of(src, tgt, *src_parts, *tgt_parts)
        out = {}
        for a in w.degrees(src.ring.m):
            ssz = [_dim(P, a) for P in src_parts]
            tsz = [_dim(P, a) for P in tgt_parts]
            rows = [[0] * sum(ssz) for _ in range(sum(tsz))]
            for (i, j), f in blocks.items():
                P = self._piece(f, a)
                r0, c0 = sum(tsz[:i]), sum(ssz[:j])
                for x in range(P.nrows):
                    for y in range(P.ncols):
                        if P[x, y]:
                            rows[r0 + x][c0 + y] += P[x, y]
            out[a] = Mat(rows, sum(tsz), sum(ssz))
        return ModMap(src, tgt, out, False)

    # degreewise kernels and cokernels -------------------------------------------
    def _need_window(self, f, window, what):
        w = self._window_of(f.source, f.target, window=window)
        if w is None:
            raise WindowRequired(what)
        return w

    def kernel(self, f, window=None):
        w = self._need_window(f, window, "kernel")
        dims, inc = {}, {}
        for a in w.degrees(f.source.ring.m):
            B = qmat.nullspace(self._piece(f, a).to_fractions())
            dims[a] = B.ncols
            inc[a] = B
        K = GWin(f.source.ring, w, dims)
        return K, ModMap(K, f.source, inc, False)

    def cokernel(self, f, window=None):
        w = self._need_window(f, window, "cokernel")
        dims, proj = {}, {}
        for a in w.degrees(f.source.ring.m):
            F = self._piece(f, a).to_fractions()
            W = qmat.column_basis(F) if F.ncols else Mat.zeros(F.nrows, 0)
            P, _ = qmat.quotient_maps(W, F.nrows)
            dims[a] = P.nrows
            proj[a] = P
        C = GWin(f.source.ring, w, dims)
        return C, ModMap(f.target, C, proj, False)

    def image(self, f, window=None):
        w = self._need_window(f, window, "image")
        dims, inc = {}, {}
        for a in w.degrees(f.source.ring.m):
            F = self._piece(f, a).to_fractions()
            W = qmat.column_basis(F) if F.ncols else Mat.zeros(F.nrows, 0)
            dims[a] = W.ncols
            inc[a] = W
        I = GWin(f.source.ring, w, dims)
        return I, ModMap(I, f.target, inc, False)

    def lift(self, g, inc):
        w = self._window_of(g.source, g.target, inc.source, inc.target)
        out = {}
        for a in w.degrees(g.source.ring.m):
            X = qmat.solve(self._piece(inc, a).to_fractions(), self._piece(g, a).to_fractions())
            if X is None:
                raise ValidationError(f"map does not factor through the inclusion in degree {a}")
            out[a] = X
        return ModMap(g.source, inc.source, out, False)

    def factors_through(self, g, inc):
        w = self._window_of(g.source, g.target, inc.source, inc.target)
        return all(
            qmat.solve(self._piece(inc, a).to_fractions(), self._piece(g, a).to_fractions()) is not None
            for a in w.degrees(g.source.ring.m)
        )

    def induced_on_cokernels(self, g, pa, pb):
        w = self._window_of(pa.target, pb.target)
        out = {}
        for a in w.degrees(g.source.ring.m):
            Pa = self._piece(pa, a).to_fractions()
            S = qmat.solve(Pa, Mat.identity(Pa.nrows))
            out[a] = self._piece(pb, a) @ self._piece(g, a) @ S
        return ModMap(pa.target, pb.target, out, False)

    def _degrees(self, objs, window, what):
        w = self._window_of(*objs, window=window)
        if w is None:
            raise WindowRequired(what)
        return w, list(w.degrees(objs[0].ring.m))

    def zero_degrees(self, M, window=None):
        """Degrees of the window where M is nonzero, nearest the origin first."""
        _, degs = self._degrees([M], window, "zero test")
        return sorted((a for a in degs if _dim(M, a)), key=degree_key)

    def is_zero(self, M, window=None):
        if isinstance(M, GModule):
            return M.rank == 0
        return not self.zero_degrees(M, window)

    def iso_failures(self, f, window=None):
        """Degrees where f is not bijective, nearest the origin first."""
        _, degs = self._degrees([f.source, f.target], window, "isomorphism test")
        bad = []
        for a in degs:
            P = self._piece(f, a)
            if not qmat.is_invertible(P.to_fractions()) and not (P.nrows == 0 and P.ncols == 0):
                bad.append(a)
        return sorted(bad, key=degree_key)

    def is_iso(self, f, window=None):
        return not self.iso_failures(f, window)

    def is_injective(self, f, window=None):
        _, degs = self._degrees([f.source, f.target], window, "injectivity test")
        return all(qmat.rank(self._piece(f, a).to_fractions()) == _dim(f.source, a) for a in degs)

    def is_surjective(self, f, window=None):
        _, degs = self._degrees([f.source, f.target], window, "surjectivity test")
        return all(qmat.rank(self._piece(f, a).to_fractions()) == _dim(f.target, a) for a in degs)

    def map_is_zero(self, f, window=None):
        if isinstance(f.mat, Mat):
            return f.mat.is_zero()
        return all(P.is_zero() for P in f.mat.values())

    def invariants(self, M, window=None):
        w, degs = self._degrees([M], window, "graded dimensions")
        dims = {a: _dim(M, a) for a in degs}
        return {
            "window": list(w.as_tuple()),
            "dims": {",".join(map(str, a)): n for a, n in sorted(dims.items(), key=lambda kv: degree_key(kv[0])) if n},
        }

    def describe(self, M, window=None):
        if isinstance(M, GModule) and window is None:
            return repr(M)
        inv = self.invariants(M, window)
        if not inv["dims"]:
            return f"0 on {inv['window']}"
        return "graded dims " + ", ".join(f"({k}):{v}" for k, v in inv["dims"].items())

    def total_dim(self, M, window=None):
        _, degs = self._degrees([M], window, "graded dimensions")
        return sum(_dim(M, a) for a in degs)

    # change of rings -------------------------------------------------------
    def restrict(self, N, h):
        if not self._is_identity_lattice(h):
            raise BackendLimitation("restriction of scalars along a non-identity lattice map")
        if isinstance(N, GModule):
            return GModule(h.source, N.summands)
        return GWin(h.source, N.window, N.dims)

    def _localized(self, q, p, h):
        """Pattern of k[q] (x)_{k[p]} k[target] for a localization-type q."""
        tgt = list(h.target.signs)
        for j, (s, t) in enumerate(zip(q, p)):
            if s == t:
                continue
            if not (s == "*" and t in "+-"):
                raise BackendLimitation("base change of a summand that is not a localization of the ring")
            for i, x in enumerate(h.data.column(j)):
                if x:
                    tgt[i] = "*"
        return tuple(tgt)

    def base_change(self, M, h):
        if not isinstance(M, GModule):
            raise BackendLimitation("base change of a windowed graded space")
        Phi = h.data
        summ = []
        for d, q in M.summands:
            summ.append((tuple(Phi.apply(list(d))), self._localized(q, h.source.signs, h)))
        return GModule(h.target, summ)

    def unit(self, M, h):
        MS = self.base_change(M, h)
        return ModMap(M, self.restrict(MS, h), Mat.identity(M.rank), True)

    def adjoint(self, f, h, N):
        MS = self.base_change(f.source, h)
        if isinstance(f.mat, Mat):
            return ModMap(MS, N, f.mat, True)
        raise BackendLimitation("adjoint of a windowed map")

    def tensor_map(self, f, h1, h2, k, M2):
        src = self.base_change(f.source, h1)
        tgt = self.restrict(self.base_change(M2, h2), k)
        return ModMap(src, tgt, f.mat, True)

    # tensor products -------------------------------------------------------------
    def tensor(self, M, N):
        if M.ring != N.ring:
            raise BackendMismatch("tensor of modules over different rings")
        summ = []
        for d1, q1 in M.summands:
            for d2, q2 in N.summands:
                summ.append((tuple(a + b for a, b in zip(d1, d2)), tuple(sign_union(a, b) for a, b in zip(q1, q2))))
        return GModule(M.ring, summ)

    def tensor_maps(self, f, g, M2, N2, r):
        src, tgt = self.tensor(f.source, g.source), self.restrict(self.tensor(M2, N2), r)
        A, B = f.mat, g.mat
        rows = []
        for i in range(A.nrows):
            for k in range(B.nrows):
                rows.append([A[i, j] * B[k, l] for j in range(A.ncols) for l in range(B.ncols)])
        return ModMap(src, tgt, Mat(rows, A.nrows * B.nrows, A.ncols * B.ncols), True)

    # isomorphism search ---------------------------------------------------------
    @staticmethod
    def _normal(d, q):
        return (tuple(0 if s == "*" else x for x, s in zip(d, q)), q)

    def mod_iso_search(self, M, N, budget=None):
        if not (isinstance(M, GModule) and isinstance(N, GModule)):
            raise BackendLimitation("isomorphism search needs free-type graded modules")
        a = sorted(self._normal(d, q) for d, q in M.summands)
        b = sorted(self._normal(d, q) for d, q in N.summands)
        if a != b:
            return no("shift multisets differ", (a, b))
        used = [False] * N.rank
        F = [[0] * M.rank for _ in range(N.rank)]
        for i, (d, q) in enumerate(M.summands):
            key = self._normal(d, q)
            for j, (d2, q2) in enumerate(N.summands):
                if not used[j] and self._normal(d2, q2) == key:
                    used[j] = True
                    F[j][i] = 1
                    break
        return Verdict(Value.YES, "equal shift multisets", ModMap(M, N, Mat(F, N.rank, M.rank), True))


GB = GradedBackend()
