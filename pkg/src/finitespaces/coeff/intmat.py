"""Exact integer matrix algorithms: Smith normal form with transforms and the
lattice operations built on it (kernels, spans, integer solving)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from .matrix import Mat


@dataclass
class SNF:
    """U * A * V == D, D diagonal with d_1 | d_2 | ... (positive), U and V
    unimodular. ``Uinv`` and ``Vinv`` are their inverses."""

    diag: List[int]
    U: Mat
    V: Mat
    Uinv: Mat
    Vinv: Mat

    @property
    def rank(self):
        return len(self.diag)

    @property
    def invariant_factors(self):
        return tuple(self.diag)


def smith_normal_form(A: Mat) -> SNF:
    """Smith normal form with transforms, exact in Python integers.

    The pivot is the entry of least absolute value in the active block; rows
    and columns are cleared by division with remainder, and divisibility of
    the remaining block is forced by adding an offending row to the pivot row.
    """
    m, n = A.shape
    D = [list(map(int, row)) for row in A.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Uinv = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vinv = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]
            for row in Uinv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for row in D:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(src, dst, c):
        # row_dst += c * row_src ; Uinv: col_src -= c * col_dst
        Ds, Dd = D[src], D[dst]
        for k in range(n):
            if Ds[k]:
                Dd[k] += c * Ds[k]
        Us, Ud = U[src], U[dst]
        for k in range(m):
            if Us[k]:
                Ud[k] += c * Us[k]
        for row in Uinv:
            if row[dst]:
                row[src] -= c * row[dst]

    def add_col(src, dst, c):
        # col_dst += c * col_src ; Vinv: row_src -= c * row_dst
        for row in D:
            if row[src]:
                row[dst] += c * row[src]
        for row in V:
            if row[src]:
                row[dst] += c * row[src]
        Vs, Vd = Vinv[src], Vinv[dst]
        for k in range(n):
            if Vd[k]:
                Vs[k] -= c * Vd[k]

    def negate_row(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        for row in Uinv:
            row[i] = -row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            Di = D[i]
            for j in range(t, n):
                x = Di[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    if D[t][j]:
                        clean = False
            if not clean:
                best = (abs(D[t][t]), t, t)
                for i in range(t + 1, m):
                    if D[i][t] and abs(D[i][t]) < best[0]:
                        best = (abs(D[i][t]), i, t)
                for j in range(t + 1, n):
                    if D[t][j] and abs(D[t][j]) < best[0]:
                        best = (abs(D[t][j]), t, j)
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            p = D[t][t]
            bad = None
            if abs(p) != 1:
                for i in range(t + 1, m):
                    if any(D[i][j] % p for j in range(t + 1, n)):
                        bad = i
                        break
            if bad is None:
                break
            add_row(bad, t, 1)
        if D[t][t] < 0:
            negate_row(t)
        t += 1
    diag = [D[i][i] for i in range(min(m, n)) if D[i][i]]
    return SNF(diag, Mat(U, m, m), Mat(V, n, n), Mat(Uinv, m, m), Mat(Vinv, n, n))


def snf(A: Mat):
    """(invariant factors, U, V) with U A V diagonal."""
    s = smith_normal_form(A)
    return s.invariant_factors, s.U, s.V


def lattice_kernel(A: Mat) -> Mat:
    """Basis of {x in Z^n : A x = 0} as columns of an n x k matrix."""
    n = A.ncols
    if A.nrows == 0:
        return Mat.identity(n)
    s = smith_normal_form(A)
    return s.V.submatrix(range(n), range(s.rank, n))


def lattice_span_basis(G: Mat) -> Mat:
    """Full-column-rank basis of the column span of G."""
    m = G.nrows
    if G.ncols == 0 or m == 0:
        return Mat.zeros(m, 0)
    s = smith_normal_form(G)
    cols = [[s.Uinv[i, j] * s.diag[j] for i in range(m)] for j in range(s.rank)]
    return Mat.from_columns(cols, m)


class IntSolver:
    """Solve A x = b over the integers, reusing one factorisation."""

    def __init__(self, A: Mat):
        self.A = A
        self.s = smith_normal_form(A) if A.nrows else None

    def solve(self, b: Sequence[int]) -> Optional[List[int]]:
        m, n = self.A.shape
        if m == 0:
            return [0] * n
        s = self.s
        c = s.U.apply(b)
        y = [0] * n
        for i in range(m):
            if i < s.rank:
                if c[i] % s.diag[i]:
                    return None
                y[i] = c[i] // s.diag[i]
            elif c[i]:
                return None
        return s.V.apply(y)

    def solve_columns(self, B: Mat) -> Optional[Mat]:
        cols = []
        for j in range(B.ncols):
            x = self.solve(B.column(j))
            if x is None:
                return None
            cols.append(x)
        return Mat.from_columns(cols, self.A.ncols)


def solve_int(A: Mat, b):
    return IntSolver(A).solve(b)


def determinant(A: Mat) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    n = A.nrows
    if n == 0:
        return 1
    M = [list(r) for r in A.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]
