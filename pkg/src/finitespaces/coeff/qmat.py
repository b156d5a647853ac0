"""Exact rational linear algebra (fractions.Fraction entries)."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .matrix import Mat


def rref(A: Mat) -> Tuple[List[List[Fraction]], List[int]]:
    """Nonzero rows of the reduced row echelon form, and the pivot columns."""
    m, n = A.shape
    R = [[Fraction(x) for x in row] for row in A.rows]
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if R[i][c]:
                piv = i
                break
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        pv = R[r][c]
        if pv != 1:
            R[r] = [x / pv for x in R[r]]
        Rr = R[r]
        nz = [k for k in range(c, n) if Rr[k]]
        for i in range(m):
            if i != r:
                f = R[i][c]
                if f:
                    Ri = R[i]
                    for k in nz:
                        Ri[k] -= f * Rr[k]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(A: Mat) -> int:
    if A.nrows == 0 or A.ncols == 0:
        return 0
    return len(rref(A)[1])


def nullspace(A: Mat) -> Mat:
    """Basis of {x : A x = 0} as columns."""
    n = A.ncols
    if A.nrows == 0:
        return Mat.identity(n).to_fractions()
    R, piv = rref(A)
    pset = set(piv)
    cols = []
    for f in range(n):
        if f in pset:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, piv):
            v[p] = -row[f]
        cols.append(v)
    return Mat.from_columns(cols, n)


def column_basis(A: Mat) -> Mat:
    """A subset of the columns of A forming a basis of its span."""
    if A.ncols == 0 or A.nrows == 0:
        return Mat.zeros(A.nrows, 0)
    _, piv = rref(A)
    return A.submatrix(range(A.nrows), piv).to_fractions()


def solve(A: Mat, B: Mat) -> Optional[Mat]:
    """Some X with A X = B, or None."""
    m, n = A.shape
    p = B.ncols
    if B.nrows != m:
        raise ValueError("row mismatch in solve")
    if m == 0:
        return Mat.zeros(n, p)
    aug = Mat.hstack([A, B])
    R, piv = rref(aug)
    X = [[Fraction(0)] * p for _ in range(n)]
    for row, c in zip(R, piv):
        if c >= n:
            return None
        for j in range(p):
            X[c][j] = row[n + j]
    return Mat(X, n, p)


def solve_vec(A: Mat, b: Sequence) -> Optional[List[Fraction]]:
    X = solve(A, Mat([[x] for x in b], len(b), 1))
    return None if X is None else X.column(0)


def is_invertible(A: Mat) -> bool:
    return A.nrows == A.ncols and rank(A) == A.nrows


def inverse(A: Mat) -> Mat:
    if not is_invertible(A):
        raise ValueError("matrix not invertible")
    return solve(A, Mat.identity(A.nrows))


def quotient_maps(W: Mat, n: int):
    """For span(W) inside Q^n return (P, S): P: Q^n -> Q^q surjective with
    kernel span(W); S: Q^q -> Q^n with P S = I. Quotient coordinates are the
    non-pivot coordinates of the echelon form of W^T."""
    if W.ncols == 0:
        I = Mat.identity(n).to_fractions()
        return I, I
    R, piv = rref(W.T)
    pset = set(piv)
    keep = [j for j in range(n) if j not in pset]
    q = len(keep)
    P = [[Fraction(0)] * n for _ in range(q)]
    for j in range(n):
        v = [Fraction(0)] * n
        v[j] = Fraction(1)
        for row, c in zip(R, piv):
            f = v[c]
            if f:
                for t in range(n):
                    if row[t]:
                        v[t] -= f * row[t]
        for a, kk in enumerate(keep):
            P[a][j] = v[kk]
    S = Mat([[Fraction(int(i == kk)) for kk in keep] for i in range(n)], n, q)
    return Mat(P, q, n), S


def in_span(W: Mat, v: Sequence) -> bool:
    return solve_vec(W, v) is not None
