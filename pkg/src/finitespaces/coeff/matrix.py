"""A minimal dense matrix that always knows its shape (zero rows/columns are
common: zero modules, empty chain groups). Entries are ints or Fractions."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Sequence


class Mat:
    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Sequence], nrows: int = None, ncols: int = None):
        rows = [list(r) for r in rows]
        if nrows is None:
            nrows = len(rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix without rows")
            ncols = len(rows[0])
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ValueError(f"bad matrix shape, expected {nrows}x{ncols}")
        self.rows = rows
        self.nrows = nrows
        self.ncols = ncols

    # constructors ----------------------------------------------------------
    @staticmethod
    def zeros(m, n):
        return Mat([[0] * n for _ in range(m)], m, n)

    @staticmethod
    def identity(n):
        return Mat([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @staticmethod
    def from_columns(cols: Sequence[Sequence], nrows: int):
        cols = list(cols)
        return Mat([[c[i] for c in cols] for i in range(nrows)], nrows, len(cols))

    @staticmethod
    def diag(entries):
        n = len(entries)
        return Mat([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @staticmethod
    def hstack(blocks: Sequence["Mat"], nrows: int = None):
        blocks = list(blocks)
        if nrows is None:
            if not blocks:
                raise ValueError("nrows required")
            nrows = blocks[0].nrows
        rows = [[] for _ in range(nrows)]
        for B in blocks:
            if B.nrows != nrows:
                raise ValueError("row mismatch in hstack")
            for i in range(nrows):
                rows[i].extend(B.rows[i])
        return Mat(rows, nrows, sum(B.ncols for B in blocks))

    @staticmethod
    def vstack(blocks: Sequence["Mat"], ncols: int = None):
        blocks = list(blocks)
        if ncols is None:
            if not blocks:
                raise ValueError("ncols required")
            ncols = blocks[0].ncols
        rows = []
        for B in blocks:
            if B.ncols != ncols:
                raise ValueError("column mismatch in vstack")
            rows.extend(list(r) for r in B.rows)
        return Mat(rows, len(rows), ncols)

    @staticmethod
    def block_diag(blocks: Sequence["Mat"]):
        R = sum(b.nrows for b in blocks)
        C = sum(b.ncols for b in blocks)
        out = [[0] * C for _ in range(R)]
        r0 = c0 = 0
        for B in blocks:
            for i in range(B.nrows):
                row = B.rows[i]
                for j in range(B.ncols):
                    if row[j]:
                        out[r0 + i][c0 + j] = row[j]
            r0 += B.nrows
            c0 += B.ncols
        return Mat(out, R, C)

    # access ----------------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return [r[j] for r in self.rows]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]):
        return Mat([[self.rows[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def copy(self):
        return Mat([list(r) for r in self.rows], self.nrows, self.ncols)

    def tolist(self):
        return [list(r) for r in self.rows]

    def key(self):
        return (self.nrows, self.ncols, tuple(tuple(r) for r in self.rows))

    # arithmetic ------------------------------------------------------------
    @property
    def T(self):
        return Mat([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)], self.ncols, self.nrows)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        n = other.ncols
        out = []
        orow = other.rows
        for Ai in self.rows:
            Oi = [0] * n
            for t, a in enumerate(Ai):
                if a:
                    Bt = orow[t]
                    for j in range(n):
                        b = Bt[j]
                        if b:
                            Oi[j] += a * b
            out.append(Oi)
        return Mat(out, self.nrows, n)

    def apply(self, v: Sequence):
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return [sum(a * x for a, x in zip(row, v) if a and x) for row in self.rows]

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in +")
        return Mat([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.nrows, self.ncols)

    def __sub__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in -")
        return Mat([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.nrows, self.ncols)

    def __neg__(self):
        return Mat([[-a for a in r] for r in self.rows], self.nrows, self.ncols)

    def scale(self, c):
        return Mat([[c * a for a in r] for r in self.rows], self.nrows, self.ncols)

    def is_zero(self):
        return all(not x for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
        )

    def __hash__(self):
        return hash(self.key())

    def to_fractions(self):
        return Mat([[Fraction(x) for x in r] for r in self.rows], self.nrows, self.ncols)

    def __repr__(self):
        return f"Mat({self.tolist()!r}, {self.nrows}, {self.ncols})"
