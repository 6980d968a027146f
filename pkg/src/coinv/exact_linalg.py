"""Exact linear algebra over the rationals.

Everything downstream (Betti numbers, pairing matrices, traces) must come out
as exact rationals so that integrality assertions are meaningful; this module
therefore never touches floating point.  `Rational` is the standard library
`fractions.Fraction`, which is always reduced, keeps a positive denominator
and normalizes zero to 0/1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rational = Fraction


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("entries must be exact rationals, got %r" % (x,))


class RationalMatrix:
    """Immutable dense matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        ent = tuple(_frac(x) for x in entries)
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix shape")
        if len(ent) != rows * cols:
            raise ValueError(
                "entry count %d does not match %dx%d" % (len(ent), rows, cols)
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ent)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return cls(nrows, ncols, [x for r in rows for x in r])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, [Fraction(0)] * (rows * cols))

    @classmethod
    def column(cls, vec: Sequence) -> "RationalMatrix":
        return cls(len(vec), 1, list(vec))

    # -- access ------------------------------------------------------------

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return "RationalMatrix(%d, %d, %s)" % (
            self.rows,
            self.cols,
            [str(e) for e in self.entries],
        )

    # -- algebra -----------------------------------------------------------

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols,
            self.rows,
            [self.entry(i, j) for j in range(self.cols) for i in range(self.rows)],
        )

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch for product")
        out = []
        orows = other.to_rows()
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum((ri[k] * orows[k][j] for k in range(self.cols)), Fraction(0)))
        return RationalMatrix(self.rows, other.cols, out)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch for sum")
        return RationalMatrix(
            self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + (-other)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "RationalMatrix":
        c = _frac(c)
        return RationalMatrix(self.rows, self.cols, [c * a for a in self.entries])

    def hstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch for hstack")
        ent = []
        for i in range(self.rows):
            ent.extend(self.row(i))
            ent.extend(other.row(i))
        return RationalMatrix(self.rows, self.cols + other.cols, ent)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RationalMatrix":
        ent = [self.entry(i, j) for i in row_idx for j in col_idx]
        return RationalMatrix(len(row_idx), len(col_idx), ent)

    def apply(self, vec: Sequence) -> list:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        v = [_frac(x) for x in vec]
        return [
            sum((a * b for a, b in zip(self.row(i), v)), Fraction(0))
            for i in range(self.rows)
        ]

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("trace of non-square matrix")
        return sum((self.entry(i, i) for i in range(self.rows)), Fraction(0))

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def det(self) -> Fraction:
        """Determinant by fraction Gaussian elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        rows = self.to_rows()
        acc = Fraction(1)
        for c in range(n):
            piv = _pick_pivot(rows, c, c)
            if piv is None:
                return Fraction(0)
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                acc = -acc
            acc *= rows[c][c]
            inv = 1 / rows[c][c]
            for i in range(c + 1, n):
                if rows[i][c] != 0:
                    f = rows[i][c] * inv
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        return acc

    def inverse(self) -> "RationalMatrix":
        if self.rows != self.cols:
            raise ValueError("inverse of non-square matrix")
        n = self.rows
        red, _, pivots = rref(self.hstack(RationalMatrix.identity(n)))
        if pivots[:n] != list(range(n)):
            raise ValueError("matrix is singular")
        return red.submatrix(range(n), range(n, 2 * n))

    def rank(self) -> int:
        return rref(self)[1]


def _pick_pivot(rows, start_row, col) -> Optional[int]:
    # Smallest-bit-size nonzero entry: keeps intermediate fractions small.
    best = None
    for i in range(start_row, len(rows)):
        e = rows[i][col]
        if e != 0:
            size = abs(e.numerator).bit_length() + e.denominator.bit_length()
            if best is None or size < best[0]:
                best = (size, i)
    return None if best is None else best[1]


def rref(m: RationalMatrix):
    """Reduced row-echelon form.

    Returns (reduced, rank, pivot_columns).  The reduced form is the unique
    RREF of the input; pivot columns are listed in increasing order.
    """
    rows = m.to_rows()
    pivots = []
    r = 0
    for c in range(m.cols):
        if r >= m.rows:
            break
        piv = _pick_pivot(rows, r, c)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [inv * a for a in rows[r]]
        for i in range(m.rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    reduced = RationalMatrix(m.rows, m.cols, [x for row in rows for x in row])
    return reduced, len(pivots), pivots


def kernel_basis(m: RationalMatrix) -> RationalMatrix:
    """Basis of the right null space, one basis vector per column."""
    red, rank, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    cols = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red.entry(r, f)
        cols.append(v)
    ent = [cols[j][i] for i in range(m.cols) for j in range(len(cols))]
    return RationalMatrix(m.cols, len(cols), ent)


def solve(m: RationalMatrix, b: Sequence) -> Optional[list]:
    """Some exact solution x of m @ x = b, or None when inconsistent."""
    bvec = [_frac(x) for x in b]
    if len(bvec) != m.rows:
        raise ValueError("right-hand side length mismatch")
    aug = m.hstack(RationalMatrix.column(bvec))
    red, rank, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for r, p in enumerate(pivots):
        x[p] = red.entry(r, m.cols)
    return x
