"""Exact integer lattice algebra for affine torus maps.

Coincidences of integer-affine maps on tori are the solutions of
C x = v (mod Z^n) on T^m; diagonalizing C by unimodular row and column
operations turns that into independent scalar congruences, giving the exact
component count, rational basepoints, a primitive basis of the direction
lattice, and an integer transverse frame in one pass.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import List, Optional, Sequence, Tuple


def smith_normal_form(mat: Sequence[Sequence[int]]):
    """Diagonalize an integer matrix by unimodular operations.

    Returns (S, U, V) with S = U @ mat @ V, U and V unimodular and S zero
    outside the leading diagonal block (positive entries, not necessarily
    divisibility-normalized, which the congruence solver does not need).
    """
    n = len(mat)
    m = len(mat[0]) if n else 0
    s = [[int(x) for x in row] for row in mat]
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, q):  # row_i -= q * row_j
        s[i] = [a - q * b for a, b in zip(s[i], s[j])]
        u[i] = [a - q * b for a, b in zip(u[i], u[j])]

    def add_col(i, j, q):  # col_i -= q * col_j
        for row in s:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    t = 0
    while t < min(n, m):
        best = None
        for i in range(t, n):
            for j in range(t, m):
                if s[i][j] != 0 and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = False
        for i in range(t + 1, n):
            if s[i][t] != 0:
                add_row(i, t, s[i][t] // s[t][t])
                dirty = dirty or s[i][t] != 0
        for j in range(t + 1, m):
            if s[t][j] != 0:
                add_col(j, t, s[t][j] // s[t][t])
                dirty = dirty or s[t][j] != 0
        if dirty:
            continue
        if s[t][t] < 0:
            s[t] = [-a for a in s[t]]
            u[t] = [-a for a in u[t]]
        t += 1
    return s, u, v


class TorusCongruenceSolution:
    """Solutions of C x = v (mod Z^n) on T^m.

    basepoints: one exact rational point in [0,1)^m per connected component.
    directions: primitive integer basis columns of the kernel lattice (the
        common tangent lattice of every component).
    transverse: integer frame columns with det(C @ transverse) nonzero,
        spanning a complement of the kernel.
    """

    def __init__(self, basepoints, directions, transverse):
        self.basepoints = basepoints
        self.directions = directions
        self.transverse = transverse

    @property
    def component_dim(self) -> int:
        return len(self.directions)


def solve_torus_congruence(c_matrix: Sequence[Sequence[int]],
                           v: Sequence[Fraction]) -> Optional[TorusCongruenceSolution]:
    """Exact solution set of C x = v (mod Z^n), or None when empty."""
    n = len(c_matrix)
    m = len(c_matrix[0]) if n else 0
    s, u, vmat = smith_normal_form(c_matrix)
    w = [sum(Fraction(u[i][j]) * Fraction(v[j]) for j in range(n)) for i in range(n)]
    rank = 0
    while rank < min(n, m) and s[rank][rank] != 0:
        rank += 1
    # vanished constraints must be integral for solvability
    for i in range(rank, n):
        if w[i].denominator != 1:
            return None
    residue_ranges = [range(s[i][i]) for i in range(rank)]
    basepoints = []
    for combo in iproduct(*residue_ranges):
        y = [Fraction(0)] * m
        for i, k in enumerate(combo):
            y[i] = ((w[i] + k) / s[i][i]) % 1
        x = [
            sum(Fraction(vmat[r][j]) * y[j] for j in range(m)) % 1
            for r in range(m)
        ]
        basepoints.append(tuple(x))
    directions = [tuple(vmat[r][j] for r in range(m)) for j in range(rank, m)]
    transverse = [tuple(vmat[r][j] for r in range(m)) for j in range(rank)]
    return TorusCongruenceSolution(basepoints, directions, transverse)


def int_det(mat: Sequence[Sequence[int]]) -> int:
    """Determinant of a small integer matrix by cofactor expansion."""
    n = len(mat)
    if n == 0:
        return 1
    if n == 1:
        return mat[0][0]
    total = 0
    for j in range(n):
        if mat[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        total += (-1) ** j * mat[0][j] * int_det(minor)
    return total


def shuffle_sign(subset: Tuple[int, ...], complement: Tuple[int, ...]) -> int:
    """Sign of the permutation (subset, complement) of 0..m-1."""
    perm = list(subset) + list(complement)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign
