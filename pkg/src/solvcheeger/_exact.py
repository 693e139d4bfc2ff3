"""Small exact linear algebra over ``fractions.Fraction``.

Only what the classification code needs: row reduction, rank, and
solving a square system. Matrices are lists of lists.
"""

from fractions import Fraction
from numbers import Rational
import math

import numpy as np


def is_exact(values):
    """True when every entry is an int or a Fraction (bools excluded)."""
    arr = np.asarray(values, dtype=object).ravel()
    return all(isinstance(v, Rational) and not isinstance(v, bool) for v in arr)


def to_fraction_array(values):
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = Fraction(v)
    return out


def row_reduce(rows):
    """Reduced row echelon form; returns the nonzero rows only."""
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    pivot_row = 0
    for col in range(ncols):
        pivot = next((r for r in range(pivot_row, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[pivot_row], m[pivot] = m[pivot], m[pivot_row]
        p = m[pivot_row][col]
        m[pivot_row] = [v / p for v in m[pivot_row]]
        for r in range(len(m)):
            if r != pivot_row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[pivot_row])]
        pivot_row += 1
        if pivot_row == len(m):
            break
    return m[:pivot_row]


def rank(rows):
    return len(row_reduce(rows))


def solve(matrix, rhs):
    """Solve ``matrix @ x = rhs`` exactly for a nonsingular square matrix."""
    n = len(matrix)
    aug = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    red = row_reduce(aug)
    if len(red) < n or any(red[i][i] != 1 for i in range(n)):
        raise ZeroDivisionError("singular matrix")
    return [red[i][n] for i in range(n)]


def exact_sqrt(q):
    """Square root of a nonnegative Fraction; exact when q is a rational square."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative argument")
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return math.sqrt(q)
