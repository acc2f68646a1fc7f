"""Exact integer/rational substrate: determinants, adjugates, Bernoulli polynomials.

Rationals are ``fractions.Fraction`` (always reduced, positive denominator) and
matrices are tuples of tuples of ints or Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

Matrix = tuple[tuple, ...]


class NonSquareMatrixError(ValueError):
    pass


class SingularMatrixError(ZeroDivisionError):
    pass


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    m = tuple(tuple(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def is_symmetric(m: Matrix) -> bool:
    n = len(m)
    return all(len(r) == n for r in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i)
    )


def _check_square(m: Matrix) -> int:
    n = len(m)
    if any(len(r) != n for r in m):
        raise NonSquareMatrixError(f"expected square matrix, got {n}x{len(m[0]) if m else 0}")
    return n


def det(m: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    a = [list(r) for r in m]
    n = _check_square(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def det_cofactor(m: Sequence[Sequence]) -> int:
    """Laplace expansion along the first row. Test oracle only; O(n!)."""
    n = _check_square(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in (list(r) for r in m[1:])]
        total += (-1) ** j * m[0][j] * det_cofactor(minor)
    return total


def leading_minors(m: Sequence[Sequence[int]]) -> list[int]:
    n = _check_square(m)
    return [det([row[:k] for row in m[:k]]) for k in range(1, n + 1)]


def is_positive_definite(m: Sequence[Sequence[int]]) -> bool:
    """Sylvester's criterion; ``m`` must be symmetric."""
    return all(d > 0 for d in leading_minors(m))


def inverse_exact(m: Sequence[Sequence[int]]) -> tuple[Matrix, int]:
    """Return ``(adjugate, det)`` so that ``m @ adjugate == det * I``.

    The adjugate is obtained by Gauss-Jordan elimination over the rationals and
    scaled back by the determinant, which keeps it integral and exact.
    """
    n = _check_square(m)
    d = det(m)
    if d == 0:
        raise SingularMatrixError("matrix is singular")
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    adj = []
    for r in range(n):
        row = []
        for x in aug[r][n:]:
            v = x * d
            assert v.denominator == 1
            row.append(int(v))
        adj.append(tuple(row))
    return tuple(adj), d


def inverse_rational(m: Sequence[Sequence[int]]) -> Matrix:
    adj, d = inverse_exact(m)
    return tuple(tuple(Fraction(x, d) for x in row) for row in adj)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    if len(a[0]) != len(b):
        raise ValueError("shape mismatch")
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def quadratic_value(m: Sequence[Sequence], v: Sequence) -> Fraction:
    """``v^T m v`` computed exactly."""
    n = len(v)
    return sum(
        (v[i] * m[i][j] * v[j] for i in range(n) for j in range(n) if v[i] and v[j]),
        Fraction(0),
    )


@lru_cache(maxsize=None)
def bernoulli_number(m: int) -> Fraction:
    """B_m = B_m(0), with the convention B_1 = -1/2."""
    if m < 0:
        raise ValueError("index must be non-negative")
    if m == 0:
        return Fraction(1)
    # sum_{j<=m} C(m+1, j) B_j = 0
    return -sum((comb(m + 1, j) * bernoulli_number(j) for j in range(m)), Fraction(0)) / (m + 1)


def bernoulli_poly(m: int, x) -> Fraction:
    """Exact value of the m-th Bernoulli polynomial at rational ``x``."""
    if m < 0:
        raise ValueError("index must be non-negative")
    x = Fraction(x)
    return sum((comb(m, j) * bernoulli_number(j) * x ** (m - j) for j in range(m + 1)), Fraction(0))
