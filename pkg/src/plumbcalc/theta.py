"""Closed-form q-series of an H-graph: central block, signed shifts, Z(q) and its split.

Z(q) is assembled as

    q^(-9 + tr(M)/2 + c) / 4 * sum_alpha eps(alpha) sum_{n in Z^2}
        sgn*(n1) sgn*(n2) q^(Q1(n + alpha)),

with Q1(x) = 2 x^T A x and A the central 2x2 block of M^{-1}.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, lcm
from typing import Iterable, Sequence

from . import exact
from .plumbing import build_matrix, trace
from .qseries import QSeries, ellipse_points

Alpha = tuple[Fraction, Fraction]
SIGNS4 = tuple(product((1, -1), repeat=4))


class FamilyMismatchError(ValueError):
    """Labels whose data do not fit the two-parameter family."""


def sgn_star(n) -> int:
    return 1 if n >= 0 else -1


@dataclass(frozen=True)
class QuadraticForm2:
    """Q(n) = sigma1 n1^2 + two_sigma2 n1 n2 + sigma3 n2^2."""

    sigma1: int
    two_sigma2: int
    sigma3: int

    def __post_init__(self):
        if self.sigma1 <= 0 or self.discQ <= 0:
            raise ValueError(f"form {self.coefficients} is not positive definite")

    @property
    def coefficients(self) -> tuple[int, int, int]:
        return (self.sigma1, self.two_sigma2, self.sigma3)

    @property
    def sigma2(self) -> Fraction:
        return Fraction(self.two_sigma2, 2)

    @property
    def discQ(self) -> Fraction:
        return self.sigma1 * self.sigma3 - self.sigma2 ** 2

    def __call__(self, x: Sequence) -> Fraction:
        x1, x2 = x
        return self.sigma1 * x1 * x1 + self.two_sigma2 * x1 * x2 + self.sigma3 * x2 * x2

    def star(self) -> "QuadraticForm2":
        """Q*(n) = Q(-n1, n2)."""
        return QuadraticForm2(self.sigma1, -self.two_sigma2, self.sigma3)

    def scaled(self, m: int) -> tuple[int, int, int]:
        return (m * self.sigma1, m * self.two_sigma2, m * self.sigma3)


class SignedAlphaSet:
    """Finite set of shifts alpha in (0,1)^2, each carrying a sign."""

    def __init__(self, entries: Iterable[tuple[Sequence, int]]):
        table: dict[Alpha, int] = {}
        for alpha, sign in entries:
            a = (Fraction(alpha[0]), Fraction(alpha[1]))
            if not all(0 < x < 1 for x in a):
                raise ValueError(f"shift {a} not in (0,1)^2")
            if sign not in (1, -1):
                raise ValueError("signs must be +1 or -1")
            if a in table:
                raise ValueError(f"duplicate shift {a}")
            table[a] = sign
        self._table = table

    def __iter__(self):
        return iter(sorted(self._table.items()))

    def __len__(self) -> int:
        return len(self._table)

    def __eq__(self, other) -> bool:
        return isinstance(other, SignedAlphaSet) and self._table == other._table

    def __repr__(self) -> str:
        return f"SignedAlphaSet({len(self)} shifts)"

    def sign(self, alpha: Sequence) -> int:
        return self._table[(Fraction(alpha[0]), Fraction(alpha[1]))]

    def points(self) -> frozenset[Alpha]:
        return frozenset(self._table)

    def subset(self, sign: int) -> frozenset[Alpha]:
        return frozenset(a for a, s in self._table.items() if s == sign)

    def is_closed(self) -> bool:
        """Closed under the three reflections, with the required sign symmetry."""
        for (a1, a2), s in self._table.items():
            for image in ((1 - a1, 1 - a2), (1 - a1, a2), (a1, 1 - a2)):
                if self._table.get(image) != s:
                    return False
        return True

    def minimal_K(self) -> int:
        """Smallest positive K with K * alpha integral for every shift."""
        return lcm(1, *(x.denominator for a in self._table for x in a))

    def without(self, alpha: Sequence) -> "SignedAlphaSet":
        key = (Fraction(alpha[0]), Fraction(alpha[1]))
        return SignedAlphaSet((a, s) for a, s in self._table.items() if a != key)


@dataclass(frozen=True)
class FamilyParams:
    N1: int
    N2: int
    r1: int
    r2: int
    s1: int
    s2: int

    @property
    def L(self) -> int:
        return gcd(self.N1, self.N2)

    @property
    def R1(self) -> int:
        return self.N1 // self.L

    @property
    def R2(self) -> int:
        return self.N2 // self.L

    def S1(self) -> frozenset[Alpha]:
        return self._block((self.r1, self.r2), (self.s1, self.s2))

    def S2(self) -> frozenset[Alpha]:
        return self._block((self.r1, self.s2), (self.s1, self.r2))

    def _block(self, *pairs) -> frozenset[Alpha]:
        pts = set()
        for u, v in pairs:
            x, y = Fraction(u, self.N1), Fraction(v, self.N2)
            pts.update({(x, y), (1 - x, y), (x, 1 - y), (1 - x, 1 - y)})
        return frozenset(pts)

    def signed_set(self) -> SignedAlphaSet:
        return SignedAlphaSet([(a, 1) for a in self.S1()] + [(a, -1) for a in self.S2()])


# -- the H-graph side -------------------------------------------------------

def inverse(h: Iterable[int]) -> exact.Matrix:
    return _inverse(tuple(h))


@lru_cache(maxsize=256)
def _inverse(h: tuple) -> exact.Matrix:
    return exact.inverse_rational(build_matrix(h))


def central_block(h: Iterable[int]) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    inv = inverse(h)
    return ((inv[2][2], inv[2][3]), (inv[3][2], inv[3][3]))


def central_block_closed_form(h: Iterable[int]):
    """The central block for unimodular labels, from the product formula."""
    b1, b2, b3, b4, b5, b6 = h
    w = b4 * b5 * b6 - b5 - b6
    l33 = Fraction(b1 * b2 * w)
    l34 = Fraction(b1 * b2 * b5 * b6)
    l44 = Fraction(b5 * b6 * (b1 * b2 * b5 * b6 + 1), w)
    return ((l33, l34), (l34, l44))


def alpha_of(h: Sequence[int], eps: Sequence[int]) -> Alpha:
    b1, b2, _, _, b5, b6 = h
    e1, e2, e5, e6 = eps
    return (Fraction(1, 2) * (1 + Fraction(e1, b1) + Fraction(e2, b2)),
            Fraction(1, 2) * (1 + Fraction(e5, b5) + Fraction(e6, b6)))


def alpha_set(h: Sequence[int]) -> SignedAlphaSet:
    if min(h[0], h[1], h[4], h[5]) < 2:
        raise ValueError("leaf labels must be at least 2")
    return SignedAlphaSet((alpha_of(h, e), e[0] * e[1] * e[2] * e[3]) for e in SIGNS4)


def shift_constant(h: Sequence[int]) -> Fraction:
    b1, b2, _, _, b5, b6 = h
    return Fraction(1, 2) * (Fraction(1, b1) + Fraction(1, b2) + Fraction(1, b5) + Fraction(1, b6))


def c_M(h: Sequence[int]) -> Fraction:
    return 9 - Fraction(trace(h), 2) - shift_constant(h)


def z_prefactor_exponent(h: Sequence[int]) -> Fraction:
    return -9 + Fraction(trace(h), 2) + shift_constant(h)


def _quad2(A, x) -> Fraction:
    return A[0][0] * x[0] ** 2 + 2 * A[0][1] * x[0] * x[1] + A[1][1] * x[1] ** 2


def lemma52_check(h: Sequence[int], n: Sequence[int], eps: Sequence[int], odd: bool = True) -> bool:
    """Exact test of 1/2 r^T M^-1 r = 1/2 (2n+2a)^T A (2n+2a) + c.

    ``odd`` selects middle entries (2n1+1, 2n2+1); otherwise (2n1, 2n2).
    """
    inv = inverse(h)
    e1, e2, e5, e6 = eps
    p = 1 if odd else 0
    r = (e1, e2, 2 * n[0] + p, 2 * n[1] + p, e5, e6)
    lhs = Fraction(1, 2) * exact.quadratic_value(inv, r)
    A = ((inv[2][2], inv[2][3]), (inv[3][2], inv[3][3]))
    a = alpha_of(h, eps)
    x = (2 * n[0] + 2 * a[0], 2 * n[1] + 2 * a[1])
    return lhs == Fraction(1, 2) * _quad2(A, x) + shift_constant(h)


def q1_form(h: Sequence[int]) -> tuple[Fraction, Fraction, Fraction]:
    """Coefficients (a, b, c) of Q1(x) = a x1^2 + b x1 x2 + c x2^2 = 2 x^T A x."""
    A = central_block(h)
    return (2 * A[0][0], 4 * A[0][1], 2 * A[1][1])


def sgn_double_sum(h: Sequence[int], cutoff) -> QSeries:
    """sum_alpha eps(alpha) sum_{n in Z^2} sgn*(n1) sgn*(n2) q^Q1(n+alpha), exponents < cutoff."""
    a, b, c = q1_form(h)
    pairs = []
    for alpha, sign in alpha_set(h):
        for n1, n2, v in ellipse_points(a, b, c, alpha, cutoff):
            pairs.append((v, sign * sgn_star(n1) * sgn_star(n2)))
    return QSeries.accumulate(pairs, cutoff)


def z_series(h: Sequence[int], cutoff) -> QSeries:
    """Z(q) through all exponents below ``cutoff``."""
    pre = z_prefactor_exponent(h)
    inner = sgn_double_sum(h, Fraction(cutoff) - pre)
    return inner.scale(Fraction(1, 4)).shift(pre)


def zhat_series(h: Sequence[int], cutoff) -> QSeries:
    """The homological block: Z(q) with q^2 replaced by q, through ``cutoff``."""
    return z_series(h, 2 * Fraction(cutoff)).substitute_power(Fraction(1, 2))


def false_theta_series(S: SignedAlphaSet, Q: QuadraticForm2, K: int, cutoff) -> QSeries:
    """sum_alpha eps(alpha) sum_{n >= 0} q^(K Q(n + alpha)), exponents < cutoff."""
    Kmin = S.minimal_K() if len(S) else 1
    if K % Kmin:
        warnings.warn(f"K={K} does not clear the shift denominators (minimal K is {Kmin})",
                      stacklevel=2)
    elif K != Kmin:
        warnings.warn(f"K={K} differs from the minimal K={Kmin}", stacklevel=2)
    return _orthant_sum(S, Q.scaled(K), cutoff)


def _orthant_sum(S: SignedAlphaSet, coeffs, cutoff) -> QSeries:
    a, b, c = coeffs
    pairs = []
    for alpha, sign in S:
        for _, _, v in ellipse_points(a, b, c, alpha, cutoff, orthant=True):
            pairs.append((v, sign))
    return QSeries.accumulate(pairs, cutoff)


def z_split(h: Sequence[int], cutoff) -> tuple[QSeries, QSeries]:
    """(Z1, Z2): the L Q and L Q* orthant sums over S1 (+) and S2 (-)."""
    params, Q = derive_family_params(h)
    S = params.signed_set()
    Z1 = _orthant_sum(S, Q.scaled(params.L), cutoff)
    Z2 = _orthant_sum(S, Q.star().scaled(params.L), cutoff)
    return Z1, Z2


def derive_family_params(h: Sequence[int]) -> tuple[FamilyParams, QuadraticForm2]:
    """Recover (N1, N2, r, s) and Q from the labels alone."""
    b1, b2, _, _, b5, b6 = h
    N1, N2 = 2 * lcm(b1, b2), 2 * lcm(b5, b6)

    def numerators(N: int, x: int, y: int) -> tuple[int, int]:
        # r from the all-minus signs, s from the mixed pair; both below N/2
        vals = []
        for ex, ey in ((-1, -1), (-1, 1)):
            v = Fraction(1, 2) * (1 + Fraction(ex, x) + Fraction(ey, y)) * N
            if v.denominator != 1:
                raise FamilyMismatchError(f"shift numerator {v} is not integral for N={N}")
            v = int(v)
            vals.append(min(v, N - v))
        return vals[0], vals[1]

    r1, s1 = numerators(N1, b1, b2)
    r2, s2 = numerators(N2, b5, b6)
    params = FamilyParams(N1, N2, r1, r2, s1, s2)
    a, b, c = q1_form(h)
    L = params.L
    coeffs = [a / L, b / L, c / L]
    if any(x.denominator != 1 for x in coeffs):
        raise FamilyMismatchError(f"Q1/L = {coeffs} is not integral")
    return params, QuadraticForm2(*(int(x) for x in coeffs))
