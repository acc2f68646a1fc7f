"""Exact sums of roots of unity, quadratic Gauss sums, and quantum-set tests.

A ``CyclotomicSum`` of order n is an integer combination of the powers of
zeta_n = exp(2 pi i / n). Vanishing is decided exactly, by reducing to an
integral basis of Z[zeta_n] built from the prime-power factors of n.
Division by the n-th cyclotomic polynomial is kept as a second, independent
zero test.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Mapping

from .theta import FamilyParams, QuadraticForm2, SignedAlphaSet


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division."""
    if n < 1:
        raise ValueError("n must be positive")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class CyclotomicSum:
    """sum_t coeffs[t] * exp(2 pi i t / order)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Mapping[int, int] | None = None):
        if order < 1:
            raise ValueError("order must be positive")
        self.order = order
        acc: dict[int, int] = {}
        for t, c in (coeffs or {}).items():
            t %= order
            acc[t] = acc.get(t, 0) + c
        self.coeffs = {t: c for t, c in acc.items() if c}

    @classmethod
    def from_phases(cls, phases: Iterable[tuple[Fraction, int]]) -> "CyclotomicSum":
        """Build from (phase mod 1, integer weight) pairs on a common order."""
        phases = [(Fraction(p), w) for p, w in phases]
        n = lcm(1, *(p.denominator for p, _ in phases))
        acc: dict[int, int] = {}
        for p, w in phases:
            t = (p.numerator * (n // p.denominator)) % n
            acc[t] = acc.get(t, 0) + w
        return cls(n, acc)

    def lift(self, order: int) -> "CyclotomicSum":
        if order % self.order:
            raise ValueError(f"{order} is not a multiple of {self.order}")
        f = order // self.order
        return CyclotomicSum(order, {t * f: c for t, c in self.coeffs.items()})

    def _common(self, other: "CyclotomicSum"):
        n = lcm(self.order, other.order)
        return self.lift(n), other.lift(n)

    def __add__(self, other: "CyclotomicSum") -> "CyclotomicSum":
        a, b = self._common(other)
        acc = dict(a.coeffs)
        for t, c in b.coeffs.items():
            acc[t] = acc.get(t, 0) + c
        return CyclotomicSum(a.order, acc)

    def __neg__(self) -> "CyclotomicSum":
        return CyclotomicSum(self.order, {t: -c for t, c in self.coeffs.items()})

    def __sub__(self, other: "CyclotomicSum") -> "CyclotomicSum":
        return self + (-other)

    def __repr__(self) -> str:
        return f"CyclotomicSum(order={self.order}, terms={len(self.coeffs)})"

    def to_complex(self) -> complex:
        import cmath
        return sum(c * cmath.exp(2j * cmath.pi * t / self.order) for t, c in self.coeffs.items())


def is_zero(s: CyclotomicSum) -> bool:
    """Exact zero test in the tensor-product power basis of Z[zeta_n].

    With n = prod q_i (q_i = p_i^a_i), t -> (t mod q_i) identifies zeta_n^t with
    a product of primitive q_i-th roots. In each factor the powers below
    phi(q_i) form a basis, and the top block reduces through
    sum_{j<p} w^(i + j q/p) = 0. The element is zero iff every coordinate is.
    """
    if not s.coeffs:
        return True
    parts = sorted(factorize(s.order).items())
    if not parts:
        return False  # order 1: a single integer, already nonzero
    qs = [p ** a for p, a in parts]
    terms: dict[tuple[int, ...], int] = {}
    for t, c in s.coeffs.items():
        key = tuple(t % q for q in qs)
        terms[key] = terms.get(key, 0) + c
    for i, (p, a) in enumerate(parts):
        step = p ** (a - 1)
        top = (p - 1) * step
        reduced: dict[tuple[int, ...], int] = {}
        for key, c in terms.items():
            if not c:
                continue
            e = key[i]
            if e < top:
                reduced[key] = reduced.get(key, 0) + c
                continue
            base = e - top
            for j in range(p - 1):
                k2 = key[:i] + (base + j * step,) + key[i + 1:]
                reduced[k2] = reduced.get(k2, 0) - c
        terms = reduced
    return not any(terms.values())


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (constant first) of Phi_n, by dividing x^n - 1 by Phi_d for d | n, d < n."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_divide(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    dq = len(num) - len(den)
    quot = [0] * (dq + 1)
    lead = den[-1]
    for i in range(dq, -1, -1):
        q, r = divmod(num[i + len(den) - 1], lead)
        assert r == 0
        quot[i] = q
        if q:
            for j, d in enumerate(den):
                num[i + j] -= q * d
    assert not any(num[: len(den) - 1])
    return quot


def reduce_mod_cyclotomic(coeffs: Mapping[int, int], n: int) -> list[int]:
    """Remainder of sum coeffs[t] x^t modulo Phi_n (monic, so integral)."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    poly = [0] * max(n, deg + 1)
    for t, c in coeffs.items():
        poly[t % n] += c
    for i in range(len(poly) - 1, deg - 1, -1):
        c = poly[i]
        if c:
            shift = i - deg
            for j, pj in enumerate(phi):
                if pj:
                    poly[shift + j] -= c * pj
    return poly[:deg]


def is_zero_phi(s: CyclotomicSum) -> bool:
    return not any(reduce_mod_cyclotomic(s.coeffs, s.order))


def gauss_sum(a: int, b: int, c: int) -> CyclotomicSum:
    """G_c(a, b) = sum_{n mod c} exp(2 pi i (a n^2 + b n) / c)."""
    if c <= 0:
        raise ValueError("modulus must be positive")
    acc: dict[int, int] = {}
    for n in range(c):
        t = (a * n * n + b * n) % c
        acc[t] = acc.get(t, 0) + 1
    return CyclotomicSum(c, acc)


def prop22_predicts_zero(a: int, b: int, c: int) -> bool:
    """True when gcd(a, c) does not divide b, which forces G_c(a, b) = 0."""
    if c <= 0:
        raise ValueError("modulus must be positive")
    return b % gcd(a, c) != 0


def signed_phase_sum(S: SignedAlphaSet, Q: QuadraticForm2, mult: int, h: int, k: int) -> CyclotomicSum:
    """sum_alpha eps(alpha) sum_{l in [0,k)^2} exp(2 pi i (h/k) mult Q(l + alpha))."""
    if k < 1:
        raise ValueError("k must be positive")
    if gcd(h, k) != 1:
        raise ValueError(f"h={h} and k={k} are not coprime")
    # with X = D (l + alpha) integral, the phase is h mult Q(X) / (k D^2)
    D = S.minimal_K() if len(S) else 1
    order = k * D * D
    a, b, c = Q.coefficients
    scale = h * mult
    acc: dict[int, int] = {}
    for alpha, sign in S:
        u1, u2 = int(alpha[0] * D), int(alpha[1] * D)
        for l1 in range(k):
            x1 = l1 * D + u1
            for l2 in range(k):
                x2 = l2 * D + u2
                t = (scale * (a * x1 * x1 + b * x1 * x2 + c * x2 * x2)) % order
                acc[t] = acc.get(t, 0) + sign
    g = order
    for t in acc:
        g = gcd(g, t)
    return CyclotomicSum(order // g, {t // g: v for t, v in acc.items()})


def is_periodic(S: SignedAlphaSet, Q: QuadraticForm2, mult: int, h: int, k: int) -> bool:
    """Whether each phase is unchanged by l -> l + k e_j, so that l may run mod k."""
    hk = Fraction(h, k) * mult
    for alpha, _ in S:
        for l in ((0, 0), (1, 0), (0, 1)):
            x = (l[0] + alpha[0], l[1] + alpha[1])
            base = hk * Q(x)
            for d in ((k, 0), (0, k)):
                if (hk * Q((x[0] + d[0], x[1] + d[1])) - base) % 1:
                    return False
    return True


def quantum_set_member(S: SignedAlphaSet, Q: QuadraticForm2, K: int, h: int, k: int) -> bool:
    return is_zero(signed_phase_sum(S, Q, K, h, k))


def ellsum_vanishes(P: FamilyParams, Q: QuadraticForm2, h: int, k: int) -> bool:
    return quantum_set_member(P.signed_set(), Q, P.L, h, k)


def ellsum_table(P: FamilyParams, Q: QuadraticForm2, kmax: int) -> list[tuple[int, int, bool]]:
    rows = []
    for k in range(1, kmax + 1):
        for h in range(k):
            if gcd(h, k) == 1:
                rows.append((k, h, ellsum_vanishes(P, Q, h, k)))
    return rows


def _at_most_one_odd_prime(n: int) -> bool:
    return sum(1 for p in factorize(n) if p != 2) <= 1


@dataclass(frozen=True)
class HypothesisReport:
    N_even: bool
    L_R_consistent: bool
    sigma1_factorization: bool
    sigma3_factorization: bool
    two_sigma2_is_lcm: bool
    gcd_mu_one_odd_prime: bool
    gcd_L_mu_coprime: bool
    parity_condition: bool
    r_s_coprime_to_N: bool
    r_s_squares_congruent: bool
    L: int
    R1: int
    R2: int
    mu1: Fraction
    mu3: Fraction

    @property
    def checks(self) -> dict[str, bool]:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.type in ("bool", bool)}

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]


def check_mainthm_hypotheses(P: FamilyParams, Q: QuadraticForm2) -> HypothesisReport:
    L, R1, R2 = P.L, P.R1, P.R2
    mu1 = Fraction(Q.sigma1, R1)
    mu3 = Fraction(Q.sigma3, R2)
    mu_int = mu1.denominator == 1 and mu3.denominator == 1
    g = gcd(int(mu1), int(mu3)) if mu_int else 0
    r_s = ((P.r1, P.s1, P.N1), (P.r2, P.s2, P.N2))
    if L % 4:
        evens = [x % 2 == 0 for x in (R1, R2, int(mu3) if mu_int else 1)]
        parity = mu_int and sum(evens) == 1
    else:
        parity = True
    return HypothesisReport(
        N_even=P.N1 % 2 == 0 and P.N2 % 2 == 0,
        L_R_consistent=(L * R1 == P.N1 and L * R2 == P.N2 and gcd(R1, R2) == 1),
        sigma1_factorization=mu1.denominator == 1 and gcd(R1, int(mu1)) == 1,
        sigma3_factorization=mu3.denominator == 1 and gcd(int(mu3), R2) == 1,
        two_sigma2_is_lcm=Q.two_sigma2 == L * R1 * R2 == lcm(P.N1, P.N2),
        gcd_mu_one_odd_prime=mu_int and _at_most_one_odd_prime(g),
        gcd_L_mu_coprime=mu_int and gcd(L, g) == 1,
        parity_condition=parity,
        r_s_coprime_to_N=all(gcd(r, N) == 1 and gcd(s, N) == 1 for r, s, N in r_s),
        r_s_squares_congruent=all((r * r - s * s) % (2 * N) == 0 for r, s, N in r_s),
        L=L, R1=R1, R2=R2, mu1=mu1, mu3=mu3,
    )
