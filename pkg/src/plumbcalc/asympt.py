"""Radial asymptotics of F_{S,Q,eps} at rationals in the quantum set.

At q = exp(2 pi i h/k - t) the double series splits into residue classes
l mod p (p a period of the phases, normally p = k) and each class is a
shifted Gaussian lattice sum in T = p sqrt(t). Euler-Maclaurin then gives an
expansion in powers of t whose coefficients are exact elements of Q(zeta):
the odd-order boundary integrals and the corner derivatives of
g = exp(-mult Q) are rational, and the weights are signed phase sums of
Bernoulli values. Numbers are produced with mpmath only at the very end.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd, log
from typing import Iterable, Sequence

import mpmath

from .exact import bernoulli_poly
from .gauss import CyclotomicSum, is_zero, quantum_set_member
from .theta import QuadraticForm2, SignedAlphaSet

DEFAULT_DIGITS = 50
MAX_ORDER = 6
GUARD_BITS = 48
DEFAULT_TS = tuple(Fraction(1, 2 ** j) for j in range(4, 13))


class NotInQuantumSetError(ValueError):
    """The main 1/t term of the expansion does not vanish at h/k."""


def precision_digits(precision: int | None = None) -> int:
    if precision is not None:
        return int(precision)
    env = os.environ.get("PLUMBCALC_PRECISION")
    return int(env) if env else DEFAULT_DIGITS


# -- residue classes -------------------------------------------------------

def phase_period(S: SignedAlphaSet, Q: QuadraticForm2, mult: int, h: int, k: int) -> int:
    """Smallest multiple p of k with exp(2 pi i h/k mult Q(x)) invariant under x -> x + p e_j on S + Z^2."""
    D = S.minimal_K()
    hk = Fraction(h, k) * mult
    for j in range(1, 2 * D * D + 1):
        p = k * j
        ok = True
        for alpha, _ in S:
            for base in ((0, 0), (1, 0), (0, 1)):
                x = (alpha[0] + base[0], alpha[1] + base[1])
                q0 = Q(x)
                if (hk * (Q((x[0] + p, x[1])) - q0)) % 1 or (hk * (Q((x[0], x[1] + p)) - q0)) % 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return p
    raise ValueError("no phase period found")  # unreachable for rational shifts


@dataclass(frozen=True)
class _Class:
    sign: int
    x0: tuple[Fraction, Fraction]   # l + alpha
    beta: tuple[Fraction, Fraction]  # (l + alpha) / p
    phase: int                       # exponent of zeta_order


def _classes(S: SignedAlphaSet, Q: QuadraticForm2, mult: int, h: int, k: int, p: int):
    D = S.minimal_K()
    order = k * D * D
    out = []
    for alpha, sign in S:
        for l1 in range(p):
            for l2 in range(p):
                x0 = (l1 + alpha[0], l2 + alpha[1])
                X = (int(x0[0] * D), int(x0[1] * D))
                out.append(_Class(sign, x0, (x0[0] / p, x0[1] / p), (h * mult * Q(X)) % order))
    return order, out


def _weight(order: int, classes, fn) -> dict[int, Fraction]:
    acc: dict[int, Fraction] = {}
    for c in classes:
        v = fn(c)
        if v:
            acc[c.phase] = acc.get(c.phase, 0) + c.sign * v
    return {t: v for t, v in acc.items() if v}


def _weight_is_zero(order: int, w: dict[int, Fraction]) -> bool:
    if not w:
        return True
    den = 1
    for v in w.values():
        den = den * v.denominator // gcd(den, v.denominator)
    return is_zero(CyclotomicSum(order, {t: int(v * den) for t, v in w.items()}))


def _to_mpc(order: int, w: dict[int, Fraction]):
    return mpmath.fsum(mpmath.mpf(v.numerator) / v.denominator * mpmath.expjpi(mpmath.mpf(2 * t) / order)
                       for t, v in w.items()) if w else mpmath.mpc(0)


# -- the Gaussian g = exp(-mult Q) ----------------------------------------

def _gaussian_moment(a: int, lam: Fraction) -> Fraction:
    """int_0^oo x^a exp(-lam x^2) dx for odd a: ((a-1)/2)! / (2 lam^((a+1)/2))."""
    j = (a - 1) // 2
    return Fraction(factorial(j)) / (2 * lam ** (j + 1))


def boundary_integral_exact(Q: QuadraticForm2, mult: int, deriv_order: int, axis: int) -> Fraction:
    """Exact value of int_0^oo d^n g along an axis, n odd.

    axis 2: int_0^oo g^(0,n)(x, 0) dx;  axis 1: int_0^oo g^(n,0)(0, x) dx.
    On the axis, the n-th normal derivative of exp(-mult(b x y + s y^2)) is a
    polynomial in x with only odd powers, so each piece is an integer-index
    Gamma moment of exp(-lam x^2).
    """
    if deriv_order < 0 or deriv_order % 2 == 0:
        raise ValueError(f"deriv_order must be odd, got {deriv_order}")
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    n = deriv_order
    b = Q.two_sigma2
    along, normal = (Q.sigma1, Q.sigma3) if axis == 2 else (Q.sigma3, Q.sigma1)
    lam = Fraction(mult * along)
    total = Fraction(0)
    for c in range(n // 2 + 1):
        a = n - 2 * c
        coef = Fraction((-mult * b) ** a, factorial(a)) * Fraction((-mult * normal) ** c, factorial(c))
        total += coef * _gaussian_moment(a, lam)
    return factorial(n) * total


def gaussian_boundary_integral(Q: QuadraticForm2, mult: int, deriv_order: int, axis: int,
                               precision: int | None = None):
    with mpmath.workdps(precision_digits(precision)):
        v = boundary_integral_exact(Q, mult, deriv_order, axis)
        return mpmath.mpf(v.numerator) / v.denominator


def corner_derivative(Q: QuadraticForm2, mult: int, n1: int, n2: int) -> Fraction:
    """g^(n1,n2)(0,0), read off the Taylor series of exp(-mult Q)."""
    if (n1 + n2) % 2:
        return Fraction(0)
    j = (n1 + n2) // 2
    s1, b, s3 = Q.coefficients
    coef = Fraction(0)
    # Q^j = sum j!/(i! u! v!) s1^i b^u s3^v x^(2i+u) y^(u+2v)
    for u in range(min(n1, n2) + 1):
        if (n1 - u) % 2 or (n2 - u) % 2:
            continue
        i, v = (n1 - u) // 2, (n2 - u) // 2
        coef += Fraction(factorial(j), factorial(i) * factorial(u) * factorial(v)) * s1 ** i * b ** u * s3 ** v
    return coef * Fraction((-mult) ** j, factorial(j)) * factorial(n1) * factorial(n2)


# -- expansion -------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticExpansion:
    h: int
    k: int
    mult: int
    order: int
    coefficients: tuple  # a(0..order) as mpmath numbers
    digits: int
    period: int

    @property
    def base(self) -> Fraction:
        return Fraction(self.h, self.k)

    def partial_sum(self, t, upto: int | None = None):
        upto = self.order if upto is None else upto
        with mpmath.workdps(self.digits):
            t = _mp(t)
            return mpmath.fsum(a * t ** m for m, a in enumerate(self.coefficients[: upto + 1]))


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _check_args(h: int, k: int, order: int | None = None):
    if k < 1:
        raise ValueError("k must be positive")
    if gcd(h, k) != 1:
        raise ValueError(f"h={h} and k={k} are not coprime")
    if order is not None and not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order must lie in 0..{MAX_ORDER}")


def main_term_vanishes(S: SignedAlphaSet, Q: QuadraticForm2, mult: int, h: int, k: int) -> bool:
    p = phase_period(S, Q, mult, h, k)
    if p == k:
        return quantum_set_member(S, Q, mult, h, k)
    order, classes = _classes(S, Q, mult, h, k, p)
    return _weight_is_zero(order, _weight(order, classes, lambda c: Fraction(1)))


def _bern_table(classes, top: int):
    return {c.beta: ([bernoulli_poly(j, c.beta[0]) for j in range(top + 1)],
                     [bernoulli_poly(j, c.beta[1]) for j in range(top + 1)])
            for c in classes}


def exact_coefficients(S: SignedAlphaSet, Q: QuadraticForm2, mult: int, h: int, k: int, order: int):
    """(period, phase order, [a(m) as {phase: Fraction}]) with the main term checked to vanish."""
    _check_args(h, k, order)
    if not main_term_vanishes(S, Q, mult, h, k):
        raise NotInQuantumSetError(f"{h}/{k} is not in the quantum set: the 1/t term survives")
    p = phase_period(S, Q, mult, h, k)
    zorder, classes = _classes(S, Q, mult, h, k, p)
    B = _bern_table(classes, 2 * order + 2)
    coeffs = []
    for m in range(order + 1):
        n = 2 * m + 1
        scale = Fraction(p ** (2 * m), factorial(n + 1))
        acc: dict[int, Fraction] = {}

        def add(w, factor):
            for t, v in w.items():
                acc[t] = acc.get(t, 0) + factor * v

        add(_weight(zorder, classes, lambda c: B[c.beta][1][n + 1]),
            -scale * boundary_integral_exact(Q, mult, n, 2))
        add(_weight(zorder, classes, lambda c: B[c.beta][0][n + 1]),
            -scale * boundary_integral_exact(Q, mult, n, 1))
        for n1 in range(2 * m + 1):
            n2 = 2 * m - n1
            d = corner_derivative(Q, mult, n1, n2)
            if d:
                w = _weight(zorder, classes, lambda c: B[c.beta][0][n1 + 1] * B[c.beta][1][n2 + 1])
                add(w, d * p ** (2 * m) / (factorial(n1 + 1) * factorial(n2 + 1)))
        coeffs.append({t: v for t, v in acc.items() if v})
    return p, zorder, coeffs


def em_expansion(S: SignedAlphaSet, Q: QuadraticForm2, mult: int, h: int, k: int, order: int,
                 precision: int | None = None) -> AsymptoticExpansion:
    digits = precision_digits(precision)
    p, zorder, exact = exact_coefficients(S, Q, mult, h, k, order)
    with mpmath.workdps(digits + 10):
        values = tuple(_to_mpc(zorder, w) for w in exact)
    return AsymptoticExpansion(h, k, mult, order, values, digits, p)


def pairing_check(S: SignedAlphaSet, Q: QuadraticForm2, mult: int, h: int, k: int, order: int) -> dict[str, bool]:
    """Exact checks behind the pairing l -> (p-1)(1,1) - l, alpha -> (1,1) - alpha.

    ``reflection_invariant``: sign and phase of every class equal those of its image.
    ``odd_families_vanish``: every weight multiplying a half-integer power of t
    (axis terms with even derivative order, corner terms of odd total order) is 0.
    """
    _check_args(h, k, order)
    p = phase_period(S, Q, mult, h, k)
    zorder, classes = _classes(S, Q, mult, h, k, p)
    by_x0 = {c.x0: c for c in classes}
    invariant = True
    for c in classes:
        img = by_x0.get((p - c.x0[0], p - c.x0[1]))
        if img is None or img.sign != c.sign or img.phase != c.phase:
            invariant = False
            break
    B = _bern_table(classes, 2 * order + 2)
    vanish = True
    for n in range(0, 2 * order + 1, 2):
        for axis in (0, 1):
            if not _weight_is_zero(zorder, _weight(zorder, classes, lambda c: B[c.beta][axis][n + 1])):
                vanish = False
    for total in range(1, 2 * order + 1, 2):
        for n1 in range(total + 1):
            w = _weight(zorder, classes, lambda c: B[c.beta][0][n1 + 1] * B[c.beta][1][total - n1 + 1])
            if not _weight_is_zero(zorder, w):
                vanish = False
    return {"reflection_invariant": invariant, "odd_families_vanish": vanish}


# -- radial evaluation -----------------------------------------------------

def _to_fixed(x, W: int) -> int:
    return int(mpmath.floor(mpmath.ldexp(x, W)))


def _class_sum(Q: QuadraticForm2, tau, x0, p: int, W: int, lam: float):
    """sum_{n >= 0} exp(-tau Q(x0 + p n)) in fixed point with W fractional bits.

    Rows (fixed n1) are walked outward from the row minimum with two-level
    multiplicative recurrences, so each term costs two integer products.
    Rows stop once the row minimum exceeds ``lam`` (in units of the exponent).
    """
    s1, b, s3 = Q.coefficients
    ONE = 1 << W
    eps = 1
    A = tau * s3 * p * p
    c2 = _to_fixed(mpmath.exp(-2 * A), W)
    row_floor = tau * _mp(Fraction(4 * s1 * s3 - b * b, 4 * s3))
    total = 0
    n1 = 0
    while True:
        x1 = x0[0] + p * n1
        if row_floor * _mp(x1 * x1) > lam and n1 > 0:
            break
        # E(n2) = tau Q(x1, x0_2 + p n2)
        star = (-b * x1 / (2 * s3) - x0[1]) / p
        m = max(0, round(star))

        def E(n2):
            x2 = x0[1] + p * n2
            return tau * _mp(s1 * x1 * x1 + b * x1 * x2 + s3 * x2 * x2)

        e_m = E(m)
        if e_m <= lam:
            term0 = _to_fixed(mpmath.exp(-e_m), W)
            total += term0
            # upward
            term = term0
            rho = _to_fixed(mpmath.exp(-(E(m + 1) - e_m)), W)
            while True:
                term = (term * rho) >> W
                if not term:
                    break
                total += term
                if rho < ONE and term * ONE < eps * (ONE - rho):
                    break
                rho = (rho * c2) >> W
            # downward
            if m > 0:
                term = term0
                rho = _to_fixed(mpmath.exp(-(E(m - 1) - e_m)), W)
                n2 = m
                while n2 > 0:
                    term = (term * rho) >> W
                    total += term
                    n2 -= 1
                    if not term or (rho < ONE and term * ONE < eps * (ONE - rho)):
                        break
                    rho = (rho * c2) >> W
        n1 += 1
    return total


def _radial_job(args):
    S, Q, mult, h, k, t, digits = args
    return radial_eval(S, Q, mult, h, k, t, digits)


def radial_eval(S: SignedAlphaSet, Q: QuadraticForm2, mult: int, h: int, k: int, t,
                precision: int | None = None):
    """F(h/k + i t / 2 pi) by direct summation, to about ``precision`` digits.

    Returns an mpmath complex number (real when every phase is trivial).
    """
    t = Fraction(t) if not isinstance(t, (float, mpmath.mpf)) else t
    if t <= 0:
        raise ValueError("t must be positive")
    _check_args(h, k)
    digits = precision_digits(precision)
    W = int(digits * 3.33) + GUARD_BITS
    p = phase_period(S, Q, mult, h, k)
    zorder, classes = _classes(S, Q, mult, h, k, p)
    with mpmath.workprec(W + 32):
        tau = _mp(t) * mult
        lam = (W + 16) * log(2) + 40
        acc: dict[int, int] = {}
        for c in classes:
            v = _class_sum(Q, tau, c.x0, p, W, lam)
            acc[c.phase] = acc.get(c.phase, 0) + c.sign * v
        total = mpmath.fsum(mpmath.ldexp(v, -W) * mpmath.expjpi(mpmath.mpf(2 * ph) / zorder)
                            for ph, v in acc.items() if v)
    with mpmath.workdps(digits):
        return +mpmath.mpc(total)


def radial_table(S: SignedAlphaSet, Q: QuadraticForm2, mult: int, h: int, k: int,
                 ts: Iterable, precision: int | None = None, jobs: int = 1) -> dict:
    ts = list(ts)
    digits = precision_digits(precision)
    jobs_args = [(S, Q, mult, h, k, t, digits) for t in ts]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_radial_job, jobs_args))
    else:
        values = [_radial_job(a) for a in jobs_args]
    return dict(zip(ts, values))


# -- order check -----------------------------------------------------------

@dataclass
class OrderReport:
    h: int
    k: int
    order: int
    digits: int
    rows: list  # (t, radial, partial, residual, ratio or None)

    @property
    def expected_ratio(self) -> float:
        return 2.0 ** -(self.order + 1)

    def ratios(self) -> list:
        return [r[4] for r in self.rows if r[4] is not None]

    def within(self, factor: float = 4.0) -> bool:
        e = self.expected_ratio
        rs = self.ratios()
        return bool(rs) and all(e / factor <= float(r) <= e * factor for r in rs)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "radial", "partial_sum", "residual", "ratio"])
        n = min(self.digits, 30)
        for t, rad, part, res, ratio in self.rows:
            w.writerow([str(t), _fmt(rad, n), _fmt(part, n), mpmath.nstr(res, n),
                        "" if ratio is None else mpmath.nstr(ratio, 12)])
        return buf.getvalue()

    def to_json(self) -> dict:
        n = min(self.digits, 30)
        return {
            "h": self.h, "k": self.k, "order": self.order, "digits": self.digits,
            "expected_ratio": self.expected_ratio, "within_factor_4": self.within(),
            "rows": [{"t": str(t), "radial": _fmt(rad, n), "partial_sum": _fmt(part, n),
                      "residual": mpmath.nstr(res, n),
                      "ratio": None if ratio is None else mpmath.nstr(ratio, 12)}
                     for t, rad, part, res, ratio in self.rows],
        }


def _fmt(z, n: int) -> str:
    z = mpmath.mpc(z)
    if z.imag == 0:
        return mpmath.nstr(z.real, n)
    return f"{mpmath.nstr(z.real, n)}{'+' if z.imag >= 0 else '-'}{mpmath.nstr(abs(z.imag), n)}j"


def order_check(S: SignedAlphaSet, Q: QuadraticForm2, mult: int, h: int, k: int, order: int,
                ts: Sequence = DEFAULT_TS, precision: int | None = None, jobs: int = 1,
                radial: dict | None = None, a0_offset=0) -> OrderReport:
    """Residuals R(t) = |F - sum_{m<=order} a(m) t^m| and the ratios R(t/2)/R(t).

    ``a0_offset`` perturbs a(0); it exists for negative controls.
    """
    digits = precision_digits(precision)
    ts = [Fraction(t) for t in ts]
    grid = sorted(set(ts) | {t / 2 for t in ts}, reverse=True)
    if radial is None:
        radial = radial_table(S, Q, mult, h, k, grid, digits, jobs)
    exp = em_expansion(S, Q, mult, h, k, order, digits)
    rows = []
    with mpmath.workdps(digits):
        def resid(t):
            part = exp.partial_sum(t) + a0_offset
            return part, abs(radial[t] - part)

        for t in ts:
            part, r = resid(t)
            _, r_half = resid(t / 2)
            rows.append((t, radial[t], part, r, r_half / r if r else None))
    return OrderReport(h, k, order, digits, rows)
