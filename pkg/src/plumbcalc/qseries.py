"""Truncated q-series with rational exponents and exact rational coefficients."""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Mapping


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _frac_pair(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


class QSeries:
    """``sum c_e q^e`` over all exponents ``e < cutoff``.

    Exponents are absolute. ``prefactor`` only affects the JSON layout, where
    terms are written relative to it; it takes no part in equality.
    """

    __slots__ = ("_terms", "cutoff", "prefactor")

    def __init__(self, terms: Mapping = (), cutoff=0, prefactor=0):
        self.cutoff = Fraction(cutoff)
        self.prefactor = Fraction(prefactor)
        clean = {}
        for e, c in dict(terms).items():
            e, c = Fraction(e), Fraction(c)
            if c and e < self.cutoff:
                clean[e] = c
        self._terms = clean

    @classmethod
    def accumulate(cls, pairs, cutoff, prefactor=0) -> "QSeries":
        acc: dict[Fraction, Fraction] = {}
        for e, c in pairs:
            acc[e] = acc.get(e, 0) + c
        return cls(acc, cutoff, prefactor)

    # -- mapping-ish access --

    def __getitem__(self, e) -> Fraction:
        e = Fraction(e)
        if e >= self.cutoff:
            raise KeyError(f"exponent {e} is at or beyond the cutoff {self.cutoff}")
        return self._terms.get(e, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(sorted(self._terms))

    def items(self) -> list[tuple[Fraction, Fraction]]:
        return sorted(self._terms.items())

    def exponents(self) -> list[Fraction]:
        return sorted(self._terms)

    def min_exponent(self) -> Fraction | None:
        return min(self._terms) if self._terms else None

    @property
    def denom(self) -> int:
        """Common denominator of all exponents measured from the prefactor."""
        d = 1
        for e in self._terms:
            d = _lcm(d, (e - self.prefactor).denominator)
        return d

    # -- algebra --

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.cutoff == other.cutoff and self._terms == other._terms

    def __repr__(self) -> str:
        head = ", ".join(f"{c}*q^{e}" for e, c in self.items()[:4])
        more = " ..." if len(self) > 4 else ""
        return f"QSeries([{head}{more}], cutoff={self.cutoff})"

    def _combine(self, other: "QSeries", sign: int) -> "QSeries":
        cutoff = min(self.cutoff, other.cutoff)
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + sign * c
        return QSeries(acc, cutoff, self.prefactor)

    def __add__(self, other: "QSeries") -> "QSeries":
        return self._combine(other, 1)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self._combine(other, -1)

    def __neg__(self) -> "QSeries":
        return self.scale(-1)

    def scale(self, factor) -> "QSeries":
        factor = Fraction(factor)
        return QSeries({e: factor * c for e, c in self._terms.items()}, self.cutoff, self.prefactor)

    def shift(self, amount) -> "QSeries":
        """Multiply by ``q^amount``."""
        amount = Fraction(amount)
        return QSeries({e + amount: c for e, c in self._terms.items()},
                       self.cutoff + amount, self.prefactor + amount)

    def substitute_power(self, factor) -> "QSeries":
        """Replace q by q^factor (factor > 0); exponents and cutoff scale together."""
        factor = Fraction(factor)
        if factor <= 0:
            raise ValueError("factor must be positive")
        return QSeries({e * factor: c for e, c in self._terms.items()},
                       self.cutoff * factor, self.prefactor * factor)

    def truncate(self, cutoff) -> "QSeries":
        cutoff = Fraction(cutoff)
        if cutoff > self.cutoff:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self._terms, cutoff, self.prefactor)

    # -- serialization --

    def to_json(self) -> dict:
        d = self.denom
        terms = [[int((e - self.prefactor) * d), c.numerator, c.denominator]
                 for e, c in self.items()]
        return {
            "denom": d,
            "prefactor_exponent": _frac_pair(self.prefactor),
            "cutoff": _frac_pair(self.cutoff),
            "terms": terms,
        }

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)

    @classmethod
    def from_json(cls, doc: Mapping) -> "QSeries":
        d = int(doc["denom"])
        pre = Fraction(*doc["prefactor_exponent"])
        terms = {pre + Fraction(e, d): Fraction(n, m) for e, n, m in doc["terms"]}
        if "cutoff" in doc:
            cutoff = Fraction(*doc["cutoff"])
        else:
            cutoff = max(terms, default=pre) + 1
        return cls(terms, cutoff, pre)


# -- lattice enumeration ----------------------------------------------------

def _floor_sqrt(x: Fraction) -> int:
    """floor(sqrt(x)) for x >= 0."""
    if x <= 0:
        return 0
    return isqrt(x.numerator // x.denominator)


def ellipse_points(a, b, c, shift, bound, orthant: bool = False):
    """Yield ``(n1, n2, value)`` for integer points with value < bound.

    ``value = a X^2 + b X Y + c Y^2`` at ``(X, Y) = n + shift``; the form must be
    positive definite. With ``orthant`` only ``n >= 0`` is scanned. Bounds are
    padded by one and every candidate is checked exactly, so nothing is missed.
    """
    a, b, c, bound = Fraction(a), Fraction(b), Fraction(c), Fraction(bound)
    s1, s2 = Fraction(shift[0]), Fraction(shift[1])
    disc = 4 * a * c - b * b
    if a <= 0 or disc <= 0:
        raise ValueError("form is not positive definite")
    if bound <= 0:
        return
    # over all Y the form is at least disc/(4c) X^2
    xr = _floor_sqrt(4 * c * bound / disc) + 1
    start1 = 0 if orthant else int(-xr - s1) - 1
    for n1 in range(start1, int(xr - s1) + 2):
        x = n1 + s1
        rest = a * x * x - bound
        # c Y^2 + b x Y + rest < 0
        d = b * b * x * x - 4 * c * rest
        if d < 0:
            continue
        root = _floor_sqrt(d) + 1
        ylo = (-b * x - root) / (2 * c) - s2
        yhi = (-b * x + root) / (2 * c) - s2
        start = int(ylo) - 1
        if orthant:
            start = max(start, 0)
        for n2 in range(start, int(yhi) + 2):
            y = n2 + s2
            v = a * x * x + b * x * y + c * y * y
            if v < bound:
                yield n1, n2, v
