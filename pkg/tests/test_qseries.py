import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from plumbcalc.qseries import QSeries, ellipse_points

shifts = st.fractions(min_value=-3, max_value=3, max_denominator=12)
series = st.builds(
    lambda terms, pre: QSeries({e + pre: c for e, c in terms.items()}, 25, pre),
    st.dictionaries(st.fractions(min_value=0, max_value=20, max_denominator=12),
                    st.fractions(max_denominator=7).filter(bool), max_size=8),
    st.fractions(min_value=-3, max_value=3, max_denominator=6),
)


@given(series)
def test_json_roundtrip(s):
    back = QSeries.from_json(json.loads(s.dumps()))
    assert back == s
    assert back.prefactor == s.prefactor


def test_cutoff_semantics():
    s = QSeries({0: 1, Fraction(5, 2): 2, 3: 4}, cutoff=3)
    assert len(s) == 2
    assert s[Fraction(1, 2)] == 0
    with pytest.raises(KeyError):
        s[3]


def test_shift_and_substitute():
    s = QSeries({1: 1, 2: -1}, cutoff=4)
    assert s.shift(Fraction(1, 2)).exponents() == [Fraction(3, 2), Fraction(5, 2)]
    h = s.substitute_power(Fraction(1, 2))
    assert h.exponents() == [Fraction(1, 2), 1] and h.cutoff == 2
    with pytest.raises(ValueError):
        s.truncate(5)


@settings(max_examples=60)
@given(st.integers(1, 6), st.integers(-5, 5), st.integers(1, 6), shifts, shifts,
       st.integers(1, 60), st.booleans())
def test_ellipse_matches_brute_force(a, b, c, s1, s2, bound, orthant):
    if 4 * a * c - b * b <= 0:
        return
    got = {(n1, n2) for n1, n2, _ in ellipse_points(a, b, c, (s1, s2), bound, orthant)}
    # the form is at least disc/(4c) X^2 and disc/(4a) Y^2, so |X|, |Y| < 40 here
    lo = 0 if orthant else -55
    want = set()
    for n1 in range(lo, 55):
        for n2 in range(lo, 55):
            x, y = n1 + s1, n2 + s2
            if a * x * x + b * x * y + c * y * y < bound:
                want.add((n1, n2))
    assert got == want


def test_indefinite_rejected():
    with pytest.raises(ValueError):
        list(ellipse_points(1, 3, 1, (0, 0), 5))
