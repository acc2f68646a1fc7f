from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from plumbcalc import exact

small = st.integers(min_value=-9, max_value=9)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


@given(st.integers(1, 5).flatmap(square))
def test_bareiss_matches_cofactor(m):
    assert exact.det(m) == exact.det_cofactor(m)


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(square))
def test_inverse_roundtrip(m):
    d = exact.det(m)
    if d == 0:
        with pytest.raises(exact.SingularMatrixError):
            exact.inverse_exact(m)
        return
    adj, dd = exact.inverse_exact(m)
    assert dd == d
    n = len(m)
    prod = exact.matmul(m, adj)
    assert [list(r) for r in prod] == [[d if i == j else 0 for j in range(n)] for i in range(n)]


def test_non_square_rejected():
    with pytest.raises(exact.NonSquareMatrixError):
        exact.det([[1, 2, 3], [4, 5, 6]])


def test_positive_definite():
    assert exact.is_positive_definite([[2, -1], [-1, 2]])
    assert not exact.is_positive_definite([[1, 2], [2, 1]])
    assert exact.leading_minors([[2, -1], [-1, 2]]) == [2, 3]


def test_quadratic_value():
    assert exact.quadratic_value([[2, -1], [-1, 2]], [1, 1]) == 2


def test_bernoulli_numbers():
    assert [exact.bernoulli_number(m) for m in range(7)] == [
        1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0, Fraction(1, 42)]


@given(st.integers(0, 12), st.fractions(min_value=0, max_value=1, max_denominator=50))
def test_bernoulli_reflection(m, x):
    # B_m(1 - x) = (-1)^m B_m(x)
    assert exact.bernoulli_poly(m, 1 - x) == (-1) ** m * exact.bernoulli_poly(m, x)


def test_bernoulli_negative_index():
    with pytest.raises(ValueError):
        exact.bernoulli_poly(-1, 0)
