from fractions import Fraction

import mpmath
import pytest

from plumbcalc.asympt import (NotInQuantumSetError, boundary_integral_exact, corner_derivative,
                              em_expansion, gaussian_boundary_integral, order_check,
                              pairing_check, phase_period, precision_digits, radial_eval)
from plumbcalc.theta import QuadraticForm2


def mpq(x):
    return mpmath.mpf(x.numerator) / x.denominator


def test_boundary_integral_vanishes_without_cross_term():
    assert boundary_integral_exact(QuadraticForm2(1, 0, 1), 1, 1, 2) == 0


def test_boundary_integral_even_order_rejected():
    with pytest.raises(ValueError):
        boundary_integral_exact(QuadraticForm2(1, 0, 1), 1, 2, 2)


@pytest.mark.parametrize("n,axis", [(1, 2), (3, 2), (1, 1), (3, 1)])
def test_boundary_integral_against_quadrature(entry1_family, n, axis):
    _, Q, L = entry1_family
    s1, b, s3 = Q.coefficients
    with mpmath.workdps(30):
        def g(x, y):
            return mpmath.exp(-L * (s1 * x * x + b * x * y + s3 * y * y))

        if axis == 2:
            f = lambda x: mpmath.diff(lambda y: g(x, y), 0, n)
        else:
            f = lambda x: mpmath.diff(lambda y: g(y, x), 0, n)
        num = mpmath.quad(f, [0, 0.05, 0.2, mpmath.inf])
        exact = gaussian_boundary_integral(Q, L, n, axis, precision=30)
        assert abs(num - exact) < 1e-15 * max(1, abs(exact))


@pytest.mark.parametrize("n", [1, 3, 5])
def test_boundary_integral_scaling(n):
    # Q -> c Q with mult fixed is the substitution x -> sqrt(c) x in one
    # variable and a factor c^(n/2) from the derivative: net c^((n-1)/2)
    Q = QuadraticForm2(3, 5, 4)
    base = boundary_integral_exact(Q, 2, n, 2)
    for c in (2, 3):
        scaled = QuadraticForm2(*(c * x for x in Q.coefficients))
        assert boundary_integral_exact(scaled, 2, n, 2) == base * Fraction(c) ** ((n - 1) // 2)


def test_corner_derivatives():
    Q = QuadraticForm2(1, 2, 3)
    assert corner_derivative(Q, 1, 0, 0) == 1
    assert corner_derivative(Q, 1, 2, 0) == -2
    assert corner_derivative(Q, 1, 1, 1) == -2
    assert corner_derivative(Q, 1, 1, 0) == 0
    # d^4/dx^4 exp(-x^2) at 0 = 12
    assert corner_derivative(QuadraticForm2(1, 0, 1), 1, 4, 0) == 12


@pytest.mark.parametrize("h,k", [(0, 1), (1, 2), (1, 3), (2, 5)])
def test_pairing(entry1_family, h, k):
    S, Q, L = entry1_family
    assert pairing_check(S, Q, L, h, k, 3) == {"reflection_invariant": True,
                                               "odd_families_vanish": True}


def test_period_is_k_for_entry1(entry1_family):
    S, Q, L = entry1_family
    assert all(phase_period(S, Q, L, 1, k) == k for k in (1, 2, 3, 4, 7))


def test_main_term_nonzero_is_hard_error(entry1_family):
    S, Q, L = entry1_family
    with pytest.raises(NotInQuantumSetError):
        em_expansion(S.without(next(iter(S))[0]), Q, L, 0, 1, 2)


def test_argument_checks(entry1_family):
    S, Q, L = entry1_family
    with pytest.raises(ValueError):
        em_expansion(S, Q, L, 0, 1, 7)
    with pytest.raises(ValueError):
        radial_eval(S, Q, L, 0, 1, 0)
    with pytest.raises(ValueError):
        radial_eval(S, Q, L, 2, 4, Fraction(1, 2))


def test_expansion_entry1(entry1_family):
    S, Q, L = entry1_family
    ex = em_expansion(S, Q, L, 0, 1, 3)
    assert ex.base == 0 and ex.period == 1
    assert [mpmath.nstr(a.real, 12) for a in ex.coefficients[:3]] == ["0.0", "-4.0", "-291.333333333"]
    assert all(a.imag == 0 for a in ex.coefficients)


def test_large_t_first_term(entry1_family):
    S, Q, L = entry1_family
    t = 10
    qmin = min(Q(a) for a, _ in S)
    first = sum(s for a, s in S if Q(a) == qmin) * mpmath.exp(-t * L * mpq(qmin))
    v = radial_eval(S, Q, L, 0, 1, t)
    assert abs(v - first) < 0.01 * abs(first)


def test_precision_doubling(entry1_family):
    S, Q, L = entry1_family
    t = Fraction(1, 256)
    a = radial_eval(S, Q, L, 1, 2, t, 25)
    b = radial_eval(S, Q, L, 1, 2, t, 50)
    assert abs(a - b) < mpmath.mpf(10) ** -20


def test_bounded_near_zero(entry1_family):
    S, Q, L = entry1_family
    v = radial_eval(S, Q, L, 0, 1, Fraction(1, 1024), 30)
    assert abs(v) < 0.01  # no 1/t blow-up: the main term cancels


def test_env_precision(monkeypatch):
    monkeypatch.setenv("PLUMBCALC_PRECISION", "64")
    assert precision_digits() == 64
    assert precision_digits(20) == 20
    monkeypatch.delenv("PLUMBCALC_PRECISION")
    assert precision_digits() == 50


def _richardson(vals, powers):
    """vals at t, t/2, t/4, ...; remove c t^p for each p in turn."""
    for p in powers:
        vals = [(2 ** p * b - a) / (2 ** p - 1) for a, b in zip(vals, vals[1:])]
    return vals[-1]


def test_a0_against_extrapolated_limit(entry1_family):
    # oracle: radial values with a(1..6) t^m removed, extrapolated to t = 0
    S, Q, L = entry1_family
    ex = em_expansion(S, Q, L, 0, 1, 6, 40)
    ts = [Fraction(1, 2 ** j) for j in range(12, 16)]
    with mpmath.workdps(40):
        vals = [radial_eval(S, Q, L, 0, 1, t, 40) - (ex.partial_sum(t) - ex.coefficients[0]) for t in ts]
        limit = _richardson(vals, (7, 8, 9))
        assert abs(limit - ex.coefficients[0]) < 1e-20


@pytest.mark.parametrize("order", [0, 2])
def test_order_ratios_small_t(entry1_family, order):
    S, Q, L = entry1_family
    ts = [Fraction(1, 2 ** j) for j in (9, 10, 11)]
    rep = order_check(S, Q, L, 0, 1, order, ts=ts, precision=30)
    assert rep.within(factor=1.5)
    assert len(rep.to_csv().splitlines()) == 4


def test_perturbed_a0_plateaus(entry1_family):
    S, Q, L = entry1_family
    # small enough t that the true residual is far below the offset
    ts = [Fraction(1, 2 ** j) for j in (11, 12)]
    rep = order_check(S, Q, L, 0, 1, 2, ts=ts, precision=30, a0_offset=mpmath.mpf("1e-3"))
    assert all(0.9 < float(r) < 1.1 for r in rep.ratios())
    assert not rep.within()
