"""Acceptance criteria, one test each. Every test prints a single verdict line.

Tolerances and runtime budgets are the stated ones; nothing is relaxed.
"""

import math
import random
import time
from fractions import Fraction
from itertools import product

from plumbcalc.appendix import load_appendix
from plumbcalc.asympt import order_check, radial_table
from plumbcalc.contour import z_series_contour
from plumbcalc.gauss import (check_mainthm_hypotheses, ellsum_table, gauss_sum, is_zero,
                             prop22_predicts_zero)
from plumbcalc.plumbing import canonicalize, enumerate_pu
from plumbcalc.theta import (FamilyParams, QuadraticForm2, alpha_set, lemma52_check, q1_form,
                             sgn_double_sum, shift_constant, z_series, z_split)

SERIES_ENTRIES = (1, 2, 7, 10, 26)
QUANTUM_ENTRIES = (1, 13, 21, 32, 39)
SIGNS = list(product((1, -1), repeat=4))


def verdict(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}")


def _entries():
    return load_appendix()


def test_criterion_1_classification(capsys):
    t0 = time.perf_counter()
    census = enumerate_pu()
    dt = time.perf_counter() - t0
    counts = census.convention_counts
    appendix_classes = {canonicalize(e.labels) for e in _entries()}
    literal = sum(1 for e in _entries() if e.labels in set(census.classes))
    ok = (counts["all_orientations"] == 312 and counts["classes"] == 39
          and set(census.classes) == appendix_classes and dt < 10)
    verdict(capsys, 1, ok,
            f"{counts['all_orientations']} labelings, {counts['classes']} classes, "
            f"class set == appendix classes: {set(census.classes) == appendix_classes} "
            f"({literal}/39 printed tuples are the chosen representatives), {dt:.2f}s < 10s")
    assert ok


def _printed_set_matches(e):
    """Compare {+-r mod N} and {+-s mod N} per coordinate with the labels' signed shifts."""
    P = FamilyParams(e.N1, e.N2, e.r1, e.r2, e.s1, e.s2)
    S = alpha_set(e.labels)
    want_plus, want_minus = S.subset(1), S.subset(-1)

    def pm(x, N):
        return frozenset({x % N, -x % N})

    for j, N, r, s in ((0, P.N1, P.r1, P.s1), (1, P.N2, P.r2, P.s2)):
        nums = {int(a[j] * N) for a in want_plus | want_minus}
        if nums != set(pm(r, N) | pm(s, N)) or len(pm(r, N) | pm(s, N)) != 4:
            return False
    try:
        got = P.signed_set()
    except ValueError:
        return False
    return got.subset(1) == want_plus and got.subset(-1) == want_minus


def test_criterion_2_appendix_regression(capsys):
    t0 = time.perf_counter()
    bad = {}
    for e in _entries():
        fails = []
        if shift_constant(e.labels) != e.c:
            fails.append(f"c printed {e.c} computed {shift_constant(e.labels)}")
        L = FamilyParams(e.N1, e.N2, e.r1, e.r2, e.s1, e.s2).L
        if tuple(L * x for x in QuadraticForm2(*e.form).coefficients) != q1_form(e.labels):
            fails.append("L*Q != (2l33, 4l34, 2l44)")
        if not _printed_set_matches(e):
            fails.append("alpha-set != S1 u S2")
        if fails:
            bad[e.index] = fails
    dt = time.perf_counter() - t0
    ok = not bad and dt < 5
    detail = "; ".join(f"entry {i}: {', '.join(f)}" for i, f in bad.items()) or "all 39 exact"
    verdict(capsys, 2, ok, f"{detail}; {dt:.2f}s < 5s")
    assert ok


def test_criterion_3_dual_route(capsys):
    t0 = time.perf_counter()
    results = {}
    for i in SERIES_ENTRIES:
        h = _entries()[i - 1].labels
        a, b = z_series(h, 50), z_series_contour(h, 50)
        results[i] = (a == b, len(a))
    dt = time.perf_counter() - t0
    ok = all(r[0] for r in results.values()) and dt < 60
    verdict(capsys, 3, ok, ", ".join(f"entry {i}: {'equal' if r[0] else 'DIFFER'} ({r[1]} terms)"
                                      for i, r in results.items()) + f"; {dt:.2f}s < 60s")
    assert ok


def test_criterion_4_split_identity(capsys):
    results = {}
    for i in SERIES_ENTRIES:
        h = _entries()[i - 1].labels
        total = sgn_double_sum(h, 50)
        Z1, Z2 = z_split(h, 50)
        diff = Z1 - Z2
        results[i] = (total == diff, total == diff.scale(2), len(total))
    ok = all(r[0] for r in results.values())
    verdict(capsys, 4, ok, ", ".join(
        f"entry {i}: sum {'==' if r[0] else '!='} Z1-Z2 ({r[2]} terms; == 2(Z1-Z2): {r[1]})"
        for i, r in results.items()))
    assert ok


def test_criterion_5_quantum_set(capsys):
    t0 = time.perf_counter()
    summary = {}
    for i in QUANTUM_ENTRIES:
        e = _entries()[i - 1]
        P = FamilyParams(e.N1, e.N2, e.r1, e.r2, e.s1, e.s2)
        rows = ellsum_table(P, QuadraticForm2(*e.form), 24)
        summary[i] = (sum(v for *_, v in rows), len(rows))
    dt = time.perf_counter() - t0
    ok = all(v == n for v, n in summary.values()) and dt < 120
    verdict(capsys, 5, ok, ", ".join(f"entry {i}: {v}/{n} vanish" for i, (v, n) in summary.items())
            + f"; {dt:.2f}s < 120s")
    assert ok


def test_criterion_6_hypotheses(capsys):
    failures = {}
    for e in _entries():
        P = FamilyParams(e.N1, e.N2, e.r1, e.r2, e.s1, e.s2)
        rep = check_mainthm_hypotheses(P, QuadraticForm2(*e.form))
        if not rep.passed:
            failures[e.index] = rep.failures()
    ok = not failures
    verdict(capsys, 6, ok, f"{39 - len(failures)}/39 entries satisfy every hypothesis"
            + (f"; failing {failures}" if failures else ""))
    assert ok


def test_criterion_7_gauss_sums(capsys):
    rng = random.Random(20240601)
    tested = predicted = counterexamples = 0
    while tested < 1000:
        c = rng.randint(1, 100)
        a = rng.randint(0, c - 1) * rng.choice((1, 1, 2, 3, 6)) % max(c, 1)
        b = rng.randint(0, c - 1)
        tested += 1
        if prop22_predicts_zero(a, b, c):
            predicted += 1
            if not is_zero(gauss_sum(a, b, c)):
                counterexamples += 1
    ok = tested >= 500 and counterexamples == 0
    verdict(capsys, 7, ok, f"{tested} triples (c <= 100), {predicted} predicted zero, "
            f"{counterexamples} counterexamples")
    assert ok


def test_criterion_8_asymptotics(capsys):
    e = _entries()[0]
    P = FamilyParams(e.N1, e.N2, e.r1, e.r2, e.s1, e.s2)
    S, Q = P.signed_set(), QuadraticForm2(*e.form)
    ts = [Fraction(1, 2 ** j) for j in range(4, 13)]
    grid = ts + [ts[-1] / 2]
    t0 = time.perf_counter()
    lines, ok = [], True
    for h, k in ((0, 1), (1, 2)):
        radial = radial_table(S, Q, P.L, h, k, grid, precision=50)
        for order in range(4):
            rep = order_check(S, Q, P.L, h, k, order, ts=ts, precision=50, radial=radial)
            good = rep.within(4.0)
            ok &= good
            worst = max(rep.ratios(), key=lambda r: abs(math.log(float(r) / rep.expected_ratio)))
            lines.append(f"{h}/{k} order {order}: {'ok' if good else 'out'} "
                         f"(target {rep.expected_ratio:g}, worst {float(worst):.3g})")
    dt = time.perf_counter() - t0
    ok = ok and dt < 60
    verdict(capsys, 8, ok, "; ".join(lines) + f"; {dt:.1f}s < 60s")
    assert ok


def test_criterion_9_middle_parity(capsys):
    pts = [(n1, n2) for n1 in range(-3, 4) for n2 in range(-3, 4)]
    odd_fail = even_fail = 0
    for e in _entries():
        for eps in SIGNS:
            for n in pts:
                odd_fail += not lemma52_check(e.labels, n, eps, odd=True)
                even_fail += not lemma52_check(e.labels, n, eps, odd=False)
    total = 39 * 16 * len(pts)
    ok = odd_fail == 0
    verdict(capsys, 9, ok, f"odd middle entries (2n+1): {total - odd_fail}/{total} exact; "
            f"even (2n): {total - even_fail}/{total}; confirmed parity: "
            f"{'odd' if ok else 'none'}")
    assert ok
