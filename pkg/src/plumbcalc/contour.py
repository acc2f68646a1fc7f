"""Z(q) straight from the principal-value contour integral.

Each circle integral is replaced by its exact coefficient-extraction weight:
a leaf contributes (w - 1/w) and picks m = -1 or m = 1 with weight
delta(m, -1) - delta(m, 1); a center contributes 1/(w - 1/w), whose principal
value extracts sgn_o(m)/2. No reduction to the central block is used; every
exponent is 1/2 m^T M^-1 m evaluated on the full six-vector.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

from . import exact
from .plumbing import build_matrix, trace
from .qseries import QSeries, ellipse_points

LEAVES = (0, 1, 4, 5)
CENTERS = (2, 3)


def sgn_o(m: int) -> int:
    if m % 2 == 0:
        return 0
    return 1 if m > 0 else -1


def pv_weight(power: int, m: int) -> Fraction:
    """Normalized circle integral of (w - 1/w)^power * w^m dw / w, power = +-1."""
    if power == 1:
        return Fraction((m == -1) - (m == 1))
    if power == -1:
        return Fraction(sgn_o(m), 2)
    raise ValueError(f"unsupported power {power}; H-graph vertices have degree 1 or 3")


def vertex_powers(n_vertices: int = 6) -> tuple[int, ...]:
    """Exponent of (w - 1/w) at each vertex: 2 - degree."""
    deg = [0] * n_vertices
    for i, j in ((0, 2), (1, 2), (2, 3), (3, 4), (3, 5)):
        deg[i] += 1
        deg[j] += 1
    return tuple(2 - d for d in deg)


def theta_exponent(h: Sequence[int], m: Sequence[int], inv=None) -> Fraction:
    if inv is None:
        inv = exact.inverse_rational(build_matrix(h))
    return Fraction(1, 2) * exact.quadratic_value(inv, m)


def z_series_contour(h: Sequence[int], cutoff) -> QSeries:
    inv = exact.inverse_rational(build_matrix(h))
    powers = vertex_powers()
    pre = -9 + Fraction(trace(h), 2)
    bound = Fraction(cutoff) - pre
    # JSON layout only: measure terms from the same q-power as the theta route
    layout = pre + sum(Fraction(1, 2 * h[i]) for i in LEAVES)
    # exponent as a quadratic in the center pair u = (m3, m4) for fixed leaves:
    # 1/2 (u^T B u + 2 u.w + k); complete the square to bound u.
    B = ((inv[2][2], inv[2][3]), (inv[3][2], inv[3][3]))
    detB = B[0][0] * B[1][1] - B[0][1] * B[1][0]
    pairs = []
    for leaf_vals in product((1, -1), repeat=4):
        m = [0] * 6
        for idx, v in zip(LEAVES, leaf_vals):
            m[idx] = v
        leaf_weight = Fraction(1)
        for idx in LEAVES:
            leaf_weight *= pv_weight(powers[idx], m[idx])
        w = [sum(inv[c][j] * m[j] for j in LEAVES) for c in CENTERS]
        k = exact.quadratic_value(inv, m)
        # u + B^-1 w is the completed-square variable
        s = ((B[1][1] * w[0] - B[0][1] * w[1]) / detB,
             (B[0][0] * w[1] - B[1][0] * w[0]) / detB)
        offset = k - _q(B, s)
        for m3, m4, _ in ellipse_points(B[0][0], 2 * B[0][1], B[1][1], s, 2 * bound - offset):
            wt = pv_weight(powers[2], m3) * pv_weight(powers[3], m4)
            if not wt:
                continue
            m[2], m[3] = m3, m4
            e = theta_exponent(h, m, inv)
            if e < bound:
                pairs.append((pre + e, leaf_weight * wt))
    return QSeries.accumulate(pairs, cutoff, layout)


def _q(B, x) -> Fraction:
    return B[0][0] * x[0] ** 2 + 2 * B[0][1] * x[0] * x[1] + B[1][1] * x[1] ** 2
