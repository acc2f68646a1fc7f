"""H-graph plumbing matrices and the census of positive-definite unimodular ones.

Vertex layout (1-based labels b1..b6): leaves b1, b2 hang off center b3,
leaves b5, b6 hang off center b4, and the centers are joined by an edge.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, NamedTuple

from . import exact

# 0-based index pairs of the five edges
EDGES = ((0, 2), (1, 2), (2, 3), (3, 4), (3, 5))

# Bounds on a normalized PU labeling (b4 = 1, b1 < b2, b5 < b6).
B1_MAX, B2_MAX = 23, 133
B3_RANGE = range(2, 8)
B5_MAX, B6_MAX = 13, 97


class HLabels(NamedTuple):
    b1: int
    b2: int
    b3: int
    b4: int
    b5: int
    b6: int

    @classmethod
    def parse(cls, text: str) -> "HLabels":
        parts = [int(p) for p in text.replace(" ", "").strip("()").split(",")]
        if len(parts) != 6:
            raise ValueError(f"expected six labels, got {text!r}")
        return cls.make(*parts)

    @classmethod
    def make(cls, *b: int) -> "HLabels":
        h = cls(*(int(x) for x in b))
        if min(h) < 1:
            raise ValueError(f"labels must be positive: {h}")
        return h

    def __str__(self) -> str:
        return "M(" + ",".join(map(str, self)) + ")"


def build_matrix(h: Iterable[int]) -> exact.Matrix:
    b = tuple(h)
    m = [[0] * 6 for _ in range(6)]
    for i in range(6):
        m[i][i] = b[i]
    for i, j in EDGES:
        m[i][j] = m[j][i] = -1
    return exact.as_matrix(m)


def det_closed_form(h: Iterable[int]) -> int:
    b1, b2, b3, b4, b5, b6 = h
    return (b1 * b2 * b3 * b4 * b5 * b6 - b1 * b2 * b3 * b5 - b1 * b2 * b3 * b6
            - b1 * b2 * b5 * b6 - b1 * b4 * b5 * b6 - b2 * b4 * b5 * b6
            + (b1 + b2) * (b5 + b6))


def trace(h: Iterable[int]) -> int:
    return sum(h)


def is_pu(h: Iterable[int]) -> bool:
    h = tuple(h)
    if det_closed_form(h) != 1:
        return False
    return exact.is_positive_definite(build_matrix(h))


# -- symmetry --------------------------------------------------------------

def swap_left(h: HLabels) -> HLabels:
    return HLabels(h.b2, h.b1, h.b3, h.b4, h.b5, h.b6)


def swap_right(h: HLabels) -> HLabels:
    return HLabels(h.b1, h.b2, h.b3, h.b4, h.b6, h.b5)


def swap_arms(h: HLabels) -> HLabels:
    return HLabels(h.b5, h.b6, h.b4, h.b3, h.b1, h.b2)


GENERATORS = (swap_left, swap_right, swap_arms)


def automorphism_orbit(h: Iterable[int]) -> frozenset[HLabels]:
    h = HLabels(*h)
    orbit = set()
    for arms in (False, True):
        g = swap_arms(h) if arms else h
        for left in (False, True):
            for right in (False, True):
                x = swap_left(g) if left else g
                orbit.add(swap_right(x) if right else x)
    return frozenset(orbit)


def _canon_key(h: HLabels) -> tuple:
    return (
        not h.b4 < h.b3,
        not h.b1 <= h.b2,
        not h.b5 <= h.b6,
        tuple(h),
    )


def canonicalize(h: Iterable[int]) -> HLabels:
    """Orbit representative with b4 < b3, b1 <= b2, b5 <= b6 (lexicographic ties)."""
    return min(automorphism_orbit(h), key=_canon_key)


# -- enumeration -----------------------------------------------------------

def _solve_last_leaf(b1: int, b2: int, b3: int, b4: int, b5: int) -> int | None:
    """The unique b6 with det = 1, if integral. The determinant is affine in b6."""
    slope = (b1 * b2 * b3 * b4 * b5 - b1 * b2 * b3 - b1 * b2 * b5
             - b1 * b4 * b5 - b2 * b4 * b5 + b1 + b2)
    offset = -b1 * b2 * b3 * b5 + (b1 + b2) * b5
    if slope == 0:
        return None
    num = 1 - offset
    if num % slope:
        return None
    return num // slope


def _scan_small_left(small: int) -> list[HLabels]:
    """PU labelings with b4 = 1 whose smaller left leaf is ``small``.

    Both leaf orders are emitted, so the box is symmetric under the leaf swaps.
    """
    found = []
    for big in range(small + 1, B2_MAX + 1):
        if gcd(small, big) != 1:
            continue
        for b3 in B3_RANGE:
            for b5 in range(2, B5_MAX + 1):
                b6 = _solve_last_leaf(small, big, b3, 1, b5)
                if b6 is None or b6 < 2 or b6 > B6_MAX:
                    continue
                for left in ((small, big), (big, small)):
                    for right in ((b5, b6), (b6, b5)):
                        h = HLabels(left[0], left[1], b3, 1, right[0], right[1])
                        if is_pu(h):
                            found.append(h)
    return found


@dataclass(frozen=True)
class PUCensus:
    labelings: tuple[HLabels, ...]
    classes: tuple[HLabels, ...]
    class_of: dict = field(compare=False, repr=False, default_factory=dict)

    @property
    def convention_counts(self) -> dict[str, int]:
        """Labeling counts under the normalizations the 312 figure might assume."""
        return {
            "all_orientations": len(self.labelings),
            "b4_eq_1": sum(1 for h in self.labelings if h.b4 == 1),
            "b4_eq_1_ordered_leaves": sum(
                1 for h in self.labelings if h.b4 == 1 and h.b1 < h.b2 and h.b5 < h.b6),
            "classes": len(self.classes),
        }

    def to_csv(self, labelings: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["b1", "b2", "b3", "b4", "b5", "b6", "det",
                    "c1", "c2", "c3", "c4", "c5", "c6", "class_index"])
        rows = self.labelings if labelings else self.classes
        index = {c: i + 1 for i, c in enumerate(self.classes)}
        for h in rows:
            c = canonicalize(h)
            w.writerow([*h, det_closed_form(h), *c, index[c]])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "counts": self.convention_counts,
            "classes": [list(c) for c in self.classes],
            "labelings": [list(h) for h in self.labelings],
        }


def enumerate_pu(jobs: int = 1) -> PUCensus:
    """Scan the bounded box in both center orientations and keep the PU labelings.

    The b4 = 1 orientation is scanned directly: gcd(b1, b2) = 1 is required
    (it divides the determinant) and det = 1 is solved for b6, on which the
    determinant depends affinely. The b3 = 1 orientation is the arm-swapped image.
    """
    smalls = range(2, B1_MAX + 1)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan_small_left, smalls))
    else:
        parts = [_scan_small_left(b) for b in smalls]
    oriented = [h for part in parts for h in part]
    labelings = set(oriented)
    labelings.update(swap_arms(h) for h in oriented)
    ordered = tuple(sorted(labelings))
    class_of = {h: canonicalize(h) for h in ordered}
    classes = tuple(sorted(set(class_of.values()), key=lambda c: (c.b3, c.b5, c.b1, c.b2, c.b6)))
    return PUCensus(labelings=ordered, classes=classes, class_of=class_of)
