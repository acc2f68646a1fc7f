"""The 39 positive unimodular H-graph labelings with their family parameters.

Values are transcribed literally, including the leaf order of entry 2,
which is listed with b5 > b6.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction

from .plumbing import HLabels

# index, labels, (sigma1, 2*sigma2, sigma3), c, N1, N2, r1, s1, r2, s2
_TABLE = """
1  2,3,7,1,2,3       1,12,37             5/6        12   12   1    5    1    5
2  2,7,4,1,5,2       21,140,235          47/70      28   20   5    9    3    7
3  6,31,3,1,2,7      465,2604,3647       274/651    372  28   149  161  5    23
4  7,18,3,1,2,7      45,252,353          53/126     252  28   101  115  5    9
5  3,11,3,1,2,9      77,396,510          205/396    66   36   19   25   7    11
6  2,19,3,1,2,11     171,836,1023        239/418    76   44   17   21   9    13
7  2,3,3,1,2,27      25,108,117          37/54      12   108  1    5    25   29
8  2,3,3,1,3,5       14,60,65            41/60      12   30   1    5    7    13
9  2,11,3,1,3,4      55,264,318          155/264    44   24   9    13   5    11
10 3,4,3,1,3,4       5,24,29             155/264    24   24   5    11   5    11
11 3,7,2,1,3,97      1337,4074,3104      835/2037   42   582  11   17   191  197
12 3,8,2,1,3,56      109,336,259         17/42      48   336  13   19   109  115
13 3,47,2,1,3,17     1457,4794,3944      895/2397   282  102  91   97   31   37
14 3,88,2,1,3,16     319,1056,874        391/1056   528  96   173  179  29   35
15 4,5,2,1,3,47      1820,5640,4371      2263/5640  40   282  11   19   91   97
16 4,77,2,1,3,11     532,1848,1605       635/1848   616  66   227  235  19   25
17 5,16,2,1,3,11     1520,5280,4587      1813/5280  160  66   59   69   19   25
18 7,92,2,1,3,8      2093,7728,7134      2365/7728  1288 48   545  559  13   19
19 8,35,2,1,3,8      455,1680,1551       257/840    560  48   237  253  13   19
20 11,16,2,1,3,8     286,1056,975        323/1056   352  48   149  171  13   19
21 12,133,2,1,3,7    836,3192,3047       905/3192   3192 42   1451 1475 11   17
22 13,72,2,1,3,7     3432,13104,12509    3715/13104 1872 42   851  877  11   17
23 3,4,2,1,4,23      195,552,391         121/276    24   184  5    11   65   73
24 3,10,2,1,4,9      115,360,282         143/360    60   72   17   23   23   31
25 3,52,2,1,4,7      663,2184,1799       407/1092   312  56   101  107  17   25
26 6,67,2,1,4,5      2211,8040,7310      2539/8040  804  40   329  341  11   19
27 2,7,2,1,4,77      227,616,418         279/616    28   616  5    9    227  235
28 7,26,2,1,4,5      1001,3640,3310      1149/3640  364  40   149  163  11   19
29 2,11,2,1,4,25     781,2200,1550       969/2200   44   200  9    13   71   79
30 2,19,2,1,4,17     893,2584,1870       1113/2584  76   136  17   21   47   55
31 2,71,2,1,4,13     2485,7384,5486      3105/7384  284  104  69   73   35   43
32 3,7,2,1,5,7       69,210,160          43/105     42   70   11   17   23   33
33 2,5,2,1,5,33      254,660,429         307/660    20   330  3    7    127  137
34 2,7,2,1,5,16      413,1120,760        507/1120   28   160  5    9    59   69
35 2,21,2,1,5,9      434,1260,915        541/1260   84   90   19   23   31   41
36 2,55,2,1,5,8      297,880,652         371/880    220  80   53   57   27   37
37 2,3,2,1,8,57      391,912,532         445/912    12   912  1    5    391  407
38 2,3,2,1,9,32      247,576,336         281/576    12   576  1    5    247  265
39 2,3,2,1,12,17     175,408,238         199/408    12   408  1    5    175  199
"""

TABLE_SHA256 = "e99cf50dac55dbed85dcef49b36383af3be51b554ce5c3c78d8931561b30a57d"


class DatasetCorruptedError(RuntimeError):
    pass


@dataclass(frozen=True)
class AppendixEntry:
    index: int
    labels: HLabels
    sigma1: int
    two_sigma2: int
    sigma3: int
    c: Fraction
    N1: int
    N2: int
    r1: int
    s1: int
    r2: int
    s2: int

    @property
    def form(self) -> tuple[int, int, int]:
        return (self.sigma1, self.two_sigma2, self.sigma3)


def _parse(text: str) -> list[AppendixEntry]:
    entries = []
    for line in text.strip().splitlines():
        idx, labels, form, c, *rest = line.split()
        s1, t2, s3 = (int(x) for x in form.split(","))
        entries.append(AppendixEntry(
            int(idx), HLabels.parse(labels), s1, t2, s3, Fraction(c), *(int(x) for x in rest)))
    return entries


def table_digest(text: str = _TABLE) -> str:
    return hashlib.sha256(text.strip().encode()).hexdigest()


def load_appendix(text: str | None = None, verify: bool = True) -> list[AppendixEntry]:
    """Return the 39 appendix entries; ``text`` substitutes an alternative table."""
    if text is None:
        text = _TABLE
        if verify and table_digest(text) != TABLE_SHA256:
            raise DatasetCorruptedError("embedded appendix table fails its checksum")
    entries = _parse(text)
    if [e.index for e in entries] != list(range(1, len(entries) + 1)):
        raise DatasetCorruptedError("entry indices must run 1..n without gaps")
    return entries


def entry(index: int) -> AppendixEntry:
    entries = load_appendix()
    if not 1 <= index <= len(entries):
        raise IndexError(f"appendix has entries 1..{len(entries)}, not {index}")
    return entries[index - 1]
