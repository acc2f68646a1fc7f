"""Per-entry consistency checks of the appendix against exact computation."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .appendix import AppendixEntry
from .contour import z_series_contour
from .gauss import check_mainthm_hypotheses, ellsum_table
from .plumbing import is_pu
from .theta import (FamilyParams, QuadraticForm2, alpha_set, q1_form,
                    shift_constant, z_series)

CHECKS = ("labels_pu", "c_match", "q_match", "alpha_set_match",
          "hypotheses", "ellsum_sweep", "dual_route")


@dataclass
class EntryReport:
    index: int
    labels: tuple
    results: dict[str, bool]
    notes: dict[str, str] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.results.items() if not v]


@dataclass
class VerificationReport:
    entries: list[EntryReport]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failing(self) -> list[EntryReport]:
        return [e for e in self.entries if not e.passed]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "entries": [{"index": e.index, "labels": list(e.labels), "passed": e.passed,
                         "checks": e.results, "notes": e.notes,
                         "seconds": round(e.seconds, 3)} for e in self.entries],
        }

    def csv_rows(self) -> list[list]:
        rows = [["index", "labels", *CHECKS, "passed", "seconds"]]
        for e in self.entries:
            rows.append([e.index, ",".join(map(str, e.labels)),
                         *(int(e.results.get(c, True)) for c in CHECKS),
                         int(e.passed), f"{e.seconds:.3f}"])
        return rows


def printed_params(e: AppendixEntry) -> tuple[FamilyParams, QuadraticForm2]:
    return FamilyParams(e.N1, e.N2, e.r1, e.r2, e.s1, e.s2), QuadraticForm2(*e.form)


def verify_entry(e: AppendixEntry, kmax: int = 12, cutoff=30) -> EntryReport:
    t0 = time.perf_counter()
    h = e.labels
    res: dict[str, bool] = {}
    notes: dict[str, str] = {}
    res["labels_pu"] = is_pu(h)
    if not res["labels_pu"]:
        return EntryReport(e.index, tuple(h), res, notes, time.perf_counter() - t0)
    c = shift_constant(h)
    res["c_match"] = c == e.c
    if not res["c_match"]:
        notes["c_match"] = f"printed {e.c}, computed {c}"
    P, Q = printed_params(e)
    q1 = q1_form(h)
    res["q_match"] = tuple(P.L * x for x in Q.coefficients) == q1
    if not res["q_match"]:
        notes["q_match"] = f"L*Q = {tuple(P.L * x for x in Q.coefficients)}, Q1 = {tuple(map(str, q1))}"
    try:
        printed_set = P.signed_set()
    except ValueError as exc:  # S1 and S2 overlap
        printed_set = None
        notes["alpha_set_match"] = f"printed (N, r, s) give an invalid set: {exc}"
    res["alpha_set_match"] = printed_set is not None and printed_set == alpha_set(h)
    if not res["alpha_set_match"]:
        notes.setdefault("alpha_set_match", "S1 (+) and S2 (-) from (N, r, s) differ from the signed shifts")
    rep = check_mainthm_hypotheses(P, Q)
    res["hypotheses"] = rep.passed
    if not rep.passed:
        notes["hypotheses"] = ",".join(rep.failures())
    if kmax > 0 and printed_set is None:
        res["ellsum_sweep"] = False
        notes["ellsum_sweep"] = "no valid signed set"
    elif kmax > 0:
        bad = [(k, hh) for k, hh, ok in ellsum_table(P, Q, kmax) if not ok]
        res["ellsum_sweep"] = not bad
        if bad:
            notes["ellsum_sweep"] = "nonvanishing at " + " ".join(f"{hh}/{k}" for k, hh in bad[:5])
    if cutoff:
        res["dual_route"] = z_series(h, cutoff) == z_series_contour(h, cutoff)
    return EntryReport(e.index, tuple(h), res, notes, time.perf_counter() - t0)


def _job(args):
    return verify_entry(*args)


def verify_entries(entries, kmax: int = 12, cutoff=30, jobs: int = 1) -> VerificationReport:
    args = [(e, kmax, cutoff) for e in entries]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_job, args))  # map keeps entry order
    else:
        reports = [_job(a) for a in args]
    return VerificationReport(reports)
