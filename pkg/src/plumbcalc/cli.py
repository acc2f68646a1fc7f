"""Command-line interface: ``plumbcalc <command> [options]``.

Exit codes: 0 when every check passes, 1 on a verification mismatch,
2 on invalid input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from math import gcd

from . import appendix
from .asympt import NotInQuantumSetError, order_check, precision_digits
from .contour import z_series_contour
from .gauss import ellsum_table
from .plumbing import HLabels, canonicalize, det_closed_form, enumerate_pu, is_pu
from .theta import derive_family_params, z_series, zhat_series
from .verify import printed_params, verify_entries

OK, MISMATCH, INVALID = 0, 1, 2


class InputError(Exception):
    pass


def _emit(args, doc=None, rows=None, text=None):
    out = args.output or sys.stdout
    if text is not None:
        out.write(text)
    elif args.format == "csv" and rows is not None:
        csv.writer(out, lineterminator="\n").writerows(rows)
    else:
        json.dump(doc, out, indent=2)
        out.write("\n")


def _entry(index_text: str) -> appendix.AppendixEntry:
    try:
        return appendix.entry(int(index_text))
    except (ValueError, IndexError) as exc:
        raise InputError(f"not an appendix entry: {index_text!r} ({exc})")


def _labels(text: str) -> HLabels:
    """An appendix index or six comma-separated labels."""
    if "," not in text:
        return _entry(text).labels
    try:
        h = HLabels.parse(text)
    except ValueError as exc:
        raise InputError(str(exc))
    if not is_pu(h):
        raise InputError(f"{h} is not positive definite unimodular (det = {det_closed_form(h)})")
    return h


def _entry_list(text: str | None) -> list[appendix.AppendixEntry]:
    entries = appendix.load_appendix()
    if not text:
        return entries
    return [_entry(x) for x in text.split(",") if x.strip()]


# -- commands --------------------------------------------------------------

def cmd_classify(args) -> int:
    census = enumerate_pu(jobs=args.jobs)
    expected = {canonicalize(e.labels) for e in appendix.load_appendix()}
    counts = census.convention_counts
    ok = counts["all_orientations"] == 312 and counts["classes"] == 39 and set(census.classes) == expected
    if args.format == "csv":
        _emit(args, text=census.to_csv(labelings=args.labelings))
    else:
        doc = census.to_json()
        if not args.labelings:
            doc.pop("labelings")
        doc["matches_appendix"] = set(census.classes) == expected
        _emit(args, doc)
    return OK if ok else MISMATCH


def cmd_series(args) -> int:
    h = _labels(args.target)
    cutoff = Fraction(args.cutoff)
    routes = ("theta", "contour") if args.route == "both" else (args.route,)
    results = {}
    for route in routes:
        if route == "theta":
            s = zhat_series(h, cutoff) if args.zhat else z_series(h, cutoff)
        else:
            s = z_series_contour(h, 2 * cutoff if args.zhat else cutoff)
            if args.zhat:
                s = s.substitute_power(Fraction(1, 2))
        results[route] = s
    first = next(iter(results.values()))
    equal = all(s == first for s in results.values())
    if args.format == "csv":
        rows = [["route", "exponent_num", "exponent_den", "coeff_num", "coeff_den"]]
        for route, s in results.items():
            rows += [[route, e.numerator, e.denominator, c.numerator, c.denominator] for e, c in s.items()]
        _emit(args, rows=rows)
    else:
        doc = {"labels": list(h), "zhat": args.zhat}
        doc.update({route: s.to_json() for route, s in results.items()})
        if len(results) > 1:
            doc["routes_agree"] = equal
        _emit(args, doc)
    return OK if equal else MISMATCH


def cmd_quantum_set(args) -> int:
    e = _entry(args.entry)
    P, Q = printed_params(e)
    try:
        rows = ellsum_table(P, Q, args.kmax)
    except ValueError as exc:
        raise InputError(f"entry {e.index}: {exc}")
    if args.format == "json":
        _emit(args, {"entry": e.index, "kmax": args.kmax,
                     "all_vanish": all(v for *_, v in rows),
                     "rows": [{"k": k, "h": h, "vanishes": v} for k, h, v in rows]})
    else:
        _emit(args, rows=[["k", "h", "vanishes"]] + [[k, h, int(v)] for k, h, v in rows])
    return OK if all(v for *_, v in rows) else MISMATCH


def _rational(text: str) -> tuple[int, int]:
    try:
        h, k = (int(x) for x in text.split("/")) if "/" in text else (int(text), 1)
    except ValueError:
        raise InputError(f"not a rational h/k: {text!r}")
    if k < 1 or gcd(h, k) != 1:
        raise InputError(f"need k > 0 and gcd(h, k) = 1, got {text}")
    return h, k


def cmd_asympt(args) -> int:
    e = _entry(args.entry)
    h, k = _rational(args.base)
    P, Q = printed_params(e)
    if not 0 <= args.order <= 6:
        raise InputError("order must lie in 0..6")
    try:
        rep = order_check(P.signed_set(), Q, P.L, h, k, args.order,
                          precision=precision_digits(args.precision), jobs=args.jobs)
    except NotInQuantumSetError as exc:
        raise InputError(str(exc))
    if args.format == "csv":
        _emit(args, text=rep.to_csv())
    else:
        doc = rep.to_json()
        doc["entry"] = e.index
        _emit(args, doc)
    return OK if rep.within() else MISMATCH


def _inject_typo(index: int) -> list[appendix.AppendixEntry]:
    """The embedded table with the c of one entry bumped: a negative control."""
    lines = appendix._TABLE.strip().splitlines()
    for i, line in enumerate(lines):
        parts = line.split()
        if int(parts[0]) == index:
            c = Fraction(parts[3])
            parts[3] = str(c + Fraction(1, c.denominator))
            lines[i] = "  ".join(parts)
            break
    else:
        raise InputError(f"no entry {index} to corrupt")
    return appendix.load_appendix("\n".join(lines), verify=False)


def cmd_verify_appendix(args) -> int:
    entries = _inject_typo(args.inject_typo) if args.inject_typo else appendix.load_appendix()
    wanted = {e.index for e in _entry_list(args.entries)}
    entries = [e for e in entries if e.index in wanted]
    report = verify_entries(entries, kmax=args.kmax, cutoff=args.cutoff, jobs=args.jobs)
    if args.format == "csv":
        _emit(args, rows=report.csv_rows())
    else:
        _emit(args, report.to_json())
    for e in report.failing():
        detail = "; ".join(f"{k}: {e.notes.get(k, 'failed')}" for k in e.failures())
        print(f"entry {e.index} {HLabels(*e.labels)}: {detail}", file=sys.stderr)
    return OK if report.passed else MISMATCH


def cmd_export(args) -> int:
    if args.what == "appendix":
        entries = appendix.load_appendix()
        header = ["index", "b1", "b2", "b3", "b4", "b5", "b6", "sigma1", "two_sigma2", "sigma3",
                  "c_num", "c_den", "N1", "N2", "r1", "s1", "r2", "s2"]
        rows = [[e.index, *e.labels, *e.form, e.c.numerator, e.c.denominator,
                 e.N1, e.N2, e.r1, e.s1, e.r2, e.s2] for e in entries]
        _emit(args, {"entries": [dict(zip(header, r)) for r in rows]}, rows=[header] + rows)
    elif args.what == "census":
        census = enumerate_pu(jobs=args.jobs)
        if args.format == "csv":
            _emit(args, text=census.to_csv(labelings=args.labelings))
        else:
            _emit(args, census.to_json())
    else:  # families
        header = ["index", "N1", "N2", "r1", "r2", "s1", "s2", "L", "sigma1", "two_sigma2", "sigma3"]
        rows = []
        for e in appendix.load_appendix():
            P, Q = derive_family_params(e.labels)
            rows.append([e.index, P.N1, P.N2, P.r1, P.r2, P.s1, P.s2, P.L, *Q.coefficients])
        _emit(args, {"families": [dict(zip(header, r)) for r in rows]}, rows=[header] + rows)
    return OK


# -- parser ----------------------------------------------------------------

def _common(fmt: str = "json") -> argparse.ArgumentParser:
    # a fresh parent per command, so per-command defaults do not leak
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=fmt)
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--output", type=argparse.FileType("w"), help="write here instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:

    p = argparse.ArgumentParser(prog="plumbcalc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[_common()], help="census of PU H-graph labelings")
    c.add_argument("--labelings", action="store_true", help="list all labelings, not just classes")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("series", parents=[_common()], help="Z(q) for an entry or label tuple")
    s.add_argument("target", help="appendix index, or labels like 2,3,7,1,2,3")
    s.add_argument("--cutoff", default="30", help="keep exponents below this (may be rational)")
    s.add_argument("--route", choices=("theta", "contour", "both"), default="theta")
    s.add_argument("--zhat", action="store_true", help="substitute q^2 -> q")
    s.set_defaults(func=cmd_series)

    q = sub.add_parser("quantum-set", parents=[_common("csv")], help="vanishing of the signed Gauss-type sum")
    q.add_argument("entry")
    q.add_argument("--kmax", type=int, default=24)
    q.set_defaults(func=cmd_quantum_set)

    a = sub.add_parser("asympt", parents=[_common()], help="radial expansion order check at h/k")
    a.add_argument("entry")
    a.add_argument("base", nargs="?", default="0/1", help="h/k, default 0/1")
    a.add_argument("--order", type=int, default=2)
    a.add_argument("--precision", type=int, help="digits (default $PLUMBCALC_PRECISION or 50)")
    a.set_defaults(func=cmd_asympt)

    v = sub.add_parser("verify-appendix", parents=[_common()], help="check every appendix entry")
    v.add_argument("--entries", help="comma-separated indices, default all")
    v.add_argument("--kmax", type=int, default=12)
    v.add_argument("--cutoff", type=Fraction, default=Fraction(30))
    v.add_argument("--inject-typo", type=int, metavar="N", help="corrupt entry N first (negative control)")
    v.set_defaults(func=cmd_verify_appendix)

    x = sub.add_parser("export", parents=[_common()], help="dump datasets")
    x.add_argument("what", choices=("appendix", "census", "families"))
    x.add_argument("--labelings", action="store_true")
    x.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be positive")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"plumbcalc: error: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
