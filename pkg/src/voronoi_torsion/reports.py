"""Torsion reports: prime classification, data series, CSV round-trip.

A report is one (group, level, Voronoi degree) record.  Prime divisors of
the torsion order are partitioned into three bins: `torsion` for the
primes already present in finite stabilizers, `congruence` for primes
dividing Norm(p) - 1 for some prime divisor p of the level, and `exotic`
for everything else.  Residual unfactored composites are carried along
under the tag `unclassified-residual` and are never called exotic.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import groups
from .fieldcat import get_field
from .groups import GroupDescriptor
from .ideals import OIdeal, ideal_factor, is_prime_ideal, ideal_from_hnf_string

TAG_TORSION = "torsion"
TAG_CONGRUENCE = "congruence"
TAG_EXOTIC = "exotic"
TAG_RESIDUAL = "unclassified-residual"

CSV_COLUMNS = ["field_label", "n", "level_norm", "level_hnf", "index",
               "voronoi_degree", "betti", "torsion_factored", "log_ratio",
               "prime_tags", "is_prime_level"]


@dataclass(frozen=True)
class TorsionReport:
    group: GroupDescriptor
    level: OIdeal
    index: int
    degree: int
    betti: int
    torsion_factors: Tuple[Tuple[int, int], ...]  # (prime, exponent)
    residuals: Tuple[int, ...]
    tags: Tuple[Tuple[int, str], ...]             # (prime, tag)
    log_ratio: float

    @property
    def level_norm(self) -> int:
        return self.level.norm

    @property
    def is_prime_level(self) -> bool:
        return is_prime_ideal(self.level)

    def torsion_order(self) -> int:
        out = 1
        for p, e in self.torsion_factors:
            out *= p ** e
        for r in self.residuals:
            out *= r
        return out

    def tag_of(self, p: int) -> str:
        return dict(self.tags)[p]


def classify_primes(group: GroupDescriptor, level: OIdeal, index: int,
                    degree: int, betti: int,
                    factors: Dict[int, int],
                    residuals: Sequence[int] = ()) -> TorsionReport:
    """Build the report: tag every prime and fill log_ratio."""
    table = set(groups.small_prime_set(group))
    level_norms = [q.norm for q, _ in ideal_factor(level)]
    tags = []
    for p in sorted(factors):
        if p in table:
            tag = TAG_TORSION
        elif any((nq - 1) % p == 0 for nq in level_norms):
            tag = TAG_CONGRUENCE
        else:
            tag = TAG_EXOTIC
        tags.append((p, tag))
    for r in residuals:
        tags.append((r, TAG_RESIDUAL))
    order = 1
    for p, e in factors.items():
        order *= p ** e
    for r in residuals:
        order *= r
    ratio = math.log(order) / index if order > 1 else 0.0
    return TorsionReport(group, level, index, degree, betti,
                         tuple(sorted(factors.items())), tuple(residuals),
                         tuple(tags), ratio)


@dataclass
class Series:
    points: List[Tuple[float, float]]
    reference: Optional[float]       # horizontal limit line, when delta = 1
    reference_note: str = ""         # "conjecturally zero" for delta >= 2


def _x_of(report: TorsionReport, ordering: str) -> float:
    if ordering == "index":
        return float(report.index)
    if ordering == "norm":
        return float(report.level_norm)
    raise ValueError(f"unknown ordering {ordering!r}")


def _reference_for(group: GroupDescriptor) -> Tuple[Optional[float], str]:
    if groups.deficiency(group) == 1:
        try:
            return float(groups.bv_limit(group)), ""
        except ValueError:
            return None, "no closed form on record"
    return 0.0, "conjecturally zero"


def ratio_series(reports: Sequence[TorsionReport], degree: int,
                 ordering: str = "index") -> Series:
    picked = [r for r in reports if r.degree == degree]
    if picked:
        labels = {r.group.label for r in picked}
        if len(labels) != 1:
            raise ValueError(f"mixed groups in series: {sorted(labels)}")
        ref, note = _reference_for(picked[0].group)
    else:
        ref, note = None, ""
    pts = sorted((_x_of(r, ordering), r.log_ratio) for r in picked)
    return Series(pts, ref, note)


def euler_characteristic_series(reports: Sequence[TorsionReport],
                                sign_origin_degree: int,
                                ordering: str = "index") -> Series:
    """Per-level alternating sums of log-torsion/index, signs anchored so
    that sign_origin_degree contributes positively.  Levels missing some
    degree of the window still produce a point (missing degrees add 0)."""
    if not reports:
        return Series([], None, "")
    labels = {r.group.label for r in reports}
    if len(labels) != 1:
        raise ValueError(f"mixed groups in series: {sorted(labels)}")
    by_level: Dict[str, List[TorsionReport]] = {}
    for r in reports:
        by_level.setdefault(r.level.hnf_string(), []).append(r)
    pts = []
    for recs in by_level.values():
        acc = 0.0
        for r in recs:
            sign = -1 if (r.degree + sign_origin_degree) % 2 else 1
            acc += sign * r.log_ratio
        pts.append((_x_of(recs[0], ordering), acc))
    ref, note = _reference_for(reports[0].group)
    return Series(sorted(pts), ref, note)


def filter_series(reports: Sequence[TorsionReport], predicate: str
                  ) -> List[TorsionReport]:
    """predicate: 'all', 'prime', or 'tower:<seed hnf or rational>'."""
    if predicate == "all":
        return list(reports)
    if predicate == "prime":
        return [r for r in reports if r.is_prime_level]
    if predicate.startswith("tower:"):
        seed_text = predicate[len("tower:"):]
        if not reports:
            return []
        nf = reports[0].group.field
        if ";" in seed_text or "," in seed_text:
            seed = ideal_from_hnf_string(nf, seed_text)
        else:
            from .ideals import principal
            seed = principal(nf, int(seed_text))
        chain: List[TorsionReport] = []
        tail = None
        for r in sorted(reports, key=lambda r: (r.level_norm,
                                                r.level.hnf_string(),
                                                r.degree)):
            lev = r.level
            if tail is not None and lev.basis == tail.basis:
                chain.append(r)   # further degrees of the same level
                continue
            anchor = tail if tail is not None else seed
            # divisibility: anchor | lev  <=>  lev is contained in anchor
            if anchor.contains_ideal(lev) and (tail is not None
                                               or lev.basis == seed.basis):
                chain.append(r)
                tail = lev
        return chain
    raise ValueError(f"unknown filter predicate {predicate!r}")


def shared_exotic_report(reports_a: Sequence[TorsionReport],
                         reports_b: Sequence[TorsionReport]
                         ) -> Dict[int, Tuple[int, int]]:
    """Primes tagged exotic on both sides at the same level, with the two
    exponents."""
    def exotic_map(reports):
        out = {}
        for r in reports:
            for p, tag in r.tags:
                if tag == TAG_EXOTIC:
                    out[p] = dict(r.torsion_factors)[p]
        return out

    norms_a = {r.level_norm for r in reports_a}
    norms_b = {r.level_norm for r in reports_b}
    if reports_a and reports_b and norms_a != norms_b:
        raise ValueError("reports cover different levels")
    ea, eb = exotic_map(reports_a), exotic_map(reports_b)
    return {p: (ea[p], eb[p]) for p in sorted(set(ea) & set(eb))}


# -- CSV round-trip -----------------------------------------------------

def _format_factors(report: TorsionReport) -> str:
    parts = [f"{p}^{e}" for p, e in report.torsion_factors]
    parts += [f"R:{r}" for r in report.residuals]
    return " ".join(parts)


def _format_tags(report: TorsionReport) -> str:
    return " ".join(f"{p}:{tag}" for p, tag in report.tags)


def report_to_row(report: TorsionReport) -> List[str]:
    return [report.group.field.label, str(report.group.n),
            str(report.level_norm), report.level.hnf_string(),
            str(report.index), str(report.degree), str(report.betti),
            _format_factors(report), format(report.log_ratio, ".17g"),
            _format_tags(report), "1" if report.is_prime_level else "0"]


def row_to_report(row: Dict[str, str]) -> TorsionReport:
    missing = [c for c in CSV_COLUMNS if c not in row or row[c] is None]
    if missing:
        raise ValueError(f"CSV row missing columns: {missing}")
    nf = get_field(row["field_label"])
    group = GroupDescriptor(nf, int(row["n"]))
    level = ideal_from_hnf_string(nf, row["level_hnf"])
    factors = {}
    residuals = []
    for part in row["torsion_factored"].split():
        if part.startswith("R:"):
            residuals.append(int(part[2:]))
        else:
            p, e = part.split("^")
            factors[int(p)] = int(e)
    tags = []
    for part in row["prime_tags"].split():
        p, tag = part.split(":", 1)
        tags.append((int(p), tag))
    return TorsionReport(group, level, int(row["index"]),
                         int(row["voronoi_degree"]), int(row["betti"]),
                         tuple(sorted(factors.items())), tuple(residuals),
                         tuple(tags), float(row["log_ratio"]))


def write_csv(path, reports: Iterable[TorsionReport]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in reports:
            w.writerow(report_to_row(r))


def read_csv(path) -> List[TorsionReport]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or \
                list(reader.fieldnames) != CSV_COLUMNS:
            raise ValueError(
                f"CSV schema mismatch: expected columns {CSV_COLUMNS}, "
                f"found {reader.fieldnames}")
        return [row_to_report(row) for row in reader]
