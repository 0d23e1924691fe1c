"""Run orchestration: level sweeps with caching, budgets and resumability.

A run walks the levels of a norm range in norm order.  Per level it
builds (or loads) the chain complex, computes homology in the requested
Voronoi degrees, classifies the torsion primes and appends one CSV row
per degree.  Every level gets a ledger entry: done, skipped-budget or
failed; a rerun over a completed ledger touches nothing.

The fan cache (one file per (field, n)) and the complex cache (one file
per (field, n, level)) are versioned JSON; the fan cache records a hash
of the field-catalog record so a catalog edit invalidates it.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import cells, chain, cosets, groups, isometry, reports, snf
from .cells import CellComplexData, CellOrbit, KoecherCell
from .fieldcat import NumberField, get_field
from .ideals import OIdeal, enumerate_levels, ideal_from_hnf_string
from .sparse import SparseIntMatrix

FORMAT_VERSION = 1
CACHE_ENV_VAR = "VORONOI_TORSION_CACHE"


@dataclass
class JobSpec:
    group_label: str
    min_norm: int = 1
    max_norm: int = 10
    degrees: Optional[List[int]] = None      # None = all available
    budget_sec: float = 3600.0
    budget_mem: int = 4 * 1024 ** 3
    out_dir: str = "out"
    cache_dir: Optional[str] = None
    levels: Optional[List[OIdeal]] = None    # overrides the norm range

    def resolve_cache_dir(self) -> str:
        if self.cache_dir:
            return self.cache_dir
        return os.environ.get(CACHE_ENV_VAR, os.path.join(self.out_dir,
                                                          "cache"))


@dataclass
class RunLedger:
    path: str
    entries: Dict[str, dict] = dc_field(default_factory=dict)
    rng_seed: int = 0

    @staticmethod
    def load(path: str) -> "RunLedger":
        if os.path.exists(path):
            with open(path) as fh:
                data = json.load(fh)
            return RunLedger(path, data.get("entries", {}),
                             data.get("rng_seed", 0))
        return RunLedger(path)

    def save(self) -> None:
        tmp = self.path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump({"version": FORMAT_VERSION, "rng_seed": self.rng_seed,
                       "entries": self.entries}, fh, indent=1, sort_keys=True)
        os.replace(tmp, self.path)

    def status(self, key: str) -> str:
        return self.entries.get(key, {}).get("status", "pending")

    def mark(self, key: str, status: str, **extra) -> None:
        self.entries[key] = {"status": status, **extra}


# -- serialization helpers ---------------------------------------------

def _frac_to_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 \
        else str(x.numerator)


def _gamma_to_json(gamma) -> list:
    return [[[_frac_to_str(c) for c in entry] for entry in row]
            for row in gamma]


def _gamma_from_json(data) -> isometry.FMat:
    return tuple(tuple(tuple(Fraction(c) for c in entry) for entry in row)
                 for row in data)


def catalog_hash(nf: NumberField) -> str:
    blob = repr((nf.label, nf.defining_polynomial, nf.r, nf.s, nf.discriminant,
                 nf.roots_of_unity_order)).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


# -- fan cache ----------------------------------------------------------

def fan_cache_path(cache_dir: str, nf: NumberField, n: int) -> str:
    return os.path.join(cache_dir, f"fan_{nf.label}_n{n}.json")


def save_fan(path: str, fan: CellComplexData) -> None:
    strata = {}
    for rank, orbs in fan.strata.items():
        strata[str(rank)] = [{
            "rays": [list(v) for v in o.cell.vectors],
            "stabilizer": [_gamma_to_json(s) for s in o.stabilizer_elements],
            "facets": [{"rays": [list(v) for v in fc.vectors],
                        "orbit": ti, "gamma": _gamma_to_json(g)}
                       for fc, ti, g in o.facets],
        } for o in orbs]
    doc = {"version": FORMAT_VERSION, "field": fan.field.label, "n": fan.n,
           "catalog_hash": catalog_hash(fan.field), "strata": strata}
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(doc, fh, sort_keys=True)
    os.replace(tmp, path)


def _fan_from_doc(doc: dict, nf: NumberField, n: int) -> CellComplexData:
    strata: Dict[int, List[CellOrbit]] = {}
    for rank_s, orbs in doc["strata"].items():
        rank = int(rank_s)
        lst = []
        for i, o in enumerate(orbs):
            cell = KoecherCell(nf, n,
                               tuple(tuple(v) for v in o["rays"]))
            orb = CellOrbit(i, rank, cell)
            orb.stabilizer_elements = [_gamma_from_json(s)
                                       for s in o["stabilizer"]]
            orb.facets = [
                (KoecherCell(nf, n, tuple(tuple(v) for v in f["rays"])),
                 f["orbit"], _gamma_from_json(f["gamma"]))
                for f in o["facets"]]
            lst.append(orb)
        strata[rank] = lst
    return CellComplexData(nf, n, strata)


def load_or_build_fan(cache_dir: str, nf: NumberField, n: int,
                      warn=print) -> Tuple[CellComplexData, str]:
    """Returns (fan, content hash of the cache file)."""
    path = fan_cache_path(cache_dir, nf, n)
    if os.path.exists(path):
        try:
            with open(path) as fh:
                doc = json.load(fh)
            if (doc.get("version") == FORMAT_VERSION
                    and doc.get("catalog_hash") == catalog_hash(nf)
                    and doc.get("field") == nf.label
                    and doc.get("n") == n):
                return _fan_from_doc(doc, nf, n), _file_hash(path)
            warn(f"fan cache {path} is stale; rebuilding")
        except (json.JSONDecodeError, KeyError, TypeError,
                AttributeError) as exc:
            warn(f"fan cache {path} is corrupt ({exc}); rebuilding")
    fan = cells.cell_complex(nf, n)
    save_fan(path, fan)
    return fan, _file_hash(path)


def _file_hash(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()[:16]


# -- complex cache ------------------------------------------------------

def complex_cache_path(cache_dir: str, nf: NumberField, n: int,
                       level: OIdeal) -> str:
    tag = level.hnf_string().replace(",", "_").replace(";", "-")
    return os.path.join(cache_dir, f"cx_{nf.label}_n{n}_{tag}.json")


def save_complex(path: str, cx: chain.VoronoiComplex,
                 fan_hash: str) -> None:
    gens = {str(k): [{"orbit": g.orbit_index,
                      "coset": [list(e) for e in g.coset]}
                     for g in lst]
            for k, lst in cx.generators.items()}
    bounds = {}
    for k, d in cx.boundaries.items():
        bounds[str(k)] = {"rows": d.rows, "cols": d.cols,
                          "triples": [[i, j, str(v)]
                                      for i, j, v in d.entries()]}
    doc = {"version": FORMAT_VERSION, "field": cx.field.label, "n": cx.n,
           "level_hnf": cx.level_hnf, "fan_hash": fan_hash,
           "generators": gens, "boundaries": bounds}
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(doc, fh, sort_keys=True)
    os.replace(tmp, path)


def load_or_build_complex(cache_dir: str, fan: CellComplexData,
                          fan_hash: str, level: OIdeal,
                          warn=print) -> chain.VoronoiComplex:
    nf, n = fan.field, fan.n
    path = complex_cache_path(cache_dir, nf, n, level)
    if os.path.exists(path):
        try:
            with open(path) as fh:
                doc = json.load(fh)
            if (doc.get("version") == FORMAT_VERSION
                    and doc.get("fan_hash") == fan_hash
                    and doc.get("level_hnf") == level.hnf_string()):
                gens = {int(k): [chain.Generator(
                            g["orbit"],
                            tuple(tuple(e) for e in g["coset"]))
                        for g in lst]
                        for k, lst in doc["generators"].items()}
                bounds = {}
                for k, b in doc["boundaries"].items():
                    m = SparseIntMatrix(b["rows"], b["cols"])
                    for i, j, v in b["triples"]:
                        m[i, j] = int(v)
                    bounds[int(k)] = m
                return chain.VoronoiComplex(nf, n, level.hnf_string(),
                                            gens, bounds)
            warn(f"complex cache {path} is stale; rebuilding")
        except (json.JSONDecodeError, KeyError, TypeError,
                AttributeError) as exc:
            warn(f"complex cache {path} is corrupt ({exc}); rebuilding")
    cs = cosets.gamma0_cosets(nf, n, level)
    cx = chain.assemble_complex(fan, cs)
    save_complex(path, cx, fan_hash)
    return cx


# -- run command --------------------------------------------------------

def _estimate_bytes(fan: CellComplexData, index: int) -> int:
    """Coarse admission estimate: generator and boundary storage."""
    orbits = sum(len(o) for o in fan.strata.values())
    slots = sum(len(orb.facets) for orbs in fan.strata.values()
                for orb in orbs)
    return 256 * index * orbits + 128 * index * max(slots, 1) + (1 << 20)


def run_output_paths(spec: JobSpec) -> Tuple[str, str]:
    base = os.path.join(spec.out_dir, spec.group_label)
    return base + ".csv", base + ".ledger.json"


def cmd_run(spec: JobSpec, log=print) -> RunLedger:
    group = groups.group_from_label(spec.group_label)
    nf, n = group.field, group.n
    os.makedirs(spec.out_dir, exist_ok=True)
    cache_dir = spec.resolve_cache_dir()
    csv_path, ledger_path = run_output_paths(spec)
    ledger = RunLedger.load(ledger_path)

    fan, fan_hash = load_or_build_fan(cache_dir, nf, n, warn=log)
    all_degrees = sorted(r - 1 for r in fan.strata)
    degrees = spec.degrees if spec.degrees is not None else all_degrees
    bad = [k for k in degrees if k not in all_degrees]
    if bad:
        raise ValueError(f"degrees {bad} outside the fan's range "
                         f"{all_degrees}")

    if spec.levels is not None:
        levels = sorted(spec.levels, key=lambda l: (l.norm, l.basis))
    else:
        levels = enumerate_levels(nf, spec.min_norm, spec.max_norm)

    if not os.path.exists(csv_path):
        with open(csv_path, "w", newline="") as fh:
            fh.write(",".join(reports.CSV_COLUMNS) + "\n")

    started = time.monotonic()
    for level in levels:
        key = f"{level.hnf_string()}"
        if ledger.status(key) == "done":
            continue
        elapsed = time.monotonic() - started
        if elapsed > spec.budget_sec:
            ledger.mark(key, "skipped-budget", reason="wall-clock")
            ledger.save()
            continue
        est = _estimate_bytes(fan, _index_estimate(nf, n, level))
        if est > spec.budget_mem:
            ledger.mark(key, "skipped-budget", reason="memory",
                        estimated_bytes=est)
            ledger.save()
            continue
        t0 = time.monotonic()
        try:
            cx = load_or_build_complex(cache_dir, fan, fan_hash, level,
                                       warn=log)
            rows = []
            for k in degrees:
                betti, tors = chain.voronoi_homology(cx, k)
                factors, residuals = snf.factor_torsion(tors)
                index = _complex_index(cx)
                rep = reports.classify_primes(group, level, index, k,
                                              betti, factors, residuals)
                rows.append(reports.report_to_row(rep))
        except snf.ResourceError as exc:
            ledger.mark(key, "skipped-budget", reason=str(exc))
            ledger.save()
            continue
        except Exception as exc:  # a crashed level must not stop the sweep
            log(f"level {key} failed: {type(exc).__name__}: {exc}")
            ledger.mark(key, "failed", error=f"{type(exc).__name__}: {exc}")
            ledger.save()
            continue
        _append_rows_atomic(csv_path, rows)
        ledger.mark(key, "done", seconds=round(time.monotonic() - t0, 3),
                    cache_hash=_file_hash(
                        complex_cache_path(cache_dir, nf, n, level)))
        ledger.save()
        log(f"level {key} done in {time.monotonic() - t0:.1f}s")
    ledger.save()
    return ledger


def _index_estimate(nf: NumberField, n: int, level: OIdeal) -> int:
    """|P^{n-1}(O/level)| = Norm^(n-1) * prod over primes (1 + ... )."""
    from .ideals import ideal_factor
    est = 1
    for q, e in ideal_factor(level):
        nq = q.norm
        est *= nq ** ((n - 1) * (e - 1))
        est *= (nq ** n - 1) // (nq - 1)
    return max(est, 1)


def _complex_index(cx: chain.VoronoiComplex) -> int:
    """The coset count, recovered from the cached complex's top stratum is
    not stored; recompute from the level."""
    nf = cx.field
    level = ideal_from_hnf_string(nf, cx.level_hnf)
    return cosets.gamma0_cosets(nf, cx.n, level).index


def _append_rows_atomic(csv_path: str, rows: List[List[str]]) -> None:
    """Append all rows of one level through a copy-and-rename."""
    import csv as _csv
    tmp = csv_path + ".tmp"
    with open(csv_path, newline="") as src, open(tmp, "w",
                                                 newline="") as dst:
        dst.write(src.read())
        w = _csv.writer(dst)
        for row in rows:
            w.writerow(row)
    os.replace(tmp, csv_path)


# -- constants and plotdata commands ------------------------------------

def cmd_constants(label: str, log=print) -> Dict[str, object]:
    g = groups.group_from_label(label)
    out: Dict[str, object] = {
        "group": g.label,
        "deficiency": groups.deficiency(g),
        "sym_dim": groups.symmetric_space_dim(g),
        "torsion_primes": list(groups.small_prime_set(g)),
        "top_voronoi_degree": groups.top_voronoi_degree(g),
    }
    try:
        out["cuspidal_top_voronoi_degree"] = groups.cuspidal_top_degree(g)
    except KeyError:
        pass
    if groups.deficiency(g) == 1:
        out["bv_limit"] = float(groups.bv_limit(g))
    else:
        out["bv_limit"] = 0.0
        out["note"] = "conjecturally zero"
    for k, v in out.items():
        log(f"{k}={v}")
    return out


def cmd_plotdata(csv_path: str, out_path: str, degree: int,
                 order: str = "index", filter_spec: str = "all",
                 mode: str = "ratio") -> dict:
    recs = reports.read_csv(csv_path)
    if not recs:
        raise ValueError(f"no rows in {csv_path}")
    labels = {r.group.label for r in recs}
    if len(labels) != 1:
        raise ValueError(f"CSV mixes groups: {sorted(labels)}")
    kept = reports.filter_series(recs, filter_spec)
    tower_id = filter_spec[len("tower:"):] \
        if filter_spec.startswith("tower:") else None
    if mode == "ratio":
        picked = [r for r in kept if r.degree == degree]
        series = reports.ratio_series(picked, degree, order)
        prime_of = {}
        for r in picked:
            x = float(r.index if order == "index" else r.level_norm)
            prime_of[x] = r.is_prime_level
        rows = [{"x": x, "y": y, "is_prime": bool(prime_of.get(x, False)),
                 "tower": tower_id} for x, y in series.points]
    elif mode == "euler":
        series = reports.euler_characteristic_series(kept, degree, order)
        prime_of = {float(r.index if order == "index" else r.level_norm):
                    r.is_prime_level for r in kept}
        rows = [{"x": x, "y": y, "is_prime": bool(prime_of.get(x, False)),
                 "tower": tower_id} for x, y in series.points]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    doc = {"version": FORMAT_VERSION,
           "group": sorted(labels)[0], "degree": degree, "mode": mode,
           "order": order, "filter": filter_spec,
           "reference": series.reference,
           "reference_note": series.reference_note,
           "rows": rows}
    with open(out_path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
    return doc
