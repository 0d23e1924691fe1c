"""End-to-end run orchestration: caching, budgets, resumable ledgers,
plot-data emission."""

import hashlib
import json
import os

import pytest

from voronoi_torsion import pipeline, reports
from voronoi_torsion.fieldcat import get_field
from voronoi_torsion.ideals import enumerate_levels
from voronoi_torsion.pipeline import (CACHE_ENV_VAR, JobSpec, RunLedger,
                                      cmd_constants, cmd_plotdata, cmd_run,
                                      run_output_paths)


def _spec(tmp_path, **kw):
    base = dict(group_label="gl2-Qi", min_norm=1, max_norm=9,
                out_dir=str(tmp_path / "out"),
                cache_dir=str(tmp_path / "cache"))
    base.update(kw)
    return JobSpec(**base)


def _md5(path):
    with open(path, "rb") as fh:
        return hashlib.md5(fh.read()).hexdigest()


@pytest.fixture(scope="module")
def completed_run(tmp_path_factory):
    tmp_path = tmp_path_factory.mktemp("run")
    spec = _spec(tmp_path)
    ledger = cmd_run(spec, log=lambda *a: None)
    return tmp_path, spec, ledger


def test_run_completes_all_levels(completed_run):
    _tmp, spec, ledger = completed_run
    nf = get_field("Qi")
    levels = enumerate_levels(nf, 1, 9)
    assert len(ledger.entries) == len(levels)
    assert all(e["status"] == "done" for e in ledger.entries.values())


def test_run_emits_one_row_per_level_and_degree(completed_run):
    _tmp, spec, _ = completed_run
    csv_path, _ = run_output_paths(spec)
    recs = reports.read_csv(csv_path)
    nf = get_field("Qi")
    levels = enumerate_levels(nf, 1, 9)
    assert len(recs) == 3 * len(levels)   # degrees 1, 2, 3
    for r in recs:
        assert r.degree in (1, 2, 3)
        assert r.group.label == "gl2-Qi"


def test_run_rows_match_reclassification(completed_run):
    """Tags and log_ratio in the CSV must be re-derivable row-locally."""
    _tmp, spec, _ = completed_run
    csv_path, _ = run_output_paths(spec)
    for r in reports.read_csv(csv_path):
        again = reports.classify_primes(r.group, r.level, r.index, r.degree,
                                        r.betti, dict(r.torsion_factors),
                                        r.residuals)
        assert again == r


def test_rerun_is_idempotent(completed_run):
    tmp, spec, _ = completed_run
    csv_path, ledger_path = run_output_paths(spec)
    before_csv, before_led = _md5(csv_path), _md5(ledger_path)
    cmd_run(spec, log=lambda *a: None)
    assert _md5(csv_path) == before_csv
    assert _md5(ledger_path) == before_led


def test_known_torsion_row_present(completed_run):
    # the norm-8 level carries a 4-torsion class in degree 2
    _tmp, spec, _ = completed_run
    csv_path, _ = run_output_paths(spec)
    hits = [r for r in reports.read_csv(csv_path)
            if r.level_norm == 8 and r.degree == 2]
    assert len(hits) == 1
    assert hits[0].torsion_factors == ((2, 2),)
    assert hits[0].tag_of(2) == "torsion"


def test_memory_budget_skips_everything(tmp_path):
    spec = _spec(tmp_path, budget_mem=1)
    ledger = cmd_run(spec, log=lambda *a: None)
    assert ledger.entries
    assert all(e["status"] == "skipped-budget"
               and e["reason"] == "memory"
               for e in ledger.entries.values())
    csv_path, _ = run_output_paths(spec)
    recs = reports.read_csv(csv_path)
    assert recs == []


def test_wallclock_budget_skips_everything(tmp_path):
    spec = _spec(tmp_path, budget_sec=-1.0)
    ledger = cmd_run(spec, log=lambda *a: None)
    assert all(e["status"] == "skipped-budget"
               and e["reason"] == "wall-clock"
               for e in ledger.entries.values())


def test_skipped_levels_retried_after_budget_raise(tmp_path):
    spec = _spec(tmp_path, max_norm=4, budget_mem=1)
    cmd_run(spec, log=lambda *a: None)
    spec2 = _spec(tmp_path, max_norm=4)
    ledger = cmd_run(spec2, log=lambda *a: None)
    assert all(e["status"] == "done" for e in ledger.entries.values())


def test_corrupt_fan_cache_rebuilds_with_warning(tmp_path):
    spec = _spec(tmp_path, max_norm=2)
    cmd_run(spec, log=lambda *a: None)
    fan_path = pipeline.fan_cache_path(spec.cache_dir, get_field("Qi"), 2)
    with open(fan_path, "w") as fh:
        fh.write("{ not json")
    warnings = []
    fan, _ = pipeline.load_or_build_fan(spec.cache_dir, get_field("Qi"), 2,
                                        warn=warnings.append)
    assert any("corrupt" in w for w in warnings)
    assert fan.strata  # rebuilt
    # the rewritten cache is clean again
    warnings.clear()
    pipeline.load_or_build_fan(spec.cache_dir, get_field("Qi"), 2,
                               warn=warnings.append)
    assert warnings == []


def test_stale_fan_cache_rebuilds_with_warning(tmp_path):
    spec = _spec(tmp_path, max_norm=2)
    cmd_run(spec, log=lambda *a: None)
    fan_path = pipeline.fan_cache_path(spec.cache_dir, get_field("Qi"), 2)
    with open(fan_path) as fh:
        doc = json.load(fh)
    doc["catalog_hash"] = "0" * 16
    with open(fan_path, "w") as fh:
        json.dump(doc, fh)
    warnings = []
    pipeline.load_or_build_fan(spec.cache_dir, get_field("Qi"), 2,
                               warn=warnings.append)
    assert any("stale" in w for w in warnings)


def test_corrupt_complex_cache_rebuilds(tmp_path):
    spec = _spec(tmp_path, max_norm=2)
    cmd_run(spec, log=lambda *a: None)
    nf = get_field("Qi")
    fan, fan_hash = pipeline.load_or_build_fan(spec.cache_dir, nf, 2,
                                               warn=lambda *a: None)
    (level,) = enumerate_levels(nf, 2, 2)
    cx_path = pipeline.complex_cache_path(spec.cache_dir, nf, 2, level)
    with open(cx_path, "w") as fh:
        fh.write("[]")
    warnings = []
    cx = pipeline.load_or_build_complex(spec.cache_dir, fan, fan_hash,
                                        level, warn=warnings.append)
    assert any("corrupt" in w for w in warnings)
    assert cx.generators


def test_cache_dir_resolution(monkeypatch, tmp_path):
    spec = JobSpec("gl2-Qi", out_dir=str(tmp_path))
    monkeypatch.delenv(CACHE_ENV_VAR, raising=False)
    assert spec.resolve_cache_dir() == os.path.join(str(tmp_path), "cache")
    monkeypatch.setenv(CACHE_ENV_VAR, "/elsewhere")
    assert spec.resolve_cache_dir() == "/elsewhere"
    spec2 = JobSpec("gl2-Qi", cache_dir="/explicit")
    assert spec2.resolve_cache_dir() == "/explicit"


def test_degrees_out_of_range_rejected(tmp_path):
    spec = _spec(tmp_path, degrees=[7])
    with pytest.raises(ValueError, match="outside"):
        cmd_run(spec, log=lambda *a: None)


def test_constants_command_output():
    out = cmd_constants("gl2-Qi", log=lambda *a: None)
    assert out["deficiency"] == 1
    assert out["sym_dim"] == 3
    assert out["torsion_primes"] == [2, 3]
    assert out["bv_limit"] == pytest.approx(0.00809891400085608, abs=1e-12)
    out5 = cmd_constants("gl5-Q", log=lambda *a: None)
    assert out5["bv_limit"] == 0.0
    assert out5["note"] == "conjecturally zero"


def test_plotdata_ratio_mode(completed_run):
    tmp, spec, _ = completed_run
    csv_path, _ = run_output_paths(spec)
    out = str(tmp / "plot.json")
    doc = cmd_plotdata(csv_path, out, degree=1, order="norm",
                       filter_spec="all", mode="ratio")
    with open(out) as fh:
        assert json.load(fh) == doc
    assert doc["group"] == "gl2-Qi"
    assert doc["mode"] == "ratio" and doc["order"] == "norm"
    assert doc["reference"] == pytest.approx(0.00809891400085608, abs=1e-12)
    xs = [row["x"] for row in doc["rows"]]
    assert xs == sorted(xs)
    assert all(set(row) == {"x", "y", "is_prime", "tower"}
               for row in doc["rows"])


def test_plotdata_prime_filter(completed_run):
    tmp, spec, _ = completed_run
    csv_path, _ = run_output_paths(spec)
    out = str(tmp / "plot_prime.json")
    doc = cmd_plotdata(csv_path, out, degree=1, order="norm",
                       filter_spec="prime", mode="ratio")
    assert doc["rows"]
    assert all(row["is_prime"] for row in doc["rows"])


def test_plotdata_tower_filter(completed_run):
    tmp, spec, _ = completed_run
    csv_path, _ = run_output_paths(spec)
    out = str(tmp / "plot_tower.json")
    # (1+i) has hnf 1,1;0,2; its divisibility chain runs through norms 2,4,8
    doc = cmd_plotdata(csv_path, out, degree=2, order="norm",
                       filter_spec="tower:1,1;0,2", mode="ratio")
    assert [row["x"] for row in doc["rows"]] == [2.0, 4.0, 8.0]
    assert all(row["tower"] == "1,1;0,2" for row in doc["rows"])


def test_plotdata_euler_mode(completed_run):
    tmp, spec, _ = completed_run
    csv_path, _ = run_output_paths(spec)
    out = str(tmp / "plot_euler.json")
    doc = cmd_plotdata(csv_path, out, degree=1, order="norm",
                       filter_spec="all", mode="euler")
    recs = reports.read_csv(csv_path)
    by_norm = {}
    for r in recs:
        if r.level.hnf_string() not in by_norm:
            by_norm[r.level.hnf_string()] = 0.0
    # one euler point per level
    assert len(doc["rows"]) == len(by_norm)


def test_plotdata_rejects_unknown_mode(completed_run, tmp_path):
    _tmp, spec, _ = completed_run
    csv_path, _ = run_output_paths(spec)
    with pytest.raises(ValueError):
        cmd_plotdata(csv_path, str(tmp_path / "x.json"), degree=1,
                     mode="spiral")


def test_plotdata_rejects_empty_csv(tmp_path):
    path = tmp_path / "empty.csv"
    reports.write_csv(path, [])
    with pytest.raises(ValueError, match="no rows"):
        cmd_plotdata(str(path), str(tmp_path / "x.json"), degree=1)


def test_ledger_roundtrip(tmp_path):
    path = str(tmp_path / "led.json")
    led = RunLedger(path)
    led.rng_seed = 42
    led.mark("1,0;0,1", "done", seconds=0.5)
    led.save()
    back = RunLedger.load(path)
    assert back.rng_seed == 42
    assert back.status("1,0;0,1") == "done"
    assert back.status("unseen") == "pending"
