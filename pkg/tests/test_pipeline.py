import csv
import json

import numpy as np
import pytest

from qctcc.cc import CcConfig
from qctcc.pipeline import (METHODS, RunConfig, StageError, repetition_seed,
                            run_scan, run_single, run_statistics, summarize)
from qctcc.tomography import ShotBudget
from tests.oracles import quartiles_sorted

H2 = "fixtures/h2/h2_sto-3g_1.400.fcidump"
LIH = "fixtures/lih/lih_sto-3g_3.016.fcidump"


def test_hf_only_runs_no_solver():
    res = run_single(RunConfig(H2, methods=("hf",)))
    assert set(res.method_energies) == {"hf"}
    assert res.report.e_active_qc == 0.0


def test_invalid_config():
    with pytest.raises(ValueError, match="methods"):
        RunConfig(H2, methods=())
    with pytest.raises(ValueError, match="unknown methods"):
        RunConfig(H2, methods=("ccsdtq",))
    with pytest.raises(ValueError, match="solver"):
        RunConfig(H2, solver="dmrg")


def test_stage_error_record():
    with pytest.raises(StageError) as exc:
        run_single(RunConfig("fixtures/does-not-exist.fcidump"))
    rec = exc.value.to_record()
    assert rec["stage"] == "hamio"
    assert rec["error"] and rec["message"]


def test_run_single_deterministic():
    cfg = RunConfig(H2, cbt_mode="sampled",
                    budget=ShotBudget(10 ** 4, 10 ** 4, 10 ** 4, 4), seed=5,
                    methods=("hf", "casci", "tcc", "tcc_c"))
    assert run_single(cfg).to_json() == run_single(cfg).to_json()


def test_run_single_all_methods():
    cfg = RunConfig(LIH, active=(2, 2), methods=METHODS, solver="casci")
    res = run_single(cfg)
    assert set(res.method_energies) == set(METHODS) - {"vqe"}
    e = res.method_energies
    assert e["hf"] > e["casci"] > -8.0
    assert e["tcc_c"] == pytest.approx(res.report.e_corrected)
    assert e["tcc_t_c"] == pytest.approx(res.report.e_corrected
                                         + res.report.e_triples)


def test_vqe_solver_path():
    cfg = RunConfig(H2, solver="vqe", methods=("vqe", "tcc_c"))
    res = run_single(cfg)
    assert res.method_energies["tcc_c"] == pytest.approx(
        res.method_energies["vqe"], abs=1e-7)


def test_scan_csv_columns_and_failures(tmp_path):
    out = tmp_path / "scan.csv"
    cfgs = [RunConfig(H2, methods=("hf", "tcc_c")),
            RunConfig("fixtures/missing.fcidump", methods=("hf", "tcc_c"))]
    rows = run_scan(cfgs, out_path=str(out))
    assert rows[0]["error"] == ""
    assert json.loads(rows[1]["error"])["stage"] == "hamio"
    with open(out) as fh:
        table = list(csv.DictReader(fh))
    assert list(table[0]) == ["fcidump", "hf", "tcc_c", "error"]
    assert len(table) == 2


def test_summarize_matches_sort_oracle():
    rng = np.random.default_rng(31)
    for _ in range(20):
        vals = rng.standard_normal(rng.integers(5, 60))
        s = summarize(vals, ShotBudget())
        q1, med, q3 = quartiles_sorted(vals)
        assert s.q1 == pytest.approx(q1, abs=1e-12)
        assert s.median == pytest.approx(med, abs=1e-12)
        assert s.q3 == pytest.approx(q3, abs=1e-12)
        assert s.q1 <= s.median <= s.q3
        assert s.whisker_lo >= vals.min() and s.whisker_hi <= vals.max()
        for out_v in s.outliers:
            assert out_v < s.q1 - 1.5 * s.iqr or out_v > s.q3 + 1.5 * s.iqr


def test_repetition_seeds_stable_and_distinct():
    seeds = [repetition_seed(7, i) for i in range(100)]
    assert len(set(seeds)) == 100
    assert seeds == [repetition_seed(7, i) for i in range(100)]


def test_statistics_exact_mode_zero_variance():
    cfg = RunConfig(H2, cbt_mode="exact", methods=("tcc_c",))
    (s,) = run_statistics(cfg, [ShotBudget(r=4)], repetitions=3)
    assert s.iqr == 0.0 and s.std == 0.0 and s.failures == 0


def test_statistics_iqr_shrinks_with_budget(tmp_path):
    cfg = RunConfig(H2, cbt_mode="sampled", methods=("tcc_c",), seed=1)
    budgets = [ShotBudget(10 ** 4, 10 ** 4, 10 ** 4, 4),
               ShotBudget(10 ** 6, 10 ** 6, 10 ** 6, 4)]
    out = tmp_path / "stats"
    sums = run_statistics(cfg, budgets, repetitions=25, out_prefix=str(out))
    assert sums[0].iqr > sums[1].iqr
    assert (tmp_path / "stats_raw.csv").exists()
    doc = json.loads((tmp_path / "stats_summary.json").read_text())
    assert len(doc) == 2 and doc[0]["n"] == 25
