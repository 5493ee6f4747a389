"""End-to-end orchestration: single runs, geometry scans, shot statistics.

A run executes the stages in order (integral input, active-space solve,
tomographic readout, amplitude tailoring, coupled cluster) and reports the
energies of every requested method.  Scans and the statistics harness are
thin loops over run_single with per-item seeds; expensive solver states are
cached so repeated tomography of the same state costs only the sampling.
"""
from __future__ import annotations

import csv
import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .cc import (CcConfig, EnergyReport, active_projected_energy, ccsd_solve,
                 corrected_energy, empty_amplitudes, projected_energy,
                 triples_correction)
from .determinants import WaveState
from .exceptions import QctccError
from .hamio import (build_active_hamiltonian, full_space, read_fcidump,
                    reference_state, select_active_space)
from .solver import (VqeConfig, active_energy, casci_ground_state,
                     reference_determinant, uccsd_vqe)
from .tailor import ci_to_cc, embed_amplitudes
from .tomography import ShotBudget, finalize_real, reconstruct

log = logging.getLogger(__name__)

METHODS = ("hf", "casci", "vqe", "ccsd", "ccsd_t", "tcc", "tcc_c", "tcc_t_c")


class StageError(QctccError):
    """A pipeline stage failed; carries the stage tag and the original error."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause

    def to_record(self) -> dict:
        return {"stage": self.stage, "error": type(self.cause).__name__,
                "message": str(self.cause)}


@dataclass(frozen=True)
class RunConfig:
    fcidump: str
    active: tuple[int, int] | None = None  # (n_orb, n_elec); None = full space
    solver: str = "casci"                  # "casci" | "vqe"
    cbt_mode: str = "exact"                # "exact" | "sampled"
    budget: ShotBudget = field(default_factory=ShotBudget)
    methods: tuple[str, ...] = ("tcc_c",)
    seed: int = 0
    repetitions: int = 1
    cc: CcConfig = field(default_factory=CcConfig)
    vqe: VqeConfig = field(default_factory=VqeConfig)

    def __post_init__(self):
        if not self.methods:
            raise ValueError("methods must be nonempty")
        bad = set(self.methods) - set(METHODS)
        if bad:
            raise ValueError(f"unknown methods: {sorted(bad)}")
        if self.solver not in ("casci", "vqe"):
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")


@dataclass(frozen=True)
class RunResult:
    report: EnergyReport
    method_energies: dict[str, float]

    def to_json(self) -> str:
        return json.dumps({"report": json.loads(self.report.to_json()),
                           "method_energies": self.method_energies},
                          sort_keys=True)


# active-space solves are deterministic in these keys; cached so statistics
# repetitions pay only for the tomography sampling
_solver_cache: dict[tuple, tuple] = {}
_solver_lock = threading.Lock()


def _solve_active(cfg: RunConfig):
    key = (cfg.fcidump, cfg.active, cfg.solver, cfg.vqe)
    with _solver_lock:
        hit = _solver_cache.get(key)
    if hit is not None:
        return hit
    H = read_fcidump(cfg.fcidump)
    space = (full_space(H) if cfg.active is None
             else select_active_space(H, *cfg.active))
    Ha = build_active_hamiltonian(H, space)
    if cfg.solver == "casci":
        state, e_active = casci_ground_state(Ha)
    else:
        state, e_active, _ = uccsd_vqe(Ha, cfg.vqe)
    out = (H, space, Ha, state, e_active)
    with _solver_lock:
        _solver_cache[key] = out
    return out


def run_single(cfg: RunConfig) -> RunResult:
    """One full pipeline pass; deterministic under (config, seed, budget)."""
    energies: dict[str, float] = {}
    want = set(cfg.methods)

    try:
        H = read_fcidump(cfg.fcidump)
        _, _, e_hf = reference_state(H)
    except (QctccError, OSError, ValueError) as ex:
        raise StageError("hamio", ex) from ex
    energies["hf"] = e_hf
    need_solver = want - {"hf", "ccsd", "ccsd_t"}
    need_cc_plain = want & {"ccsd", "ccsd_t"}

    e_active_qc = e_tcc = e_tcc_active = e_corrected = 0.0
    e_triples = 0.0
    discarded = 0.0
    converged = True
    iterations = 0

    if need_cc_plain:
        try:
            amps0, _, conv0, it0 = ccsd_solve(H, empty_amplitudes(H), cfg.cc)
            energies["ccsd"] = projected_energy(H, amps0)
            converged = converged and conv0
            iterations = max(iterations, it0)
            if "ccsd_t" in want:
                energies["ccsd_t"] = (energies["ccsd"]
                                      + triples_correction(H, amps0))
        except (QctccError, OSError, ValueError) as ex:
            raise StageError("cc", ex) from ex

    if need_solver:
        try:
            H, space, Ha, state, e_solver = _solve_active(cfg)
        except (QctccError, OSError, ValueError) as ex:
            raise StageError("activesolver", ex) from ex
        energies[cfg.solver] = e_solver

        try:
            est = finalize_real(reconstruct(state, cfg.budget, cfg.seed,
                                            cfg.cbt_mode))
            rec = WaveState(tuple(d for d, _ in est.entries),
                            np.array([c.real for _, c in est.entries]))
            e_active_qc = active_energy(rec, Ha)
        except (QctccError, OSError, ValueError) as ex:
            raise StageError("cbt", ex) from ex

        if want & {"tcc", "tcc_c", "tcc_t_c"}:
            try:
                ref_act = reference_determinant(Ha.n_active_orb,
                                                Ha.n_active_elec)
                t1a, t2a, info = ci_to_cc(rec, ref_act, Ha.n_active_orb)
                discarded = info["discarded_weight"]
                full_ref, _, _ = reference_state(H)
                tailored = embed_amplitudes(t1a, t2a, space, full_ref, H.norb)
            except (QctccError, OSError, ValueError) as ex:
                raise StageError("tailor", ex) from ex
            try:
                e_tcc_active = active_projected_energy(H, tailored)
                amps, _, conv, it = ccsd_solve(H, tailored, cfg.cc)
                e_tcc = projected_energy(H, amps)
                converged = converged and conv
                iterations = max(iterations, it)
                e_corrected = corrected_energy(e_active_qc, e_tcc,
                                               e_tcc_active)
                energies["tcc"] = e_tcc
                energies["tcc_c"] = e_corrected
                if "tcc_t_c" in want:
                    e_triples = triples_correction(H, amps, space)
                    energies["tcc_t_c"] = e_corrected + e_triples
            except (QctccError, OSError, ValueError) as ex:
                raise StageError("cc", ex) from ex

    report = EnergyReport(
        e_hf=e_hf, e_active_qc=e_active_qc, e_tcc=e_tcc,
        e_tcc_active=e_tcc_active, e_corrected=e_corrected,
        e_triples=e_triples, converged=converged, iterations=iterations,
        discarded_ci_weight=discarded)
    return RunResult(report, {m: energies[m] for m in cfg.methods
                              if m in energies})


def run_scan(cfgs: list[RunConfig], out_path=None) -> list[dict]:
    """One pipeline pass per config; failures are recorded, not raised."""
    rows = []
    for cfg in cfgs:
        row: dict = {"fcidump": cfg.fcidump}
        try:
            res = run_single(cfg)
            row.update(res.method_energies)
            row["error"] = ""
        except StageError as ex:
            row.update({m: "" for m in cfg.methods})
            row["error"] = json.dumps(ex.to_record())
        rows.append(row)
    if out_path is not None and cfgs:
        cols = ["fcidump", *cfgs[0].methods, "error"]
        with open(out_path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=cols, extrasaction="ignore")
            w.writeheader()
            w.writerows(rows)
    return rows


@dataclass(frozen=True)
class StatSummary:
    budget: ShotBudget
    n: int
    failures: int
    median: float
    q1: float
    q3: float
    iqr: float
    whisker_lo: float
    whisker_hi: float
    outliers: tuple[float, ...]
    mean: float
    std: float

    def to_json(self) -> str:
        doc = {k: getattr(self, k) for k in
               ("n", "failures", "median", "q1", "q3", "iqr", "whisker_lo",
                "whisker_hi", "mean", "std")}
        doc["outliers"] = list(self.outliers)
        doc["budget"] = {"n_sample": self.budget.n_sample,
                         "n_u": self.budget.n_u, "n_v": self.budget.n_v,
                         "r": self.budget.r}
        return json.dumps(doc, sort_keys=True)


def summarize(values, budget: ShotBudget, failures: int = 0) -> StatSummary:
    """Box-plot statistics: linear-interpolation quartiles, 1.5 IQR whiskers
    clipped to the observed extrema, points beyond them listed as outliers."""
    x = np.sort(np.asarray(values, dtype=float))
    if x.size < 2:
        raise ValueError("need at least two values")
    q1, med, q3 = (float(np.quantile(x, q, method="linear"))
                   for q in (0.25, 0.5, 0.75))
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = x[(x >= lo_fence) & (x <= hi_fence)]
    whisker_lo = float(inside[0]) if inside.size else q1
    whisker_hi = float(inside[-1]) if inside.size else q3
    outliers = tuple(float(v) for v in x if v < lo_fence or v > hi_fence)
    return StatSummary(budget, int(x.size), failures, med, q1, q3, iqr,
                       whisker_lo, whisker_hi, outliers,
                       float(np.mean(x)), float(np.std(x)))


def repetition_seed(master_seed: int, rep: int) -> int:
    """Counter-split child seed so any repetition is reproducible alone."""
    return int(np.random.SeedSequence([master_seed, rep]).generate_state(1)[0])


def run_statistics(cfg: RunConfig, budgets: list[ShotBudget],
                   repetitions: int | None = None, out_prefix=None,
                   max_workers: int = 4) -> list[StatSummary]:
    """Repeat the sampled pipeline per budget and box-plot e_corrected."""
    reps = cfg.repetitions if repetitions is None else repetitions
    if reps < 2:
        raise ValueError("repetitions must be >= 2")
    _solve_active(cfg)  # warm the cache before fanning out
    summaries = []
    raw_rows = []
    for budget in budgets:
        def one(rep, budget=budget):
            c = replace(cfg, budget=budget,
                        seed=repetition_seed(cfg.seed, rep))
            return run_single(c).report.e_corrected
        values, failures = [], 0
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            for rep, fut in [(r, pool.submit(one, r)) for r in range(reps)]:
                try:
                    v = fut.result()
                    values.append(v)
                    raw_rows.append((budget.n_sample, budget.n_u, budget.n_v,
                                     budget.r, rep, v))
                except StageError as ex:
                    failures += 1
                    log.warning("repetition %d failed: %s", rep, ex)
        summaries.append(summarize(values, budget, failures))
    if out_prefix is not None:
        with open(f"{out_prefix}_raw.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n_sample", "n_u", "n_v", "r", "rep", "e_corrected"])
            w.writerows(raw_rows)
        with open(f"{out_prefix}_summary.json", "w") as fh:
            fh.write(json.dumps([json.loads(s.to_json()) for s in summaries],
                                sort_keys=True))
    return summaries
