"""Simulated computational-basis tomography of a determinant-basis state.

Measurement statistics are drawn directly from the statevector (no gate-level
circuit synthesis): weights are multinomial counts over |amps|^2, interference
outcomes are Bernoulli draws with the exact success probabilities of the two
superposition measurements.  All randomness is seed-deterministic, with
per-determinant-pair derived streams so estimates are order-independent.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .determinants import Determinant, WaveState
from .exceptions import DegenerateProjectionError, DegenerateReferenceError

WEIGHT_FLOOR = 1e-12


@dataclass(frozen=True)
class ShotBudget:
    n_sample: int = 10 ** 6
    n_u: int = 10 ** 6
    n_v: int = 10 ** 6
    r: int = 100

    def __post_init__(self):
        if min(self.n_sample, self.n_u, self.n_v, self.r) < 1:
            raise ValueError("all shot counts and the truncation rank must be >= 1")


@dataclass(frozen=True)
class CbtEstimate:
    """Ranked determinant coefficients; first entry is the phase reference."""
    entries: tuple[tuple[Determinant, complex], ...]
    budget: ShotBudget
    reference: Determinant
    mode: str  # "sampled" | "exact"

    def __post_init__(self):
        if self.entries and self.entries[0][0] != self.reference:
            raise ValueError("reference must be the leading entry")

    @property
    def determinants(self) -> tuple[Determinant, ...]:
        return tuple(d for d, _ in self.entries)

    def coefficient(self, det: Determinant) -> complex:
        for d, c in self.entries:
            if d == det:
                return c
        return 0.0 + 0.0j

    def norm2(self) -> float:
        return float(sum(abs(c) ** 2 for _, c in self.entries))

    def to_json(self) -> str:
        doc = {
            "mode": self.mode,
            "reference": [self.reference.alpha, self.reference.beta],
            "budget": {"n_sample": self.budget.n_sample, "n_u": self.budget.n_u,
                       "n_v": self.budget.n_v, "r": self.budget.r},
            "entries": [[d.alpha, d.beta, c.real, c.imag] for d, c in self.entries],
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CbtEstimate":
        doc = json.loads(text)
        entries = tuple((Determinant(a, b), complex(re, im))
                        for a, b, re, im in doc["entries"])
        return cls(entries, ShotBudget(**doc["budget"]),
                   Determinant(*doc["reference"]), doc["mode"])


def _rng(seed, *stream) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**63 - 1),
                                                         *[int(s) for s in stream]]))


def sample_weights(state: WaveState, n_sample: int, seed: int) -> dict[Determinant, int]:
    """Multinomial counts of n_sample projective measurements over |amps|^2."""
    if n_sample < 1:
        raise ValueError("n_sample must be >= 1")
    p = np.abs(np.asarray(state.amps)) ** 2
    p = p / p.sum()
    counts = _rng(seed, 0).multinomial(n_sample, p)
    return {d: int(c) for d, c in zip(state.basis, counts) if c > 0}


def select_top_r(counts: dict[Determinant, int], r: int) -> list[Determinant]:
    """The r most frequent determinants; ties by ascending (alpha, beta)."""
    if not counts:
        raise ValueError("empty counts")
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [d for d, _ in ranked[:r]]


def _interference_probs(c1: complex, cj: complex) -> tuple[float, float]:
    """Success probabilities of the plus- and phase-i-superposition measurements."""
    p_u = abs((c1 + cj) / np.sqrt(2.0)) ** 2
    p_v = abs((c1 + 1j * cj) / np.sqrt(2.0)) ** 2
    return float(p_u), float(p_v)


def _combine(p_u: float, p_v: float, w1: float, wj: float) -> complex:
    return p_u + 1j * p_v - (1.0 + 1j) / 2.0 * (w1 + wj)


def interference_factor(state: WaveState, k1: Determinant, kj: Determinant,
                        n_u: int, n_v: int, seed: int, *,
                        weights: tuple[float, float] | None = None,
                        exact: bool = False) -> complex:
    """Estimate <k1|Psi><Psi|kj> from the two superposition measurements.

    `weights` supplies externally estimated (|c1|^2, |cj|^2); when omitted they
    are estimated from dedicated n_u-shot samples (exact mode uses true values).
    """
    if k1 == kj:
        raise ValueError("k1 and kj must differ")
    c1 = state.coefficient(k1)
    cj = state.coefficient(kj)
    p_u, p_v = _interference_probs(c1, cj)
    w1_t, wj_t = abs(c1) ** 2, abs(cj) ** 2
    if exact:
        return _combine(p_u, p_v, w1_t, wj_t)
    rng = _rng(seed, 1, k1.alpha, k1.beta, kj.alpha, kj.beta)
    pu_est = rng.binomial(n_u, min(p_u, 1.0)) / n_u
    pv_est = rng.binomial(n_v, min(p_v, 1.0)) / n_v
    if weights is None:
        w1 = rng.binomial(n_u, min(w1_t, 1.0)) / n_u
        wj = rng.binomial(n_u, min(wj_t, 1.0)) / n_u
    else:
        w1, wj = weights
    return _combine(pu_est, pv_est, w1, wj)


def reconstruct(state: WaveState, budget: ShotBudget, seed: int = 0,
                mode: str = "sampled") -> CbtEstimate:
    """Top-R coefficient estimate with the reference phase fixed to zero."""
    if mode == "exact":
        order = sorted(range(len(state.basis)),
                       key=lambda k: (-abs(state.amps[k]) ** 2, state.basis[k]))
        order = [k for k in order if abs(state.amps[k]) ** 2 > WEIGHT_FLOOR]
        order = order[: budget.r]
        k1 = state.basis[order[0]]
        c1 = state.amps[order[0]]
        if abs(c1) ** 2 < WEIGHT_FLOOR:
            raise DegenerateReferenceError("reference weight below floor")
        phase = np.conj(c1) / abs(c1)  # gauge: reference phase -> 0
        entries = tuple((state.basis[k], complex(state.amps[k] * phase))
                        for k in order)
        return CbtEstimate(entries, budget, k1, "exact")

    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    counts = sample_weights(state, budget.n_sample, seed)
    top = select_top_r(counts, budget.r)
    k1 = top[0]
    w = {d: counts[d] / budget.n_sample for d in top}
    if w[k1] < WEIGHT_FLOOR:
        raise DegenerateReferenceError("reference weight estimate below floor")
    entries = [(k1, complex(np.sqrt(w[k1])))]
    for kj in top[1:]:
        factor = interference_factor(state, k1, kj, budget.n_u, budget.n_v,
                                     seed, weights=(w[k1], w[kj]))
        # factor ~ c1*conj(cj); with the c1 phase gauged to zero the phase of
        # cj is minus the factor's argument
        mag = np.sqrt(w[kj])
        entries.append((kj, complex(mag * np.exp(-1j * np.angle(factor)))))
    return CbtEstimate(tuple(entries), budget, k1, "sampled")


def finalize_real(est: CbtEstimate) -> CbtEstimate:
    """Real projection and renormalization; drops zero entries, re-sorts."""
    if not est.entries:
        raise ValueError("empty estimate")
    real = [(d, float(c.real)) for d, c in est.entries]
    norm2 = sum(v * v for _, v in real)
    if norm2 <= 0.0:
        raise DegenerateProjectionError("all real parts vanish")
    scale = 1.0 / np.sqrt(norm2)
    kept = [(d, v * scale) for d, v in real if v != 0.0]
    kept.sort(key=lambda dv: (-abs(dv[1]), dv[0]))
    # keep the reference first even under re-sorting ties
    ref = est.reference
    if kept[0][0] != ref:
        # reference may have lost the top slot to noise; the estimate is still
        # anchored at the original reference for phase bookkeeping
        kept.sort(key=lambda dv: (dv[0] != ref, -abs(dv[1]), dv[0]))
    entries = tuple((d, complex(v)) for d, v in kept)
    return CbtEstimate(entries, est.budget, ref, est.mode)
