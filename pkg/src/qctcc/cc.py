"""Spin-orbital CCSD with frozen-amplitude tailoring and perturbative triples.

The amplitude equations are the standard spin-orbital working equations with
one-particle intermediates; frozen entries of the amplitude tensors are reset
to their input values after every update, so the solver optimizes only the
unfrozen remainder.  The projected energy is the usual correlation functional
    e_corr = sum f_ov t1 + 1/4 <ij||ab> t2 + 1/2 <ij||ab> t1 t1
and the corrected energy replaces the tailored part of the correlation with
the solver energy it came from:
    e_corrected = e_active_qc + (e_tcc - e_tcc_active).
"""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass

import numpy as np

from .determinants import to_spinmask
from .exceptions import AmplitudeContractError, CcDivergenceError
from .hamio import ActiveSpace, MolecularHamiltonian, reference_state
from .tailor import Amplitudes

log = logging.getLogger(__name__)

DIVERGENCE_RMS = 1e3


@dataclass(frozen=True)
class CcConfig:
    max_iterations: int = 200
    energy_tol: float = 1e-8
    amp_rms_tol: float = 1e-7
    diis_depth: int = 8
    level_shift: float = 0.0
    trace_path: str | None = None  # CSV of (iteration, energy, amp rms)

    def __post_init__(self):
        if self.energy_tol <= 0 or self.amp_rms_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.diis_depth < 0:
            raise ValueError("diis_depth must be >= 0")


@dataclass(frozen=True)
class EnergyReport:
    e_hf: float
    e_active_qc: float
    e_tcc: float
    e_tcc_active: float
    e_corrected: float
    e_triples: float
    converged: bool
    iterations: int
    discarded_ci_weight: float

    def to_json(self) -> str:
        return json.dumps({
            "e_hf": self.e_hf, "e_active_qc": self.e_active_qc,
            "e_tcc": self.e_tcc, "e_tcc_active": self.e_tcc_active,
            "e_corrected": self.e_corrected, "e_triples": self.e_triples,
            "converged": self.converged, "iterations": self.iterations,
            "discarded_ci_weight": self.discarded_ci_weight,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "EnergyReport":
        return cls(**json.loads(text))


@dataclass(frozen=True)
class SpinOrbitalBasis:
    """Fock matrix and antisymmetrized integrals in occ-then-virt order."""
    fock: np.ndarray    # (nso, nso)
    g: np.ndarray       # <pq||rs>, (nso,)*4
    n_occ: int
    e_hf: float

    @property
    def n_virt(self) -> int:
        return self.fock.shape[0] - self.n_occ


def spin_orbital_basis(H: MolecularHamiltonian) -> SpinOrbitalBasis:
    ref, _, e_hf = reference_state(H)
    refm = to_spinmask(ref)
    nso = 2 * H.norb
    occ = [s for s in range(nso) if refm >> s & 1]
    vir = [s for s in range(nso) if not refm >> s & 1]
    order = np.asarray(occ + vir)
    spat = order // 2
    same = (order[:, None] % 2) == (order[None, :] % 2)

    h = H.h1[np.ix_(spat, spat)] * same
    # chemists (PQ|RS) with spin deltas, then physicists <PQ|RS> = (PR|QS)
    g_chem = (H.eri[np.ix_(spat, spat, spat, spat)]
              * same[:, :, None, None] * same[None, None, :, :])
    g_phys = g_chem.transpose(0, 2, 1, 3)
    g = g_phys - g_phys.transpose(0, 1, 3, 2)

    no = len(occ)
    fock = h + np.einsum('piqi->pq', g[:, :no, :, :no])
    return SpinOrbitalBasis(fock, g, no, e_hf)


def correlation_energy(basis: SpinOrbitalBasis, t1: np.ndarray, t2: np.ndarray) -> float:
    no = basis.n_occ
    o, v = slice(None, no), slice(no, None)
    e = np.einsum('ia,ia->', basis.fock[o, v], t1)
    e += 0.25 * np.einsum('ijab,ijab->', basis.g[o, o, v, v], t2)
    e += 0.5 * np.einsum('ijab,ia,jb->', basis.g[o, o, v, v], t1, t1)
    return float(e)


def projected_energy(H: MolecularHamiltonian, amps: Amplitudes) -> float:
    basis = spin_orbital_basis(H)
    return basis.e_hf + correlation_energy(basis, amps.t1, amps.t2)


def active_projected_energy(H: MolecularHamiltonian, tailored: Amplitudes) -> float:
    """Projected energy before any unfrozen amplitudes have been built."""
    if (np.any(tailored.t1[~tailored.frozen1]) or
            np.any(tailored.t2[~tailored.frozen2])):
        raise AmplitudeContractError(
            "tailored amplitudes carry nonzero entries outside the frozen block")
    return projected_energy(H, tailored)


def corrected_energy(e_active_qc: float, e_tcc: float, e_tcc_active: float) -> float:
    return e_active_qc + (e_tcc - e_tcc_active)


class _Diis:
    def __init__(self, depth):
        self.depth = depth
        self.amps: list[np.ndarray] = []
        self.errs: list[np.ndarray] = []

    def extrapolate(self, amp: np.ndarray, err: np.ndarray) -> np.ndarray:
        if self.depth == 0:
            return amp
        self.amps.append(amp)
        self.errs.append(err)
        if len(self.amps) > self.depth:
            self.amps.pop(0)
            self.errs.pop(0)
        while len(self.amps) >= 2:
            n = len(self.amps)
            B = -np.ones((n + 1, n + 1))
            B[-1, -1] = 0.0
            for i in range(n):
                for j in range(i, n):
                    B[i, j] = B[j, i] = self.errs[i] @ self.errs[j]
            rhs = np.zeros(n + 1)
            rhs[-1] = -1.0
            if np.linalg.cond(B) < 1e12:
                c = np.linalg.solve(B, rhs)[:n]
                return sum(ci * ai for ci, ai in zip(c, self.amps))
            # ill-conditioned subspace: drop the oldest vector and retry
            self.amps.pop(0)
            self.errs.pop(0)
        return amp


def _tau(t1, t2, scale):
    x = np.einsum('ia,jb->ijab', t1, t1)
    return t2 + scale * (x - x.transpose(0, 1, 3, 2))


def _residuals(f, g, no, t1, t2):
    """Right-hand sides of the T1/T2 equations (denominator terms included)."""
    o, v = slice(None, no), slice(no, None)
    fov = f[o, v]
    taut = _tau(t1, t2, 0.5)
    tau = _tau(t1, t2, 1.0)

    Fae = f[v, v] - np.diag(np.diag(f[v, v]))
    Fae -= 0.5 * np.einsum('me,ma->ae', fov, t1)
    Fae += np.einsum('mf,mafe->ae', t1, g[o, v, v, v])
    Fae -= 0.5 * np.einsum('mnaf,mnef->ae', taut, g[o, o, v, v])

    Fmi = f[o, o] - np.diag(np.diag(f[o, o]))
    Fmi += 0.5 * np.einsum('ie,me->mi', t1, fov)
    Fmi += np.einsum('ne,mnie->mi', t1, g[o, o, o, v])
    Fmi += 0.5 * np.einsum('inef,mnef->mi', taut, g[o, o, v, v])

    Fme = fov + np.einsum('nf,mnef->me', t1, g[o, o, v, v])

    Wmnij = g[o, o, o, o].copy()
    x = np.einsum('je,mnie->mnij', t1, g[o, o, o, v])
    Wmnij += x - x.transpose(0, 1, 3, 2)
    Wmnij += 0.25 * np.einsum('ijef,mnef->mnij', tau, g[o, o, v, v])

    Wabef = g[v, v, v, v].copy()
    x = np.einsum('mb,amef->abef', t1, g[v, o, v, v])
    Wabef -= x - x.transpose(1, 0, 2, 3)
    Wabef += 0.25 * np.einsum('mnab,mnef->abef', tau, g[o, o, v, v])

    Wmbej = g[o, v, v, o].copy()
    Wmbej += np.einsum('jf,mbef->mbej', t1, g[o, v, v, v])
    Wmbej -= np.einsum('nb,mnej->mbej', t1, g[o, o, v, o])
    Wmbej -= np.einsum('jnfb,mnef->mbej',
                       0.5 * t2 + np.einsum('jf,nb->jnfb', t1, t1),
                       g[o, o, v, v])

    r1 = fov.copy()
    r1 += np.einsum('ie,ae->ia', t1, Fae)
    r1 -= np.einsum('ma,mi->ia', t1, Fmi)
    r1 += np.einsum('imae,me->ia', t2, Fme)
    r1 -= np.einsum('nf,naif->ia', t1, g[o, v, o, v])
    r1 -= 0.5 * np.einsum('imef,maef->ia', t2, g[o, v, v, v])
    r1 -= 0.5 * np.einsum('mnae,nmei->ia', t2, g[o, o, v, o])

    r2 = g[o, o, v, v].copy()
    x = np.einsum('ijae,be->ijab', t2,
                  Fae - 0.5 * np.einsum('mb,me->be', t1, Fme))
    r2 += x - x.transpose(0, 1, 3, 2)
    x = np.einsum('imab,mj->ijab', t2,
                  Fmi + 0.5 * np.einsum('je,me->mj', t1, Fme))
    r2 -= x - x.transpose(1, 0, 2, 3)
    r2 += 0.5 * np.einsum('mnab,mnij->ijab', tau, Wmnij)
    r2 += 0.5 * np.einsum('ijef,abef->ijab', tau, Wabef)
    x = (np.einsum('imae,mbej->ijab', t2, Wmbej)
         - np.einsum('ie,ma,mbej->ijab', t1, t1, g[o, v, v, o]))
    x = x - x.transpose(1, 0, 2, 3)
    r2 += x - x.transpose(0, 1, 3, 2)
    x = np.einsum('ie,abej->ijab', t1, g[v, v, v, o])
    r2 += x - x.transpose(1, 0, 2, 3)
    x = np.einsum('ma,mbij->ijab', t1, g[o, v, o, o])
    r2 -= x - x.transpose(0, 1, 3, 2)
    return r1, r2


def ccsd_solve(H: MolecularHamiltonian, init: Amplitudes,
               cfg: CcConfig = CcConfig()):
    """Iterate the CCSD equations, updating only unfrozen amplitude entries."""
    basis = spin_orbital_basis(H)
    f, g, no = basis.fock, basis.g, basis.n_occ
    if init.n_occ != no or init.n_virt != basis.n_virt:
        raise AmplitudeContractError(
            f"amplitudes shaped ({init.n_occ},{init.n_virt}), "
            f"need ({no},{basis.n_virt})")
    o, v = slice(None, no), slice(no, None)
    eps = np.diag(f)
    d1 = eps[o, None] - eps[None, v] + cfg.level_shift
    d2 = (eps[o, None, None, None] + eps[None, o, None, None]
          - eps[None, None, v, None] - eps[None, None, None, v]
          + cfg.level_shift)

    unfrozen = np.concatenate([(~init.frozen1).ravel().nonzero()[0],
                               init.t1.size + (~init.frozen2).ravel().nonzero()[0]])
    if unfrozen.size == 0:
        e_corr = correlation_energy(basis, init.t1, init.t2)
        return init, e_corr, True, 0

    t1 = init.t1.copy()
    t2 = init.t2.copy()
    t2[~init.frozen2] = (g[o, o, v, v] / d2)[~init.frozen2]  # MP2 start
    e_prev = correlation_energy(basis, t1, t2)
    diis = _Diis(cfg.diis_depth)
    best_rms, best = np.inf, (t1.copy(), t2.copy(), e_prev)
    trace = []
    converged = False
    it = 0
    for it in range(1, cfg.max_iterations + 1):
        r1, r2 = _residuals(f, g, no, t1, t2)
        t1_new = r1 / d1
        t2_new = r2 / d2
        init.freeze(t1_new, t2_new)
        flat_new = np.concatenate([t1_new.ravel(), t2_new.ravel()])
        flat_old = np.concatenate([t1.ravel(), t2.ravel()])
        err = (flat_new - flat_old)[unfrozen]
        rms = float(np.sqrt(np.mean(err ** 2)))
        if not np.isfinite(rms) or rms > DIVERGENCE_RMS:
            raise CcDivergenceError(
                f"amplitude update RMS {rms:.3e} at iteration {it}")
        flat = diis.extrapolate(flat_new, err)
        t1 = flat[:t1.size].reshape(t1.shape)
        t2 = flat[t1.size:].reshape(t2.shape)
        init.freeze(t1, t2)
        e = correlation_energy(basis, t1, t2)
        trace.append((it, basis.e_hf + e, rms))
        if rms < best_rms:
            best_rms, best = rms, (t1.copy(), t2.copy(), e)
        if abs(e - e_prev) < cfg.energy_tol and rms < cfg.amp_rms_tol:
            converged = True
            e_prev = e
            break
        e_prev = e
    if not converged:
        t1, t2, e_prev = best
        log.warning("CCSD not converged in %d iterations; returning the "
                    "lowest-residual iterate (rms %.2e)",
                    cfg.max_iterations, best_rms)
    if cfg.trace_path is not None:
        with open(cfg.trace_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iteration", "energy", "amp_rms"])
            w.writerows(trace)
    out = Amplitudes(t1, t2, init.frozen1.copy(), init.frozen2.copy())
    return out, e_prev, converged, it


def _p_jk(x):
    """P(i/jk) over the first three axes (and a/bc over the last three)."""
    return x - x.transpose(1, 0, 2, 3, 4, 5) - x.transpose(2, 1, 0, 3, 4, 5)


def _p_bc(x):
    return x - x.transpose(0, 1, 2, 4, 3, 5) - x.transpose(0, 1, 2, 5, 4, 3)


def triples_correction(H: MolecularHamiltonian, amps: Amplitudes,
                       space: ActiveSpace | None = None) -> float:
    """Perturbative triples energy; fully-active t1/t2 entries are zeroed first.

    The zeroing (frozen-mask positions) prevents the correction from
    re-counting correlation the tailored amplitudes already carry.  With no
    frozen entries this is the standard (T) energy.
    """
    basis = spin_orbital_basis(H)
    f, g, no = basis.fock, basis.g, basis.n_occ
    nv = basis.n_virt
    if no < 3 or nv < 3:
        return 0.0
    t1 = amps.t1.copy()
    t2 = amps.t2.copy()
    t1[amps.frozen1] = 0.0
    t2[amps.frozen2] = 0.0
    o, v = slice(None, no), slice(no, None)
    eps = np.diag(f)
    d3 = (eps[o, None, None, None, None, None]
          + eps[None, o, None, None, None, None]
          + eps[None, None, o, None, None, None]
          - eps[None, None, None, v, None, None]
          - eps[None, None, None, None, v, None]
          - eps[None, None, None, None, None, v])

    wd = _p_jk(_p_bc(np.einsum('ia,jkbc->ijkabc', t1, g[o, o, v, v])))
    wc = _p_jk(_p_bc(np.einsum('jkae,eibc->ijkabc', t2, g[v, o, v, v])
                     - np.einsum('imbc,majk->ijkabc', t2, g[o, v, o, o])))
    return float(np.einsum('ijkabc,ijkabc->', wc, (wc + wd) / d3) / 36.0)


def empty_amplitudes(H: MolecularHamiltonian) -> Amplitudes:
    """All-zero, all-unfrozen amplitudes shaped for H (standard CCSD start)."""
    basis = spin_orbital_basis(H)
    no, nv = basis.n_occ, basis.n_virt
    return Amplitudes(np.zeros((no, nv)), np.zeros((no, no, nv, nv)),
                      np.zeros((no, nv), dtype=bool),
                      np.zeros((no, no, nv, nv), dtype=bool))
