"""Active-space ground states: exact diagonalization and simulated UCCSD-VQE."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize
import scipy.sparse

from .determinants import (Determinant, WaveState, annihilate, create,
                           sector_basis, to_spinmask)
from .exceptions import QubitCapError
from .fci import DENSE_CUTOFF, DIM_CAP, SectorHamiltonian, davidson, ground_state
from .hamio import ActiveHamiltonian

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class VqeConfig:
    max_iterations: int = 400
    gradient_step: float = 1e-6       # finite-difference fallback step
    convergence_tol: float = 1e-8     # gradient norm tolerance (hartree)
    seed: int = 0
    initial_params: str = "zero"      # "zero" | "perturbed-zero"
    qubit_cap: int = 20

    def __post_init__(self):
        if self.convergence_tol <= 0 or self.gradient_step <= 0:
            raise ValueError("tolerances must be positive")


def _split_sector(n_orb: int, n_elec: int) -> tuple[int, int]:
    if n_elec % 2:
        raise ValueError("only closed-shell (even electron) sectors supported")
    return n_elec // 2, n_elec // 2


def casci_ground_state(Ha: ActiveHamiltonian, dim_cap: int = DIM_CAP,
                       dense_cutoff: int = DENSE_CUTOFF):
    """Lowest eigenpair of the embedded active Hamiltonian.

    Returns (WaveState, e_active) with e_active including e_frozen.
    """
    na, nb = _split_sector(Ha.n_active_orb, Ha.n_active_elec)
    e, v, basis = ground_state(Ha.h1_eff, Ha.eri_act, Ha.n_active_orb, na, nb,
                               dim_cap=dim_cap, dense_cutoff=dense_cutoff)
    return WaveState(basis, v.astype(complex)), e + Ha.e_frozen


def active_energy(state: WaveState, Ha: ActiveHamiltonian) -> float:
    """<Psi|H_act|Psi> + e_frozen for a state over active-space determinants."""
    na, nb = _split_sector(Ha.n_active_orb, Ha.n_active_elec)
    ham = SectorHamiltonian(Ha.h1_eff, Ha.eri_act, Ha.n_active_orb, na, nb)
    index = {d: k for k, d in enumerate(ham.basis)}
    vre = np.zeros(ham.dim)
    vim = np.zeros(ham.dim)
    for d, a in zip(state.basis, state.amps):
        vre[index[d]] = a.real
        vim[index[d]] = a.imag
    e = ham.expectation(vre) + ham.expectation(vim)
    return float(e) + Ha.e_frozen


# ---------------------------------------------------------------------------
# Disentangled UCCSD statevector VQE (fixed particle-number sector)
# ---------------------------------------------------------------------------

def reference_determinant(n_orb: int, n_elec: int) -> Determinant:
    mask = (1 << (n_elec // 2)) - 1
    return Determinant(mask, mask)


def uccsd_generators(n_orb: int, n_elec: int):
    """Spin-conserving excitation index tuples: doubles first, then singles,
    each sector ordered lexicographically (spin-orbital indices)."""
    ref = to_spinmask(reference_determinant(n_orb, n_elec))
    nso = 2 * n_orb
    occ = [p for p in range(nso) if ref >> p & 1]
    vir = [p for p in range(nso) if not ref >> p & 1]
    doubles = []
    for ii, i in enumerate(occ):
        for j in occ[ii + 1:]:
            for ai, a in enumerate(vir):
                for b in vir[ai + 1:]:
                    if sorted((i % 2, j % 2)) == sorted((a % 2, b % 2)):
                        doubles.append(("d", i, j, a, b))
    singles = [("s", i, a) for i in occ for a in vir if i % 2 == a % 2]
    return doubles + singles


def _generator_matrix(gen, basis, index):
    """Sparse antisymmetric matrix of T - T^dagger over the sector basis."""
    rows, cols, vals = [], [], []
    for J, det in enumerate(basis):
        m = to_spinmask(det)
        if gen[0] == "s":
            _, i, a = gen
            ops = [(a, True), (i, False)]
        else:
            _, i, j, a, b = gen
            ops = [(a, True), (b, True), (j, False), (i, False)]
        sign = 1
        ok = True
        for so, is_cre in reversed(ops):
            res = create(m, so) if is_cre else annihilate(m, so)
            if res is None:
                ok = False
                break
            m, s = res
            sign *= s
        if ok:
            I = index[m]
            rows += [I, J]
            cols += [J, I]
            vals += [float(sign), -float(sign)]
    dim = len(basis)
    return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(dim, dim))


def _apply_rotation(G, theta, v):
    """exp(theta*G) @ v using G^3 = -G for single/double excitation generators."""
    gv = G @ v
    return v + np.sin(theta) * gv + (1.0 - np.cos(theta)) * (G @ gv)


def uccsd_vqe(Ha: ActiveHamiltonian, cfg: VqeConfig = VqeConfig()):
    """Minimize the disentangled-UCCSD statevector energy with BFGS.

    Returns (WaveState, e_active, params); e_active includes e_frozen.
    A non-convergent optimizer returns its best iterate and logs a warning.
    """
    if 2 * Ha.n_active_orb > cfg.qubit_cap:
        raise QubitCapError(
            f"{2 * Ha.n_active_orb} qubits exceed the cap {cfg.qubit_cap}")
    na, nb = _split_sector(Ha.n_active_orb, Ha.n_active_elec)
    ham = SectorHamiltonian(Ha.h1_eff, Ha.eri_act, Ha.n_active_orb, na, nb)
    basis = ham.basis
    index = {to_spinmask(d): k for k, d in enumerate(basis)}
    gens = uccsd_generators(Ha.n_active_orb, Ha.n_active_elec)
    mats = [_generator_matrix(g, basis, index) for g in gens]
    ref = np.zeros(ham.dim)
    ref[index[to_spinmask(reference_determinant(Ha.n_active_orb, Ha.n_active_elec))]] = 1.0

    def propagate(theta):
        v = ref
        states = [v]
        for G, t in zip(mats, theta):
            v = _apply_rotation(G, t, v)
            states.append(v)
        return states

    def energy_and_grad(theta):
        states = propagate(theta)
        psi = states[-1]
        hpsi = ham.matvec(psi)
        e = float(psi @ hpsi)
        grad = np.zeros_like(theta)
        b = hpsi
        for k in range(len(theta) - 1, -1, -1):
            grad[k] = 2.0 * float(b @ (mats[k] @ states[k + 1]))
            b = _apply_rotation(mats[k], -theta[k], b)
        return e, grad

    rng = np.random.default_rng(cfg.seed)
    x0 = np.zeros(len(gens))
    if cfg.initial_params == "perturbed-zero":
        x0 = x0 + 1e-2 * rng.standard_normal(len(gens))

    res = scipy.optimize.minimize(
        energy_and_grad, x0, jac=True, method="BFGS",
        options={"maxiter": cfg.max_iterations, "gtol": cfg.convergence_tol})
    if not res.success:
        log.warning("VQE optimizer stopped without convergence: %s", res.message)
    psi = propagate(res.x)[-1]
    psi = psi / np.linalg.norm(psi)
    e = float(psi @ ham.matvec(psi)) + Ha.e_frozen
    k = int(np.argmax(np.abs(psi)))
    if psi[k] < 0:
        psi = -psi
    state = WaveState(basis, psi.astype(complex))
    return state, e, res.x
