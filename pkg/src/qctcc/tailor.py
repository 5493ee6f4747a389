"""Mapping CI coefficients to cluster amplitudes and embedding them.

The cluster expansion and the CI expansion of the same state agree order by
order, which fixes the low-rank amplitudes exactly:
    t1 = c1
    t2[ijab] = c2[ijab] - (c1[ia] c1[jb] - c1[ib] c1[ja])
with the CI coefficients taken in intermediate normalization (reference
coefficient divided out).  Amplitudes extracted in an active space are then
planted at the matching positions of the full-space tensors and flagged frozen
so the residual equations never update them.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .determinants import (Determinant, WaveState, excitation,
                           excitation_degree, orbital_list, to_spinmask)
from .exceptions import TailoringError
from .hamio import ActiveSpace

log = logging.getLogger(__name__)

REF_COEFF_FLOOR = 1e-6


@dataclass(frozen=True)
class Amplitudes:
    """Spin-orbital cluster amplitudes with per-entry freeze masks.

    Occupied/virtual axes index the reference's occupied and virtual spin
    orbitals in ascending interleaved order; t2 is antisymmetric in (i,j)
    and in (a,b).
    """
    t1: np.ndarray          # (no, nv)
    t2: np.ndarray          # (no, no, nv, nv)
    frozen1: np.ndarray     # bool, same shape as t1
    frozen2: np.ndarray     # bool, same shape as t2

    def __post_init__(self):
        no, nv = self.t1.shape
        if self.t2.shape != (no, no, nv, nv):
            raise ValueError("t1/t2 shape mismatch")
        if self.frozen1.shape != self.t1.shape or self.frozen2.shape != self.t2.shape:
            raise ValueError("freeze mask shape mismatch")
        for axes in ((1, 0, 2, 3), (0, 1, 3, 2)):
            if not np.allclose(self.t2, -self.t2.transpose(axes), atol=1e-10):
                raise ValueError("t2 is not antisymmetric")
            if not (self.frozen2 == self.frozen2.transpose(axes)).all():
                raise ValueError("freeze mask breaks t2 permutation symmetry")

    @property
    def n_occ(self) -> int:
        return self.t1.shape[0]

    @property
    def n_virt(self) -> int:
        return self.t1.shape[1]

    def freeze(self, t1: np.ndarray, t2: np.ndarray) -> None:
        """Reset the frozen entries of trial tensors to the stored values."""
        t1[self.frozen1] = self.t1[self.frozen1]
        t2[self.frozen2] = self.t2[self.frozen2]


def occ_virt_spin_orbitals(ref: Determinant, n_orb: int) -> tuple[list[int], list[int]]:
    refm = to_spinmask(ref)
    occ = [s for s in range(2 * n_orb) if refm >> s & 1]
    vir = [s for s in range(2 * n_orb) if not refm >> s & 1]
    return occ, vir


def ci_to_cc(state: WaveState, ref: Determinant, n_orb: int):
    """Cluster amplitudes equivalent to the CI expansion through doubles.

    Returns (t1, t2, info) where info reports the reference coefficient and
    the discarded weight carried by excitations beyond doubles.
    """
    occ, vir = occ_virt_spin_orbitals(ref, n_orb)
    o_idx = {s: i for i, s in enumerate(occ)}
    v_idx = {s: a for a, s in enumerate(vir)}
    no, nv = len(occ), len(vir)

    c0 = state.coefficient(ref)
    if abs(c0) < REF_COEFF_FLOOR:
        raise TailoringError(
            f"reference coefficient {abs(c0):.3e} below {REF_COEFF_FLOOR:.0e}; "
            "the state is not single-reference enough to tailor")
    c1 = np.zeros((no, nv))
    c2 = np.zeros((no, no, nv, nv))
    discarded = 0.0
    for det, amp in zip(state.basis, state.amps):
        if abs(amp.imag) > 1e-12:
            raise TailoringError("amplitudes must be real before tailoring")
        deg = excitation_degree(ref, det)
        if deg == 0:
            continue
        if deg > 2:
            discarded += abs(amp) ** 2
            continue
        holes, parts, sign = excitation(ref, det)
        val = sign * amp.real / c0.real
        if deg == 1:
            c1[o_idx[holes[0]], v_idx[parts[0]]] = val
        else:
            i, j = o_idx[holes[0]], o_idx[holes[1]]
            a, b = v_idx[parts[0]], v_idx[parts[1]]
            c2[i, j, a, b] = val
            c2[j, i, a, b] = -val
            c2[i, j, b, a] = -val
            c2[j, i, b, a] = val

    t1 = c1
    t2 = c2 - (np.einsum('ia,jb->ijab', c1, c1)
               - np.einsum('ib,ja->ijab', c1, c1))
    info = {"c0": c0.real, "discarded_weight": discarded}
    if discarded > 1e-6:
        log.info("weight %.3e beyond doubles discarded in the amplitude map",
                 discarded)
    return t1, t2, info


def embed_amplitudes(t1_act: np.ndarray, t2_act: np.ndarray,
                     space: ActiveSpace, ref: Determinant,
                     n_orb: int) -> Amplitudes:
    """Plant active-space amplitudes in full-space tensors, flagged frozen.

    `ref` is the full-space reference determinant.  Frozen-core spatial
    orbitals must all lie below the active ones so the local and global
    normal-ordered excitation operators carry identical phases.
    """
    if space.frozen and max(space.frozen) > min(space.active):
        raise TailoringError("frozen orbitals must lie below all active ones")
    active = sorted(space.active)
    occ, vir = occ_virt_spin_orbitals(ref, n_orb)
    o_idx = {s: i for i, s in enumerate(occ)}
    v_idx = {s: a for a, s in enumerate(vir)}

    # local spin orbital 2l+s of active orbital active[l] -> global 2p+s
    ref_act = Determinant((1 << (space.n_active_elec // 2)) - 1,
                          (1 << (space.n_active_elec // 2)) - 1)
    occ_l, vir_l = occ_virt_spin_orbitals(ref_act, len(active))
    glob = lambda s: 2 * active[s // 2] + s % 2
    occ_map = [o_idx[glob(s)] for s in occ_l]    # local occ index -> global
    vir_map = [v_idx[glob(s)] for s in vir_l]
    for s in occ_l:
        if glob(s) not in o_idx:
            raise TailoringError("active occupied orbital not occupied in the reference")
    for s in vir_l:
        if glob(s) in o_idx:
            raise TailoringError("active virtual orbital occupied in the reference")

    no, nv = len(occ), len(vir)
    t1 = np.zeros((no, nv))
    t2 = np.zeros((no, no, nv, nv))
    frozen1 = np.zeros((no, nv), dtype=bool)
    frozen2 = np.zeros((no, no, nv, nv), dtype=bool)
    om = np.asarray(occ_map)
    vm = np.asarray(vir_map)
    t1[np.ix_(om, vm)] = t1_act
    frozen1[np.ix_(om, vm)] = True
    t2[np.ix_(om, om, vm, vm)] = t2_act
    frozen2[np.ix_(om, om, vm, vm)] = True
    return Amplitudes(t1, t2, frozen1, frozen2)
