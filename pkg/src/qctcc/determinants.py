"""Slater determinants as bitmask pairs and the shared fermionic conventions.

Conventions used throughout the package:
  - spin orbitals are interleaved: alpha_p -> 2p, beta_p -> 2p+1;
  - a determinant is the product of creation operators in ascending
    spin-orbital index applied to the vacuum;
  - the determinant basis of a (n_alpha, n_beta) sector is ordered
    lexicographically by the (alpha, beta) bitmask pair.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np


class Determinant(NamedTuple):
    alpha: int  # bitmask over spatial orbitals
    beta: int


def orbital_list(mask: int) -> list[int]:
    """Set bits of a mask, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_spinmask(det: Determinant) -> int:
    m = 0
    for p in orbital_list(det.alpha):
        m |= 1 << (2 * p)
    for p in orbital_list(det.beta):
        m |= 1 << (2 * p + 1)
    return m


def from_spinmask(m: int) -> Determinant:
    alpha = beta = 0
    for so in orbital_list(m):
        if so % 2 == 0:
            alpha |= 1 << (so // 2)
        else:
            beta |= 1 << (so // 2)
    return Determinant(alpha, beta)


def orbital_strings(norb: int, nocc: int) -> list[int]:
    """All nocc-electron occupation masks over norb orbitals, ascending."""
    strs = [sum(1 << p for p in occ) for occ in combinations(range(norb), nocc)]
    return sorted(strs)


def sector_basis(norb: int, na: int, nb: int) -> tuple[Determinant, ...]:
    """Determinant basis of the fixed (na, nb) sector, alpha-major."""
    strs_a = orbital_strings(norb, na)
    strs_b = orbital_strings(norb, nb)
    return tuple(Determinant(a, b) for a in strs_a for b in strs_b)


def annihilate(m: int, so: int) -> tuple[int, int] | None:
    """Apply a_so; returns (new mask, sign) or None if unoccupied."""
    bit = 1 << so
    if not m & bit:
        return None
    sign = -1 if (m & (bit - 1)).bit_count() % 2 else 1
    return m ^ bit, sign


def create(m: int, so: int) -> tuple[int, int] | None:
    """Apply a^dagger_so; returns (new mask, sign) or None if occupied."""
    bit = 1 << so
    if m & bit:
        return None
    sign = -1 if (m & (bit - 1)).bit_count() % 2 else 1
    return m | bit, sign


def excitation(ref: Determinant, det: Determinant) -> tuple[list[int], list[int], int]:
    """Holes, particles (ascending spin-orbital indices) and the phase s with
    |det> = s * a+_{p1} a+_{p2} ... a_{h2} a_{h1} |ref>."""
    rm, dm = to_spinmask(ref), to_spinmask(det)
    holes = orbital_list(rm & ~dm)
    parts = orbital_list(dm & ~rm)
    m, sign = rm, 1
    for h in holes:  # rightmost operator first: a_{h1} a_{h2} ... read right-to-left
        m, s = annihilate(m, h)
        sign *= s
    for p in reversed(parts):
        m, s = create(m, p)
        sign *= s
    assert m == dm
    return holes, parts, sign


def excitation_degree(ref: Determinant, det: Determinant) -> int:
    return ((ref.alpha ^ det.alpha).bit_count() + (ref.beta ^ det.beta).bit_count()) // 2


@dataclass(frozen=True)
class WaveState:
    """Complex amplitudes over an ordered determinant basis."""
    basis: tuple[Determinant, ...]
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)
        if len(self.basis) != amps.shape[0]:
            raise ValueError("basis/amplitude length mismatch")
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("duplicate determinants in basis")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state not normalized: |amps|^2 = {norm}")

    def coefficient(self, det: Determinant) -> complex:
        try:
            return complex(self.amps[self.basis.index(det)])
        except ValueError:
            return 0.0 + 0.0j

    def to_json(self) -> str:
        doc = {
            "basis": [[d.alpha, d.beta] for d in self.basis],
            "amps": [[float(a.real), float(a.imag)] for a in self.amps],
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "WaveState":
        doc = json.loads(text)
        basis = tuple(Determinant(a, b) for a, b in doc["basis"])
        amps = np.array([complex(re, im) for re, im in doc["amps"]])
        return cls(basis, amps)


def fidelity(x: WaveState, y: WaveState) -> float:
    """|<x|y>|^2, tolerant of differently ordered/truncated bases."""
    ymap = {d: a for d, a in zip(y.basis, y.amps)}
    ov = sum(np.conj(a) * ymap.get(d, 0.0) for d, a in zip(x.basis, x.amps))
    return float(abs(ov) ** 2)
