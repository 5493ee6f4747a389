"""FCIDUMP input, reference-determinant quantities and active-space embedding."""
from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .determinants import Determinant, orbital_list
from .exceptions import ActiveSpaceError, FcidumpError, UnsupportedReferenceError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MolecularHamiltonian:
    """One-/two-electron integrals in an MO basis, chemists' notation."""
    norb: int
    nelec: int
    ms2: int
    e_core: float
    h1: np.ndarray          # (norb, norb)
    eri: np.ndarray         # (norb,)*4, (pq|rs)

    def __post_init__(self):
        h1 = np.asarray(self.h1, dtype=np.float64)
        eri = np.asarray(self.eri, dtype=np.float64)
        h1.setflags(write=False)
        eri.setflags(write=False)
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "eri", eri)
        if self.norb < 1:
            raise ValueError("norb must be >= 1")
        if not 0 <= self.nelec <= 2 * self.norb:
            raise ValueError("nelec out of range")


@dataclass(frozen=True)
class ActiveSpace:
    """Frozen/active spatial-orbital partition; occupied actives listed first."""
    frozen: tuple[int, ...]
    active: tuple[int, ...]
    n_active_elec: int

    def __post_init__(self):
        if set(self.frozen) & set(self.active):
            raise ValueError("frozen and active orbitals overlap")
        if not 0 <= self.n_active_elec <= 2 * len(self.active):
            raise ValueError("n_active_elec out of range")

    @property
    def n_active_orb(self) -> int:
        return len(self.active)


@dataclass(frozen=True)
class ActiveHamiltonian:
    """Frozen-core-embedded Hamiltonian over the active orbitals."""
    n_active_orb: int
    n_active_elec: int
    e_frozen: float
    h1_eff: np.ndarray
    eri_act: np.ndarray

    def __post_init__(self):
        h1 = np.asarray(self.h1_eff, dtype=np.float64)
        eri = np.asarray(self.eri_act, dtype=np.float64)
        h1.setflags(write=False)
        eri.setflags(write=False)
        object.__setattr__(self, "h1_eff", h1)
        object.__setattr__(self, "eri_act", eri)


# ---------------------------------------------------------------------------
# FCIDUMP
# ---------------------------------------------------------------------------

_NML_INT = re.compile(r"(\w+)\s*=\s*(-?\d+)")


def parse_fcidump(text: str) -> MolecularHamiltonian:
    """Parse FCIDUMP text; completes 8-fold ERI symmetry, last entry wins."""
    lines = text.splitlines()
    if not lines or "&FCI" not in lines[0].upper():
        raise FcidumpError("line 1: missing &FCI namelist header")
    # the namelist may span lines, terminated by '/' or '&END'
    header_end = None
    for ln, line in enumerate(lines):
        if "&END" in line.upper() or line.strip().endswith("/"):
            header_end = ln
            break
    if header_end is None:
        raise FcidumpError("namelist not terminated by &END or /")
    header = " ".join(lines[: header_end + 1])
    fields = {k.upper(): int(v) for k, v in _NML_INT.findall(header)
              if k.upper() in ("NORB", "NELEC", "MS2", "ISYM")}
    if "NORB" not in fields or "NELEC" not in fields:
        raise FcidumpError(f"line {header_end + 1}: namelist lacks NORB/NELEC")
    norb = fields["NORB"]
    nelec = fields["NELEC"]
    ms2 = fields.get("MS2", 0)
    if norb < 1:
        raise FcidumpError(f"line {header_end + 1}: NORB={norb} out of range")
    h1 = np.zeros((norb, norb))
    eri = np.zeros((norb,) * 4)
    e_core = 0.0
    for ln in range(header_end + 1, len(lines)):
        parts = lines[ln].split()
        if not parts:
            continue
        if len(parts) != 5:
            raise FcidumpError(f"line {ln + 1}: expected 'value i j k l'")
        try:
            v = float(parts[0])
            i, j, k, l = (int(x) for x in parts[1:])
        except ValueError as exc:
            raise FcidumpError(f"line {ln + 1}: {exc}") from None
        for idx in (i, j, k, l):
            if not 0 <= idx <= norb:
                raise FcidumpError(f"line {ln + 1}: orbital index {idx} out of range")
        if i == j == k == l == 0:
            e_core = v
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpError(f"line {ln + 1}: malformed one-electron indices")
            h1[i - 1, j - 1] = v
            h1[j - 1, i - 1] = v
        elif min(i, j, k, l) >= 1:
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            for a, b in ((p, q), (q, p)):
                for c, d in ((r, s), (s, r)):
                    eri[a, b, c, d] = v
                    eri[c, d, a, b] = v
        else:
            raise FcidumpError(f"line {ln + 1}: unsupported index pattern")
    return MolecularHamiltonian(norb, nelec, ms2, e_core, h1, eri)


def read_fcidump(path) -> MolecularHamiltonian:
    return parse_fcidump(Path(path).read_text())


def write_fcidump(H: MolecularHamiltonian) -> str:
    """Serialize with full 17-digit precision; round-trips bit-for-bit."""
    out = [f"&FCI NORB={H.norb},NELEC={H.nelec},MS2={H.ms2},",
           " ORBSYM=" + "1," * H.norb,
           " ISYM=1,",
           "&END"]

    def fmt(v):
        return f"{v:.17g}"

    for p in range(H.norb):
        for q in range(p + 1):
            for r in range(p + 1):
                for s in range((q if r == p else r) + 1):
                    v = H.eri[p, q, r, s]
                    if v != 0.0:
                        out.append(f"{fmt(v)} {p + 1} {q + 1} {r + 1} {s + 1}")
    for p in range(H.norb):
        for q in range(p + 1):
            if H.h1[p, q] != 0.0:
                out.append(f"{fmt(H.h1[p, q])} {p + 1} {q + 1} 0 0")
    out.append(f"{fmt(H.e_core)} 0 0 0 0")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Reference determinant and Fock quantities
# ---------------------------------------------------------------------------

def fock_matrix(H: MolecularHamiltonian, occ: list[int]) -> np.ndarray:
    """Closed-shell Fock matrix for the doubly occupied orbital set `occ`."""
    f = H.h1.copy()
    for i in occ:
        f += 2.0 * H.eri[:, :, i, i] - H.eri[:, i, i, :]
    return f


def _aufbau_occupation(H: MolecularHamiltonian, nocc: int) -> list[int]:
    """Occupy the nocc lowest orbitals by the self-consistent Fock diagonal.

    Several occupations can be aufbau-stable; iterate from two deterministic
    starting guesses and keep the stable set with the lowest HF energy.
    """
    def ehf(occ):
        f = fock_matrix(H, occ)
        return H.e_core + sum(H.h1[i, i] + f[i, i] for i in occ)

    starts = [sorted(np.argsort(np.diag(H.h1), kind="stable")[:nocc].tolist()),
              list(range(nocc))]
    fixpoints = []
    for occ in starts:
        for _ in range(H.norb + 2):
            f = fock_matrix(H, occ)
            new = sorted(np.argsort(np.diag(f), kind="stable")[:nocc].tolist())
            if new == occ:
                fixpoints.append(occ)
                break
            occ = new
        else:
            log.warning("aufbau occupation did not settle; using last iterate")
            fixpoints.append(occ)
    return min(fixpoints, key=lambda occ: (ehf(occ), occ))


def reference_state(H: MolecularHamiltonian):
    """Reference determinant, Fock matrix and HF energy.

    Returns (Determinant over spatial orbitals, fock, e_hf).
    """
    if H.nelec % 2:
        raise UnsupportedReferenceError(
            f"nelec={H.nelec} is odd; only closed-shell references are supported")
    nocc = H.nelec // 2
    occ = _aufbau_occupation(H, nocc)
    f = fock_matrix(H, occ)
    e_hf = H.e_core + sum(H.h1[i, i] + f[i, i] for i in occ)
    mask = sum(1 << i for i in occ)
    return Determinant(mask, mask), f, float(e_hf)


def select_active_space(H: MolecularHamiltonian, n_orb: int, n_elec: int) -> ActiveSpace:
    """Highest-Fock-energy occupied plus lowest unoccupied orbitals."""
    if n_elec % 2:
        raise ActiveSpaceError("n_elec must be even for a closed-shell reference")
    if n_elec > H.nelec:
        raise ActiveSpaceError(f"requested {n_elec} active electrons, have {H.nelec}")
    det, f, _ = reference_state(H)
    occ = orbital_list(det.alpha)
    vir = [p for p in range(H.norb) if p not in occ]
    n_act_occ = n_elec // 2
    n_act_vir = n_orb - n_act_occ
    if n_act_vir < 0:
        raise ActiveSpaceError("more active electron pairs than active orbitals")
    if n_act_vir > len(vir):
        raise ActiveSpaceError(
            f"requested {n_act_vir} active virtuals, only {len(vir)} available")
    eps = np.diag(f)
    occ_ranked = sorted(occ, key=lambda p: (eps[p], p))
    vir_ranked = sorted(vir, key=lambda p: (eps[p], p))
    for ranked, cut in ((occ_ranked, len(occ) - n_act_occ), (vir_ranked, n_act_vir)):
        if 0 < cut < len(ranked):
            a, b = ranked[cut - 1], ranked[cut]
            if abs(eps[a] - eps[b]) < 1e-9:
                log.warning("degenerate Fock energies at active-space boundary "
                            "(orbitals %d/%d); tie broken by ascending index", a, b)
    act_occ = sorted(occ_ranked[len(occ) - n_act_occ:])
    act_vir = sorted(vir_ranked[:n_act_vir])
    frozen = tuple(sorted(set(occ) - set(act_occ)))
    return ActiveSpace(frozen, tuple(act_occ + act_vir), n_elec)


def build_active_hamiltonian(H: MolecularHamiltonian, space: ActiveSpace) -> ActiveHamiltonian:
    """Fold frozen-core orbitals into effective integrals and a constant."""
    for p in space.frozen + space.active:
        if not 0 <= p < H.norb:
            raise ActiveSpaceError(f"orbital index {p} out of range")
    h1_fold = H.h1.copy()
    for i in space.frozen:
        h1_fold += 2.0 * H.eri[:, :, i, i] - H.eri[:, i, i, :]
    e_frozen = H.e_core + sum(H.h1[i, i] + h1_fold[i, i] for i in space.frozen)
    act = list(space.active)
    h1_eff = h1_fold[np.ix_(act, act)]
    eri_act = H.eri[np.ix_(act, act, act, act)]
    return ActiveHamiltonian(len(act), space.n_active_elec, float(e_frozen),
                             h1_eff, eri_act)


def full_space(H: MolecularHamiltonian) -> ActiveSpace:
    det, f, _ = reference_state(H)
    occ = orbital_list(det.alpha)
    vir = [p for p in range(H.norb) if p not in occ]
    return ActiveSpace((), tuple(occ + vir), H.nelec)


# ---------------------------------------------------------------------------
# Fixture sidecars
# ---------------------------------------------------------------------------

def load_sidecar(fcidump_path) -> dict:
    side = Path(fcidump_path).with_suffix(".json")
    return json.loads(side.read_text())


def verify_fixture(fcidump_path, tol=1e-8) -> dict:
    """Parse a fixture, recompute HF, and compare with its sidecar."""
    H = read_fcidump(fcidump_path)
    meta = load_sidecar(fcidump_path)
    _, _, e_hf = reference_state(H)
    delta = abs(e_hf - meta["e_hf"])
    return {
        "path": str(fcidump_path),
        "e_hf_recomputed": e_hf,
        "e_hf_sidecar": meta["e_hf"],
        "abs_error": delta,
        "ok": bool(delta <= tol),
    }
