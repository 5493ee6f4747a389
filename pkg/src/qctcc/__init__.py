"""Tailored coupled cluster with simulated quantum-readout amplitudes."""

from .cc import (CcConfig, EnergyReport, active_projected_energy, ccsd_solve,
                 corrected_energy, empty_amplitudes, projected_energy,
                 triples_correction)
from .determinants import Determinant, WaveState, fidelity, sector_basis
from .exceptions import QctccError
from .hamio import (ActiveHamiltonian, ActiveSpace, MolecularHamiltonian,
                    build_active_hamiltonian, full_space, read_fcidump,
                    reference_state, select_active_space, verify_fixture,
                    write_fcidump)
from .pipeline import (RunConfig, RunResult, StatSummary, run_scan,
                       run_single, run_statistics)
from .solver import VqeConfig, active_energy, casci_ground_state, uccsd_vqe
from .tailor import Amplitudes, ci_to_cc, embed_amplitudes
from .tomography import CbtEstimate, ShotBudget, finalize_real, reconstruct

__version__ = "0.1.0"

__all__ = [
    "ActiveHamiltonian", "ActiveSpace", "Amplitudes", "CbtEstimate",
    "CcConfig", "Determinant", "EnergyReport", "MolecularHamiltonian",
    "QctccError", "RunConfig", "RunResult", "ShotBudget", "StatSummary",
    "VqeConfig", "WaveState", "active_energy", "active_projected_energy",
    "build_active_hamiltonian", "casci_ground_state", "ccsd_solve",
    "ci_to_cc", "corrected_energy", "embed_amplitudes", "empty_amplitudes",
    "fidelity", "finalize_real", "full_space", "projected_energy",
    "read_fcidump", "reconstruct", "reference_state", "run_scan",
    "run_single", "run_statistics", "sector_basis", "select_active_space",
    "triples_correction", "uccsd_vqe", "verify_fixture", "write_fcidump",
]
