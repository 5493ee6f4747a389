import numpy as np
import pytest

from qctcc.exceptions import QubitCapError
from qctcc.fci import ground_state
from qctcc.hamio import (build_active_hamiltonian, full_space, read_fcidump,
                         select_active_space)
from qctcc.solver import (VqeConfig, active_energy, casci_ground_state,
                          reference_determinant, uccsd_generators, uccsd_vqe)

H2 = "fixtures/h2/h2_sto-3g_1.400.fcidump"
LIH = "fixtures/lih/lih_sto-3g_3.016.fcidump"


def _active(path, n_orb=None, n_elec=None):
    H = read_fcidump(path)
    space = (full_space(H) if n_orb is None
             else select_active_space(H, n_orb, n_elec))
    return H, build_active_hamiltonian(H, space)


def test_casci_matches_fci_full_space():
    H, Ha = _active(H2)
    state, e = casci_ground_state(Ha)
    e_ref, _, _ = ground_state(H.h1, H.eri, H.norb, 1, 1)
    assert e == pytest.approx(e_ref + H.e_core, abs=1e-10)
    assert active_energy(state, Ha) == pytest.approx(e, abs=1e-10)


def test_vqe_matches_casci_two_electrons():
    # disentangled UCCSD is exact for two electrons in two orbitals
    _, Ha = _active(H2)
    _, e_cas = casci_ground_state(Ha)
    state, e_vqe, params = uccsd_vqe(Ha)
    assert e_vqe == pytest.approx(e_cas, abs=1e-9)
    assert np.all(np.abs(state.amps.imag) < 1e-12)


def test_vqe_matches_casci_lih_22():
    _, Ha = _active(LIH, 2, 2)
    _, e_cas = casci_ground_state(Ha)
    _, e_vqe, _ = uccsd_vqe(Ha)
    assert e_vqe == pytest.approx(e_cas, abs=1e-9)


def test_vqe_variational_bound():
    _, Ha = _active(LIH, 4, 4)
    _, e_cas = casci_ground_state(Ha)
    _, e_vqe, _ = uccsd_vqe(Ha)
    assert e_vqe >= e_cas - 1e-10
    assert e_vqe - e_cas < 1e-4


def test_vqe_deterministic():
    _, Ha = _active(H2)
    s1, e1, p1 = uccsd_vqe(Ha, VqeConfig(seed=3))
    s2, e2, p2 = uccsd_vqe(Ha, VqeConfig(seed=3))
    assert e1 == e2
    assert np.array_equal(p1, p2)
    assert np.array_equal(s1.amps, s2.amps)


def test_qubit_cap():
    _, Ha = _active(LIH)  # 6 orbitals = 12 qubits
    with pytest.raises(QubitCapError):
        uccsd_vqe(Ha, VqeConfig(qubit_cap=10))


def test_generator_ordering_doubles_then_singles():
    gens = uccsd_generators(2, 2)
    degrees = [{"d": 2, "s": 1}[g[0]] for g in gens]
    assert degrees == sorted(degrees, reverse=True)
    assert 2 in degrees and 1 in degrees


def test_reference_determinant():
    d = reference_determinant(4, 4)
    assert d.alpha == 0b11 and d.beta == 0b11
