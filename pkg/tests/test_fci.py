import numpy as np
import pytest

from qctcc.determinants import sector_basis
from qctcc.exceptions import DimensionCapError
from qctcc.fci import SectorHamiltonian, ground_state
from qctcc.hamio import load_sidecar, read_fcidump
from tests.oracles import dense_hamiltonian


def random_integrals(norb, seed):
    rng = np.random.default_rng(seed)
    h1 = rng.standard_normal((norb, norb))
    h1 = (h1 + h1.T) / 2
    eri = rng.standard_normal((norb,) * 4)
    # 8-fold symmetry of real chemists-notation integrals
    eri = eri + eri.transpose(1, 0, 2, 3)
    eri = eri + eri.transpose(0, 1, 3, 2)
    eri = eri + eri.transpose(2, 3, 0, 1)
    return h1, eri / 8


@pytest.mark.parametrize("norb,na,nb", [(3, 2, 2), (4, 2, 1), (4, 3, 1)])
def test_dense_matches_operator_oracle(norb, na, nb):
    h1, eri = random_integrals(norb, seed=norb * 10 + na)
    ham = SectorHamiltonian(h1, eri, norb, na, nb)
    basis = sector_basis(norb, na, nb)
    ref = dense_hamiltonian(h1, eri, norb, basis)
    assert np.max(np.abs(ham.dense() - ref)) < 1e-12


def test_matvec_matches_dense():
    h1, eri = random_integrals(4, seed=5)
    ham = SectorHamiltonian(h1, eri, 4, 2, 2)
    rng = np.random.default_rng(0)
    v = rng.standard_normal(ham.dim)
    assert np.allclose(ham.matvec(v), ham.dense() @ v, atol=1e-12)


def test_diagonal_matches_dense():
    h1, eri = random_integrals(4, seed=6)
    ham = SectorHamiltonian(h1, eri, 4, 2, 2)
    assert np.allclose(ham.diagonal(), np.diag(ham.dense()), atol=1e-12)


def test_davidson_matches_dense_eigenvalue():
    h1, eri = random_integrals(5, seed=7)
    e, v, basis = ground_state(h1, eri, 5, 2, 2, dense_cutoff=1)
    ref = np.linalg.eigvalsh(SectorHamiltonian(h1, eri, 5, 2, 2).dense())[0]
    assert e == pytest.approx(ref, abs=1e-9)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-10)


def test_h2_fci_matches_sidecar():
    H = read_fcidump("fixtures/h2/h2_sto-3g_1.400.fcidump")
    meta = load_sidecar("fixtures/h2/h2_sto-3g_1.400.fcidump")
    e, _, _ = ground_state(H.h1, H.eri, H.norb, 1, 1)
    assert e + H.e_core == pytest.approx(meta["e_fci"], abs=1e-8)


def test_dimension_cap():
    h1, eri = random_integrals(4, seed=8)
    with pytest.raises(DimensionCapError):
        ground_state(h1, eri, 4, 2, 2, dim_cap=10)


def test_ground_state_sign_convention_deterministic():
    h1, eri = random_integrals(4, seed=9)
    _, v1, _ = ground_state(h1, eri, 4, 2, 2)
    _, v2, _ = ground_state(h1, eri, 4, 2, 2)
    assert np.array_equal(v1, v2)
    assert v1[np.argmax(np.abs(v1))] > 0
