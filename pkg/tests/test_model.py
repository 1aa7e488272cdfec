import numpy as np
import pytest
from pydantic import ValidationError

from src.core.exceptions import DimensionMismatch
from src.model.operators import (
    build_coupling,
    build_effective_hamiltonian,
    build_excitation_operator,
    build_hamiltonian,
    ground_state,
)
from src.model.schemas import SystemParams, TruncatedBasis

from .factories import equal_params, random_params


def test_params_reject_length_mismatch():
    with pytest.raises(ValidationError):
        SystemParams(n_atoms=2, omega=(0.0,), gamma=(1.0, 1.0), kappa=1.0)


def test_params_reject_negative_kappa():
    with pytest.raises(ValidationError):
        SystemParams(n_atoms=1, omega=(0.0,), gamma=(1.0,), kappa=-1.0)


def test_gamma_bar_is_rms_coupling():
    params = SystemParams(n_atoms=2, omega=(0.0, 0.0), gamma=(1.0, -3.0), kappa=1.0)
    assert params.gamma_bar == pytest.approx(np.sqrt(5.0))


def test_basis_codec_round_trip():
    basis = TruncatedBasis(n_atoms=3, max_cavity_photons=2)
    assert basis.dimension == 2**3 * 3
    for index in range(basis.dimension):
        assert basis.encode(*basis.decode(index)) == index


def test_ket_labels():
    basis = TruncatedBasis(n_atoms=3, max_cavity_photons=1)
    assert basis.index_of("egg0") == 4 * 2
    assert basis.index_of("gge1") == 1 * 2 + 1
    assert basis.label(basis.index_of("geg1")) == "geg1"
    with pytest.raises(ValueError):
        basis.index_of("eg5")
    with pytest.raises(ValueError):
        basis.index_of("exg0")


def test_excitations_count_atoms_and_photons():
    basis = TruncatedBasis(n_atoms=2, max_cavity_photons=2)
    assert basis.excitations()[basis.index_of("ee2")] == 4
    assert basis.excitations()[basis.index_of("ge1")] == 2


def test_dimension_mismatch():
    params = equal_params(2)
    with pytest.raises(DimensionMismatch):
        build_hamiltonian(params, TruncatedBasis(n_atoms=3, max_cavity_photons=1))


def test_resonant_jaynes_cummings_block():
    params = SystemParams(n_atoms=1, omega_r=0.0, omega=(0.0,), gamma=(1.0,), kappa=1.0)
    basis = TruncatedBasis(n_atoms=1, max_cavity_photons=1)
    h = build_hamiltonian(params, basis).entries
    e0, g1 = basis.index_of("e0"), basis.index_of("g1")
    assert h[g1, e0] == pytest.approx(1.0)
    assert h[e0, g1] == pytest.approx(1.0)
    off = h.copy()
    off[g1, e0] = off[e0, g1] = 0.0
    assert np.max(np.abs(off)) < 1e-15


def test_hamiltonian_is_hermitian(rng):
    for _ in range(20):
        params = random_params(rng)
        basis = TruncatedBasis(n_atoms=params.n_atoms, max_cavity_photons=2)
        h = build_hamiltonian(params, basis).entries
        assert np.max(np.abs(h - h.conj().T)) < 1e-14


def test_two_atom_single_excitation_block():
    params = equal_params(2, gamma=1.0, omega=1.0, omega_r=1.0)
    basis = TruncatedBasis(n_atoms=2, max_cavity_photons=1)
    h = build_hamiltonian(params, basis).entries
    block = [basis.index_of(k) for k in ("eg0", "ge0", "gg1")]
    sub = h[np.ix_(block, block)]
    shift = np.mean(np.diag(sub).real)
    eigenvalues = np.sort(np.linalg.eigvalsh(sub)) - shift
    assert np.allclose(np.diag(sub).real, shift)
    assert np.allclose(eigenvalues, [-np.sqrt(2.0), 0.0, np.sqrt(2.0)], atol=1e-12)


def test_coupling_ladder():
    basis = TruncatedBasis(n_atoms=1, max_cavity_photons=3)
    params = SystemParams(n_atoms=1, omega=(0.0,), gamma=(1.0,), kappa=1.0)
    coupling = build_coupling(params, basis).entries
    for n in (1, 2, 3):
        assert coupling[basis.index_of(f"g{n - 1}"), basis.index_of(f"g{n}")] == pytest.approx(np.sqrt(n))
    assert np.count_nonzero(coupling) == 6
    zero = build_coupling(params.with_kappa(0.0), basis).entries
    assert not np.any(zero)


def test_effective_hamiltonian_loss_spectrum():
    params = SystemParams(n_atoms=2, omega_r=0.3, omega=(0.1, -0.4), gamma=(1.0, 0.5), kappa=0.7)
    basis = TruncatedBasis(n_atoms=2, max_cavity_photons=2)
    h_eff = build_effective_hamiltonian(params, basis).entries
    loss = (h_eff - h_eff.conj().T) / -1j
    eigenvalues = np.sort(np.linalg.eigvalsh(loss))
    expected = np.sort(np.repeat(params.kappa * np.arange(3), 2**2))
    assert np.allclose(eigenvalues, expected, atol=1e-13)
    undamped = build_effective_hamiltonian(params.with_kappa(0.0), basis).entries
    assert np.allclose(undamped, build_hamiltonian(params.with_kappa(0.0), basis).entries)


def test_effective_hamiltonian_single_excitation_eigenvalues():
    params = SystemParams(n_atoms=1, omega_r=0.0, omega=(0.0,), gamma=(1.0,), kappa=1.0)
    basis = TruncatedBasis(n_atoms=1, max_cavity_photons=1)
    h_eff = build_effective_hamiltonian(params, basis).entries
    block = [basis.index_of("e0"), basis.index_of("g1")]
    eigenvalues = np.linalg.eigvals(h_eff[np.ix_(block, block)])
    expected = np.roots([1.0, 0.5j, -1.0])
    assert np.allclose(np.sort_complex(eigenvalues), np.sort_complex(expected), atol=1e-12)
    assert np.allclose(np.sort_complex(expected), np.sort_complex([-np.sqrt(15) / 4 - 0.25j, np.sqrt(15) / 4 - 0.25j]))


def test_excitation_number_is_conserved(rng):
    for _ in range(10):
        params = random_params(rng)
        basis = TruncatedBasis(n_atoms=params.n_atoms, max_cavity_photons=2)
        h = build_hamiltonian(params, basis).entries
        number = build_excitation_operator(basis).entries
        assert np.max(np.abs(h @ number - number @ h)) < 1e-13


def test_ground_state_is_first_index():
    basis = TruncatedBasis(n_atoms=2, max_cavity_photons=1)
    assert basis.label(int(np.argmax(np.abs(ground_state(basis))))) == "gg0"
