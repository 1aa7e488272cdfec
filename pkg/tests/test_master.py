import math

import numpy as np
import pytest

from src.core.exceptions import DimensionMismatch, NonConvergence, StepTooLarge
from src.master.hierarchy import integrate_fock_master, integrate_vacuum_master, steady_state
from src.master.lindblad import LindbladGenerator, lindblad_rhs
from src.master.reduce import (
    excitation_probabilities,
    ground_fidelity,
    reduce_to_atom,
    reduce_to_atom1,
    traces,
)
from src.model.operators import build_coupling, build_hamiltonian, product_state
from src.model.schemas import SystemParams, TruncatedBasis
from src.shared.base_schemas import TimeGrid
from src.single_excitation.analytic import analytic_single_excitation_state
from src.single_excitation.pulses import gaussian_pulse
from src.single_excitation.schemas import PulseShape

from .factories import equal_params, random_params


def _random_density(rng: np.random.Generator, dim: int, n_states: int = 3) -> np.ndarray:
    weights = rng.dirichlet(np.ones(n_states))
    rho = np.zeros((dim, dim), dtype=complex)
    for w in weights:
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        psi /= np.linalg.norm(psi)
        rho += w * np.outer(psi, psi.conj())
    return rho


def _operators(params: SystemParams, basis: TruncatedBasis) -> tuple[np.ndarray, np.ndarray]:
    return build_hamiltonian(params, basis).entries, build_coupling(params, basis).entries


# Generator


def test_ground_state_is_stationary(detuned_trio):
    basis = TruncatedBasis(n_atoms=3, max_cavity_photons=2)
    h, l = _operators(detuned_trio, basis)
    rhs = lindblad_rhs(product_state(basis, "ggg0"), h, l)
    assert abs(np.trace(rhs)) < 1e-15
    assert np.max(np.abs(rhs)) < 1e-15


def test_generator_preserves_trace(rng):
    for _ in range(100):
        params = random_params(rng)
        basis = TruncatedBasis(n_atoms=params.n_atoms, max_cavity_photons=2)
        h, l = _operators(params, basis)
        rho = _random_density(rng, basis.dimension)
        assert abs(np.trace(lindblad_rhs(rho, h, l))) < 1e-13


def test_jaynes_cummings_coherence_growth():
    params = SystemParams(n_atoms=1, omega=(0.0,), gamma=(1.0,), kappa=1.0)
    basis = TruncatedBasis(n_atoms=1, max_cavity_photons=1)
    h, l = _operators(params, basis)
    rhs = lindblad_rhs(product_state(basis, "e0"), h, l)
    excited, cavity = basis.index_of("e0"), basis.index_of("g1")
    assert abs(rhs[excited, excited]) < 1e-15
    assert rhs[excited, cavity] == pytest.approx(1j)
    assert rhs[cavity, excited] == pytest.approx(-1j)
    assert np.count_nonzero(np.abs(rhs) > 1e-15) == 2


def test_generator_on_stacks_matches_single_matrices(rng):
    params = random_params(rng)
    basis = TruncatedBasis(n_atoms=params.n_atoms, max_cavity_photons=1)
    generator = LindbladGenerator.from_params(params, basis)
    stack = np.stack([_random_density(rng, basis.dimension) for _ in range(3)])
    together = generator(stack)
    for rho, expected in zip(stack, together):
        assert np.allclose(generator(rho), expected, atol=1e-14)


def test_generator_dimension_mismatch():
    h = np.eye(4)
    with pytest.raises(DimensionMismatch):
        lindblad_rhs(np.eye(3), h, h)
    with pytest.raises(DimensionMismatch):
        lindblad_rhs(np.eye(4), h, np.eye(3))


# Reduced states


def test_reduce_product_state():
    basis = TruncatedBasis(n_atoms=3, max_cavity_photons=1)
    rho = product_state(basis, "egg0")
    assert np.allclose(reduce_to_atom1(rho, basis), [[1.0, 0.0], [0.0, 0.0]])
    rho = product_state(basis, "geg1")
    assert np.allclose(reduce_to_atom(rho, basis, 1), [[0.0, 0.0], [0.0, 1.0]])
    assert np.allclose(reduce_to_atom(rho, basis, 2), [[1.0, 0.0], [0.0, 0.0]])
    assert np.allclose(reduce_to_atom(rho, basis, 3), [[0.0, 0.0], [0.0, 1.0]])


def test_reduce_maximally_mixed():
    basis = TruncatedBasis(n_atoms=3, max_cavity_photons=1)
    rho = np.eye(basis.dimension) / basis.dimension
    assert np.allclose(reduce_to_atom1(rho, basis), 0.5 * np.eye(2))


def test_reduce_random_states(rng):
    basis = TruncatedBasis(n_atoms=2, max_cavity_photons=2)
    for _ in range(100):
        rho = _random_density(rng, basis.dimension)
        for atom in (1, 2):
            reduced = reduce_to_atom(rho, basis, atom)
            assert np.trace(reduced).real == pytest.approx(1.0, abs=1e-12)
            assert np.max(np.abs(reduced - reduced.conj().T)) < 1e-12
            assert np.linalg.eigvalsh(reduced)[0] > -1e-12
            assert reduced[0, 0].real == pytest.approx(excitation_probabilities(rho, basis)[atom - 1], abs=1e-12)


def test_reduce_rejects_bad_atom():
    basis = TruncatedBasis(n_atoms=2, max_cavity_photons=0)
    with pytest.raises(DimensionMismatch):
        reduce_to_atom(np.eye(4), basis, 3)


# Vacuum master equation


def test_ground_trajectory_is_constant(detuned_trio):
    basis = TruncatedBasis(n_atoms=3, max_cavity_photons=1)
    rho0 = product_state(basis, "ggg0")
    trajectory = integrate_vacuum_master(detuned_trio, rho0, TimeGrid(t_max=5.0, dt=0.01))
    assert np.max(np.abs(trajectory.states - rho0)) < 1e-15


def test_single_excitation_decay_to_dark_share(detuned_trio):
    basis = TruncatedBasis(n_atoms=3, max_cavity_photons=1)
    grid = TimeGrid(t_max=40.0, dt=0.005 / detuned_trio.kappa)
    trajectory = integrate_vacuum_master(detuned_trio, product_state(basis, "egg0"), grid, record_every=100)
    assert np.max(np.abs(traces(trajectory.states) - 1.0)) < 1e-8
    assert trajectory.halving_change < 1e-6
    final = excitation_probabilities(trajectory.states[-1], basis)
    assert final == pytest.approx([4.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0], abs=1e-3)
    state = trajectory.final
    assert state.hermiticity_error < 1e-10
    assert state.min_eigenvalue > -1e-7


def test_master_equation_agrees_with_closed_form(detuned_trio):
    basis = TruncatedBasis(n_atoms=3, max_cavity_photons=1)
    grid = TimeGrid(t_max=20.0, dt=0.02 / 6.0)
    trajectory = integrate_vacuum_master(
        detuned_trio, product_state(basis, "egg0"), grid, record_every=12, check_step=False
    )
    assert len(trajectory.times) == 501
    populations = excitation_probabilities(trajectory.states, basis)[:, 0]
    closed_form = [abs(analytic_single_excitation_state(detuned_trio, 1, t).c[0]) ** 2 for t in trajectory.times]
    assert np.max(np.abs(populations - closed_form)) < 1e-5


def test_all_excited_ensemble_relaxes_to_ground():
    params = equal_params(2)
    basis = TruncatedBasis(n_atoms=2, max_cavity_photons=2)
    trajectory = integrate_vacuum_master(
        params, product_state(basis, "ee0"), TimeGrid(t_max=50.0, dt=0.005), record_every=1000
    )
    assert ground_fidelity(trajectory.states[-1]) > 1.0 - 1e-6


def test_unequal_couplings_trap_excitation():
    params = SystemParams(n_atoms=3, omega=(0.0,) * 3, gamma=(1.0, 1.5, 2.0), kappa=1.0)
    basis = TruncatedBasis(n_atoms=3, max_cavity_photons=3)
    trajectory = integrate_vacuum_master(
        params, product_state(basis, "eee0"), TimeGrid(t_max=50.0, dt=0.005), record_every=1000, check_step=False
    )
    assert np.sum(excitation_probabilities(trajectory.states[-1], basis)) > 0.01
    assert abs(traces(trajectory.states[-1]) - 1.0) < 1e-8


def test_step_too_large():
    params = equal_params(2, gamma=5.0)
    basis = TruncatedBasis(n_atoms=2, max_cavity_photons=1)
    with pytest.raises(StepTooLarge):
        integrate_vacuum_master(params, product_state(basis, "eg0"), TimeGrid(t_max=5.0, dt=0.25))


def test_initial_state_must_fit_basis(detuned_trio):
    with pytest.raises(DimensionMismatch):
        integrate_vacuum_master(detuned_trio, np.eye(12), TimeGrid(t_max=1.0, dt=0.01))


# Fock-state hierarchy


def test_hierarchy_without_photon_is_vacuum_equation(detuned_trio):
    basis = TruncatedBasis(n_atoms=3, max_cavity_photons=1)
    grid = TimeGrid(t_max=10.0, dt=0.005)
    rho0 = product_state(basis, "egg0")
    silent = PulseShape(t_start=0.0, dt=0.01, values=np.zeros(1001))
    driven = integrate_fock_master(detuned_trio, silent, rho0, grid, record_every=50, check_step=False)
    vacuum = integrate_vacuum_master(detuned_trio, rho0, grid, record_every=50, check_step=False)
    assert np.max(np.abs(driven.rho11 - vacuum.states)) < 1e-10
    assert np.max(np.abs(driven.rho00 - vacuum.states)) < 1e-10
    assert np.max(np.abs(driven.rho10)) == 0.0


def test_photon_does_not_change_steady_excitation(detuned_trio):
    basis = TruncatedBasis(n_atoms=3, max_cavity_photons=2)
    grid = TimeGrid(t_max=40.0, dt=0.005 / detuned_trio.kappa)
    xi = gaussian_pulse(2.0 * detuned_trio.kappa, 3.0, TimeGrid(t_min=0.0, t_max=40.0, dt=0.001))
    trajectory = integrate_fock_master(detuned_trio, xi, product_state(basis, "egg0"), grid, record_every=200)
    rho11 = trajectory.rho11
    assert np.max(np.abs(traces(rho11) - 1.0)) < 1e-8
    assert np.max(np.abs(traces(trajectory.rho00) - 1.0)) < 1e-8
    assert np.max(np.abs(trajectory.rho01 - np.conj(np.swapaxes(trajectory.rho10, -1, -2)))) < 1e-12
    final = excitation_probabilities(rho11[-1], basis)
    assert final == pytest.approx([4.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0], abs=1e-3)


def test_photon_excites_ground_ensemble_transiently(detuned_trio):
    basis = TruncatedBasis(n_atoms=3, max_cavity_photons=1)
    grid = TimeGrid(t_max=30.0, dt=0.005 / detuned_trio.kappa)
    xi = gaussian_pulse(3.0, 3.0, TimeGrid(t_min=0.0, t_max=30.0, dt=0.001))
    trajectory = integrate_fock_master(detuned_trio, xi, product_state(basis, "ggg0"), grid, record_every=10)
    population = excitation_probabilities(trajectory.rho11, basis)[:, 0]
    assert population[0] == 0.0
    assert trajectory.times[np.argmax(population)] > 3.0
    assert np.max(population) > 0.01
    assert population[-1] < 1e-3


# Steady states


@pytest.mark.parametrize("n_atoms", [1, 2, 3])
def test_all_excited_steady_state_is_ground(n_atoms):
    params = equal_params(n_atoms)
    basis = TruncatedBasis(n_atoms=n_atoms, max_cavity_photons=n_atoms)
    result = steady_state(params, product_state(basis, "e" * n_atoms + "0"))
    rho = np.asarray(result.state.entries)
    assert ground_fidelity(rho) > 1.0 - 1e-5
    assert np.max(np.abs(rho - product_state(basis, "g" * n_atoms + "0"))) < 1e-6
    assert result.residual < 1e-10


def test_ground_steady_state_is_immediate(detuned_trio):
    basis = TruncatedBasis(n_atoms=3, max_cavity_photons=1)
    result = steady_state(detuned_trio, product_state(basis, "ggg0"))
    assert result.t_reached == 0.0
    assert result.residual < 1e-14


def test_oscillating_coherence_never_settles():
    params = SystemParams(n_atoms=1, omega=(1.0,), gamma=(0.0,), kappa=1.0)
    basis = TruncatedBasis(n_atoms=1, max_cavity_photons=0)
    psi = (basis.ket_vector("e0") + basis.ket_vector("g0")) / math.sqrt(2.0)
    with pytest.raises(NonConvergence):
        steady_state(params, np.outer(psi, psi.conj()))
