import math

import numpy as np
import pytest
from scipy.integrate import trapezoid
from scipy.linalg import expm

from src.core.exceptions import (
    ConfigValidationError,
    ExcitationOverflow,
    IllConditioned,
    NormViolation,
    NotConverged,
    StepTooLarge,
)
from src.core.providers.executor import SerialExecutor, ThreadedExecutor
from src.core.providers.generator import CallableGenerator
from src.model.operators import build_coupling, build_effective_hamiltonian
from src.model.schemas import SystemParams, TruncatedBasis
from src.multiphoton.collision import collision_model_norms
from src.multiphoton.fitting import fit_exponents
from src.multiphoton.propagator import compute_propagator, emission_operator, transition_matrix
from src.multiphoton.sectors import grid_norm, sector_norms, sector_wavefunctions, simplex_weights
from src.multiphoton.steady import steady_output_state, symmetrize_for_plot
from src.shared.base_schemas import TimeGrid
from src.single_excitation.analytic import analytic_single_excitation_state

from .factories import equal_params, random_params

MU_1 = -0.336506 + 3.79453j
MU_2 = -0.336506 - 1.01065j
MU_3 = -0.076987 + 1.39194j


def _ket(n_atoms: int, max_photons: int, ket: str) -> tuple[TruncatedBasis, np.ndarray]:
    basis = TruncatedBasis(n_atoms=n_atoms, max_cavity_photons=max_photons)
    return basis, basis.ket_vector(ket)


def _branches(state) -> dict[tuple[int, str], complex]:
    return {(b.photon_count, b.ket): b.amplitude for b in state.branches}


@pytest.fixture(scope="module")
def two_atoms_two_excitations():
    """Steady output of |e e 0> with two atoms."""
    _, eta0 = _ket(2, 2, "ee0")
    return steady_output_state(equal_params(2), eta0, 50.0, grid_step=0.01, value_stride=10)


# Propagator


def test_zero_generator_propagator_is_identity():
    prop = compute_propagator(np.zeros((4, 4)), TimeGrid(t_max=2.0, dt=0.1))
    assert prop.n_steps == 20
    assert np.array_equal(prop.values, np.broadcast_to(np.eye(4), prop.values.shape))


def test_constant_propagator_matches_matrix_exponential(rng):
    params = random_params(rng)
    basis = TruncatedBasis(n_atoms=params.n_atoms, max_cavity_photons=1)
    h_eff = build_effective_hamiltonian(params, basis).entries
    prop = compute_propagator(h_eff, TimeGrid(t_max=5.0, dt=0.01))
    for node in rng.integers(0, prop.n_steps + 1, size=10):
        expected = expm(-1j * h_eff * prop.times[node])
        assert np.max(np.abs(prop.values[node] - expected)) < 1e-8


def test_propagator_determinant_follows_trace():
    params = equal_params(2, kappa=1.3, omega=0.4)
    basis = TruncatedBasis(n_atoms=2, max_cavity_photons=1)
    h_eff = build_effective_hamiltonian(params, basis).entries
    prop = compute_propagator(h_eff, TimeGrid(t_max=3.0, dt=0.01))
    for node in (0, 57, 150, 300):
        expected = np.exp(-1j * np.trace(h_eff) * prop.times[node])
        assert abs(np.linalg.det(prop.values[node]) / expected - 1.0) < 1e-8


def _modulated_generator() -> tuple[np.ndarray, CallableGenerator]:
    basis = TruncatedBasis(n_atoms=1, max_cavity_photons=1)
    h0 = build_effective_hamiltonian(equal_params(1), basis).entries
    return h0, CallableGenerator(lambda t: (1.0 + 0.5 * math.sin(t)) * h0, basis.dimension)


def test_time_dependent_propagator():
    h0, generator = _modulated_generator()
    prop = compute_propagator(generator, TimeGrid(t_max=5.0, dt=0.005))
    assert not prop.is_constant
    for node in (0, 200, 555, 1000):
        t = prop.times[node]
        expected = expm(-1j * h0 * (t + 0.5 * (1.0 - math.cos(t))))
        assert np.max(np.abs(prop.values[node] - expected)) < 1e-8


def test_time_dependent_propagator_rejects_coarse_steps():
    _, generator = _modulated_generator()
    with pytest.raises(StepTooLarge):
        compute_propagator(generator, TimeGrid(t_max=5.0, dt=0.5))


# Transition matrices


@pytest.fixture
def constant_prop():
    params = equal_params(2, kappa=1.0, omega=0.3).model_copy(update={"gamma": (0.7, -1.1)})
    basis = TruncatedBasis(n_atoms=2, max_cavity_photons=1)
    h_eff = build_effective_hamiltonian(params, basis).entries
    return h_eff, compute_propagator(h_eff, TimeGrid(t_max=3.0, dt=0.01))


def test_transition_at_equal_times_is_identity(constant_prop):
    _, prop = constant_prop
    for t in (0.0, 1.3, 3.0):
        assert np.allclose(transition_matrix(prop, t, t).value, np.eye(prop.dimension), atol=1e-12, rtol=0)


def test_transition_composition(rng, constant_prop):
    _, prop = constant_prop
    for _ in range(20):
        t, tau, s = rng.integers(0, prop.n_steps + 1, size=3) * prop.dt
        left = transition_matrix(prop, t, tau).value @ transition_matrix(prop, tau, s).value
        assert np.max(np.abs(left - transition_matrix(prop, t, s).value)) < 1e-9


def test_transition_matches_matrix_exponential(constant_prop):
    h_eff, prop = constant_prop
    g = transition_matrix(prop, 2.0, 0.5)
    assert np.max(np.abs(g.value - expm(-1j * h_eff * 1.5))) < 1e-8


def test_transition_rejects_ill_conditioned_propagator():
    prop = compute_propagator(np.diag([0.0, -50.0j]), TimeGrid(t_max=1.0, dt=0.01))
    with pytest.raises(IllConditioned):
        transition_matrix(prop, 0.5, 1.0)


# Quadrature weights


def test_simplex_weights():
    nodes = np.array([[0, 0], [0, 1], [1, 1], [0, 2], [1, 2], [2, 2]])
    trapezoid_weights = simplex_weights(nodes, 2, 1.0, "trapezoid")
    assert trapezoid_weights.tolist() == [0.0, 0.5, 0.5, 0.25, 0.5, 0.25]
    assert trapezoid_weights.sum() == 2.0
    assert simplex_weights(nodes, 2, 1.0, "left").tolist() == [0.0, 1.0, 0.0, 0.0, 0.0, 0.0]
    single = simplex_weights(np.arange(4)[:, None], 3, 0.5, "trapezoid")
    assert single.tolist() == [0.25, 0.5, 0.5, 0.25]
    assert simplex_weights(np.zeros((1, 0), dtype=int), 5, 0.1).tolist() == [1.0]


def test_unknown_rule():
    with pytest.raises(ValueError):
        simplex_weights(np.zeros((1, 1), dtype=int), 1, 0.1, "midpoint")


# Sector amplitudes


def test_sectors_at_time_zero():
    _, eta0 = _ket(3, 1, "egg0")
    sectors = sector_wavefunctions(equal_params(3), eta0, 0.0, grid_step=0.01)
    assert len(sectors) == 2
    assert np.array_equal(sectors[0].full_values()[0], eta0)
    assert sectors[1].norm == 0.0
    assert sectors[1].values.size == 0


def test_sector_preconditions():
    _, eta0 = _ket(3, 1, "egg0")
    with pytest.raises(ExcitationOverflow):
        sector_wavefunctions(equal_params(3), eta0, 1.0, grid_step=0.01, max_k=2)
    with pytest.raises(NormViolation):
        sector_wavefunctions(equal_params(3), 2.0 * eta0, 1.0, grid_step=0.01)
    with pytest.raises(ConfigValidationError):
        sector_wavefunctions(equal_params(3), eta0, 1.0, grid_step=0.01, value_stride=3)
    _, eta0 = _ket(2, 2, "ee0")
    with pytest.raises(ConfigValidationError):
        sector_wavefunctions(equal_params(2), eta0, 20.0, grid_step=0.01)


def test_sectors_keep_excitation_ledger():
    basis, eta0 = _ket(3, 2, "gee0")
    params = equal_params(3)
    norms = sector_norms(params, eta0, 4.0, 0.01)
    excitations = basis.excitations()
    for k, rho in enumerate(norms.densities):
        outside = excitations != 2 - k
        assert np.max(np.abs(rho[outside])) < 1e-12
        assert np.max(np.abs(rho[:, outside])) < 1e-12
    for sector in sector_wavefunctions(params, eta0, 2.0, grid_step=0.01, norms=None):
        assert np.all(excitations[sector.support] == 2 - sector.photon_count)


@pytest.mark.parametrize("rule", ["trapezoid", "left"])
def test_density_recursion_is_the_simplex_quadrature(rule):
    _, eta0 = _ket(2, 2, "ee0")
    sectors = sector_wavefunctions(equal_params(2), eta0, 1.0, grid_step=0.01, rule=rule)
    for sector in sectors:
        assert grid_norm(sector) == pytest.approx(sector.norm, abs=1e-10)


def test_sector_norms_sum_to_one():
    _, eta0 = _ket(3, 2, "gee0")
    params = equal_params(3)
    trapezoid_run = sector_norms(params, eta0, 5.0, 0.01, "trapezoid", record_every=50)
    assert np.max(np.abs(trapezoid_run.total - 1.0)) < 2e-3

    left_error = [
        abs(sector_norms(params, eta0, 5.0, step, "left", record_every=10**6).total[-1] - 1.0)
        for step in (0.01, 0.005)
    ]
    assert abs(trapezoid_run.total[-1] - 1.0) < left_error[0]
    assert 1.8 < left_error[0] / left_error[1] < 2.2


def test_vacuum_sector_matches_closed_form():
    params = SystemParams(n_atoms=3, omega_r=-0.2, omega=(0.3,) * 3, gamma=(1.0, 0.5, -0.8), kappa=1.2)
    basis, eta0 = _ket(3, 1, "geg0")
    kets = ["egg0", "geg0", "gge0"]
    for i in range(0, 500, 10):
        t = 0.02 * i
        vacuum = sector_wavefunctions(params, eta0, t, grid_step=0.02, max_k=0)[0].full_values()[0]
        state = analytic_single_excitation_state(params, 2, t)
        for ket, c in zip(kets, state.c):
            assert abs(vacuum[basis.index_of(ket)]) == pytest.approx(abs(c), abs=1e-6)
        assert abs(vacuum[basis.index_of("ggg1")]) == pytest.approx(abs(state.c_cavity), abs=1e-6)


def test_emitted_photon_follows_cavity_amplitude():
    params = SystemParams(n_atoms=3, omega_r=-0.2, omega=(0.3,) * 3, gamma=(1.0, 0.5, -0.8), kappa=1.2)
    _, eta0 = _ket(3, 1, "geg0")
    sector = sector_wavefunctions(params, eta0, 6.0, grid_step=0.02)[1]
    emitted = np.abs(sector.component(0))
    for node, t1 in zip(sector.nodes[:, 0], sector.times[:, 0]):
        cavity = abs(analytic_single_excitation_state(params, 2, t1, phi_points=2).c_cavity)
        assert emitted[node] == pytest.approx(math.sqrt(params.kappa) * cavity, abs=1e-6)


def test_emission_operator_recursion():
    params = equal_params(2)
    basis, eta0 = _ket(2, 2, "ee0")
    sectors = sector_wavefunctions(params, eta0, 3.0, grid_step=0.01, value_stride=10)
    h_eff = build_effective_hamiltonian(params, basis).entries
    l = build_coupling(params, basis).entries
    prop = compute_propagator(h_eff, TimeGrid(t_max=3.0, dt=0.1))

    vacuum = sectors[0].full_values()[0]
    for node in (0, 7, 18, 30):
        expected = sectors[1].value_at((node,))
        assert np.max(np.abs(emission_operator(prop, l, 3.0, 0.1 * node) @ vacuum - expected)) < 1e-8
    for first, second in ((0, 0), (3, 11), (12, 12), (5, 30)):
        one_photon = sectors[1].value_at((first,))
        expected = sectors[2].value_at((first, second))
        actual = emission_operator(prop, l, 3.0, 0.1 * second) @ one_photon
        assert np.max(np.abs(actual - expected)) < 1e-8


def test_threaded_sectors_match_serial():
    _, eta0 = _ket(3, 2, "gee0")
    params = equal_params(3)
    serial = sector_wavefunctions(params, eta0, 2.0, grid_step=0.01, executor=SerialExecutor())
    threaded = sector_wavefunctions(params, eta0, 2.0, grid_step=0.01, executor=ThreadedExecutor(4))
    for a, b in zip(serial, threaded):
        assert np.array_equal(a.nodes, b.nodes)
        assert np.array_equal(a.values, b.values)


# Steady output states


def test_single_excitation_steady_output():
    basis, eta0 = _ket(3, 1, "egg0")
    state = steady_output_state(equal_params(3), eta0, 50.0, grid_step=0.01, value_stride=10)
    branches = _branches(state)
    assert branches[(0, "egg0")] == pytest.approx(2.0 / 3.0, abs=1e-3)
    assert branches[(0, "geg0")] == pytest.approx(-1.0 / 3.0, abs=1e-3)
    assert branches[(0, "gge0")] == pytest.approx(-1.0 / 3.0, abs=1e-3)
    assert state.sector_norms[1] == pytest.approx(1.0 / 3.0, abs=1e-3)
    assert state.cavity_residual < 1e-4

    emitted = state.sectors[1]
    t1 = emitted.times[:, 0]
    closed_form = 4.0 / math.sqrt(47.0) * np.exp(-0.25 * t1) * np.abs(np.sin(math.sqrt(47.0) * t1 / 4.0))
    assert np.max(np.abs(np.abs(emitted.component(basis.index_of("ggg0"))) - closed_form)) < 1e-6


def test_two_excitations_leave_two_photons(two_atoms_two_excitations):
    state = two_atoms_two_excitations
    assert state.sector_norms[2] == pytest.approx(1.0, abs=1e-3)
    assert state.system_excitation < 1e-3
    assert [(b.photon_count, b.ket) for b in state.branches] == [(2, "gg0")]
    assert state.branches[0].probability == pytest.approx(1.0, abs=1e-3)


def test_two_photon_pulse_exponents(two_atoms_two_excitations):
    pair = two_atoms_two_excitations.sectors[2]
    rows = pair.nodes[:, 1] == 100
    samples = pair.component(0)[rows]
    assert len(samples) == 101
    exponents = fit_exponents(samples, pair.value_step, 6)
    for mu in (MU_1, MU_2, MU_3):
        assert np.min(np.abs(exponents - mu)) < 1e-3
    assert np.min(np.abs(exponents - np.conj(MU_1))) < 1e-3


def test_symmetric_two_photon_density(two_atoms_two_excitations):
    pulse = symmetrize_for_plot(two_atoms_two_excitations.sectors[2])
    assert pulse.system_index == 0
    assert np.array_equal(pulse.amplitude, pulse.amplitude.T)
    h = pulse.axis[1] - pulse.axis[0]
    integral = trapezoid(trapezoid(pulse.density, dx=h, axis=1), dx=h)
    assert integral == pytest.approx(1.0, abs=2e-3)


def test_symmetrize_needs_two_photons(two_atoms_two_excitations):
    with pytest.raises(ValueError):
        symmetrize_for_plot(two_atoms_two_excitations.sectors[1])


def test_mixed_output_amplitudes():
    _, eta0 = _ket(3, 2, "gee0")
    state = steady_output_state(equal_params(3), eta0, 50.0, grid_step=0.01, value_stride=10)
    branches = _branches(state)
    assert set(branches) == {(1, "egg0"), (1, "geg0"), (1, "gge0"), (2, "ggg0")}
    assert branches[(1, "egg0")].real == pytest.approx(2.0 / 3.0, abs=1e-3)
    assert branches[(1, "geg0")].real == pytest.approx(1.0 / 3.0, abs=1e-3)
    assert branches[(1, "gge0")].real == pytest.approx(1.0 / 3.0, abs=1e-3)
    assert branches[(2, "ggg0")].real == pytest.approx(math.sqrt(3.0) / 3.0, abs=1e-3)
    assert state.sectors[1].basis.index_of("egg0") == 12

    pulses = {b.ket: b.pulse for b in state.branches if b.photon_count == 1}
    assert np.max(np.abs(pulses["geg0"] + pulses["egg0"])) < 1e-4
    assert np.max(np.abs(pulses["gge0"] - pulses["geg0"])) < 1e-6


@pytest.mark.slow
def test_three_excitations_leave_three_photons():
    _, eta0 = _ket(3, 3, "eee0")
    state = steady_output_state(equal_params(3), eta0, 50.0, grid_step=0.01, value_stride=100)
    assert state.sector_norms[3] == pytest.approx(1.0, abs=3e-3)
    assert state.system_excitation < 1e-3
    assert state.sectors[3].n_nodes == 51


def test_unsettled_output_is_rejected():
    _, eta0 = _ket(3, 1, "egg0")
    with pytest.raises(NotConverged):
        steady_output_state(equal_params(3), eta0, 5.0, grid_step=0.01)


# Time-bin oracle


def test_collision_model_agrees_with_sector_norms():
    params = SystemParams(n_atoms=1, omega=(0.0,), gamma=(1.0,), kappa=1.0)
    _, eta0 = _ket(1, 2, "e1")
    bins = collision_model_norms(params, eta0, 3.0, 0.05)
    recursion = sector_norms(params, eta0, 3.0, 0.01, record_every=5)
    assert np.allclose(bins.times, recursion.times)
    assert np.max(np.abs(bins.total - 1.0)) < 1e-12
    assert np.max(np.abs(bins.norms - recursion.norms)) < 1e-2
    assert recursion.norms[-1, 2] > 0.1
