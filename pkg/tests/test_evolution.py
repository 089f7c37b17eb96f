"""
Тесты эволюции: сетка времени, выбор пика, унитарная эволюция по секторам
заряда и уравнение Линдблада.
"""
import numpy as np
import pytest

from modules.core.errors import ConfigError, TruncationError
from modules.evolution import (
    ChargeTruncation,
    EnsembleTrajectory,
    ShellDecomposition,
    TimeGrid,
    first_peak,
    iter_unitary_evolve,
    lindblad_evolve,
    unitary_evolve,
)
from modules.fock import FockSpace, StatePrep, StateVector, ThermalEnsemble, prepare, reduce
from modules.hamiltonians import HamiltonianSpec, LindbladSpec, build, conserved_charge, jump_operators


@pytest.fixture
def degenerate_pair():
    space = FockSpace((3, 5), ("a", "b"))
    spec = HamiltonianSpec.degenerate_trilinear()
    return space, build(spec, space), conserved_charge(spec, space)


@pytest.fixture
def thermal_aux_triple():
    """aux_linear на (4, 7, 7) и тепловая накачка из четырёх компонент."""
    space = FockSpace((4, 7, 7), ("a", "b", "c"))
    spec = HamiltonianSpec.aux_linear(1.0)
    init = prepare(space, {"a": StatePrep.thermal(0.3)}, eps_tail=1e-2)
    return build(spec, space), conserved_charge(spec, space), init


class TestTimeGrid:
    def test_uniform_nodes(self):
        grid = TimeGrid.uniform(1.0, 0.1)
        assert len(grid) == 11
        assert grid[3] == pytest.approx(0.3)
        assert grid.end == pytest.approx(1.0)

    @pytest.mark.parametrize("taus", [[], [0.2, 0.1], [-0.1, 0.5], [0.0, np.nan]])
    def test_rejects_bad_taus(self, taus):
        with pytest.raises(ConfigError):
            TimeGrid(np.array(taus))

    def test_rejects_bad_step(self):
        with pytest.raises(ConfigError):
            TimeGrid.uniform(1.0, 0.0)


class TestFirstPeak:
    def test_sine_peak_refined(self):
        taus = np.arange(0.0, 3.0, 0.01)
        peak = first_peak(taus, np.sin(taus))
        assert peak.interior
        assert peak.tau == pytest.approx(np.pi / 2, abs=1e-3)
        assert peak.value == pytest.approx(1.0, abs=1e-4)

    def test_first_of_two_peaks(self):
        taus = np.linspace(0.0, 10.0, 1001)
        values = np.sin(taus) ** 2 * np.exp(0.1 * taus)
        peak = first_peak(taus, values)
        assert peak.tau < 2.0

    def test_monotonic_series_has_no_interior_peak(self):
        taus = np.linspace(0.0, 1.0, 11)
        peak = first_peak(taus, taus ** 2)
        assert not peak.interior
        assert peak.tau == pytest.approx(1.0)

    def test_plateau_takes_earliest_point(self):
        peak = first_peak([0.0, 1.0, 2.0, 3.0, 4.0], [0.0, 1.0, 1.0, 0.5, 0.0])
        assert peak.tau == pytest.approx(1.0)
        assert peak.interior

    def test_noise_below_floor_ignored(self):
        taus = np.linspace(0.0, 1.0, 6)
        values = [0.0, 1e-12, 0.0, 0.5, 1.0, 0.2]
        peak = first_peak(taus, values, noise_floor=1e-9)
        assert peak.index == 4

    def test_short_series(self):
        with pytest.raises(ValueError):
            first_peak([0.0, 1.0], [0.0, 1.0])


class TestUnitary:
    def test_single_pump_quantum_oscillates(self, degenerate_pair):
        space, h, charge = degenerate_pair
        init = ThermalEnsemble.pure(StateVector.basis(space, (1, 0)))
        taus = np.linspace(0.0, 2.0, 9)
        target = space.flat_index((0, 2))
        for tau, ensemble in zip(taus, unitary_evolve(h, init, TimeGrid(taus), charge)):
            population = abs(ensemble.states[0].dense()[target]) ** 2
            assert population == pytest.approx(np.sin(np.sqrt(2.0) * tau) ** 2, abs=1e-10)

    def test_charge_is_conserved(self, degenerate_pair):
        space, h, charge = degenerate_pair
        init = prepare(space, {"a": StatePrep.thermal(0.2)}, eps_tail=1e-2)
        values = np.real(charge.dense().diagonal())
        start = init.diagonal_expectation(values)
        for _, ensemble in iter_unitary_evolve(h, init, TimeGrid.uniform(3.0, 0.5), charge):
            assert ensemble.diagonal_expectation(values) == pytest.approx(start, abs=1e-10)

    def test_trajectory_can_go_back_in_time(self, degenerate_pair):
        space, h, charge = degenerate_pair
        init = prepare(space, {"a": StatePrep.fock(2)})
        trajectory = EnsembleTrajectory(h, init, charge)
        trajectory.at(1.7)
        back = trajectory.at(0.3).states[0].dense()
        fresh = EnsembleTrajectory(h, init, charge).at(0.3).states[0].dense()
        assert back == pytest.approx(fresh, abs=1e-12)

    def test_ensemble_matches_density_matrix_evolution(self, thermal_aux_triple):
        h, charge, init = thermal_aux_triple
        assert len(init.components) == 4
        rho0 = init.to_density_matrix(sparse=False)
        shells = ShellDecomposition(h, charge)
        trajectory = EnsembleTrajectory(h, init, charge)
        for tau in (0.4, 1.1, 2.5):
            expected = shells.propagate_density(rho0, tau).dense()
            evolved = trajectory.at(tau).to_density_matrix(sparse=False).dense()
            assert evolved == pytest.approx(expected, abs=1e-10)

    def test_large_sectors_use_krylov_steps(self, thermal_aux_triple):
        h, charge, init = thermal_aux_triple
        dense = EnsembleTrajectory(h, init, charge)
        stepped = EnsembleTrajectory(h, init, charge, max_dense_sector=1)
        assert any(not sector.diagonalised for sector in stepped.shells.sectors)
        for tau in (0.4, 1.1, 2.5):
            expected = dense.at(tau).to_density_matrix(sparse=False).dense()
            assert stepped.at(tau).to_density_matrix(sparse=False).dense() == pytest.approx(expected, abs=1e-9)

    def test_leak_without_charge(self):
        space = FockSpace((3, 3), ("a", "b"))
        h = build(HamiltonianSpec.degenerate_trilinear(), space)
        init = ThermalEnsemble.pure(StateVector.basis(space, (1, 0)))
        with pytest.raises(TruncationError):
            unitary_evolve(h, init, TimeGrid.uniform(1.0, 0.1))


class TestLindblad:
    def test_single_mode_decay(self):
        space = FockSpace((3,), ("a",))
        h = build(HamiltonianSpec.free_motion(0.0, ("a",)), space)
        jumps = jump_operators(LindbladSpec({"a": 0.5}), space)
        rho0 = ThermalEnsemble.pure(StateVector.basis(space, (1,))).to_density_matrix(sparse=False)
        taus = np.array([0.0, 0.5, 1.0, 2.0])
        for tau, rho in zip(taus, lindblad_evolve(h, jumps, rho0, TimeGrid(taus))):
            assert rho.diagonal()[1] == pytest.approx(np.exp(-0.5 * tau), abs=1e-6)
            assert rho.trace() == pytest.approx(1.0, abs=1e-10)

    def test_thermal_bath_steady_state(self):
        space = FockSpace((25,), ("a",))
        h = build(HamiltonianSpec.free_motion(0.0, ("a",)), space)
        jumps = jump_operators(LindbladSpec({"a": 1.0}, nbar_th=0.3), space)
        rho0 = ThermalEnsemble.pure(StateVector.basis(space, (0,))).to_density_matrix(sparse=False)
        (rho,) = lindblad_evolve(h, jumps, rho0, TimeGrid.single(20.0), step=0.05)
        mean = float(np.arange(25) @ rho.diagonal())
        assert mean == pytest.approx(0.3, abs=1e-5)

    def test_closed_system_matches_unitary(self, degenerate_pair):
        space, h, charge = degenerate_pair
        init = prepare(space, {"a": StatePrep.thermal(0.2)}, eps_tail=1e-2)
        grid = TimeGrid(np.array([0.5, 1.0]))
        unitary = unitary_evolve(h, init, grid, charge)
        open_ = lindblad_evolve(h, [], init.to_density_matrix(sparse=True), grid)
        for ensemble, rho in zip(unitary, open_):
            expected = ensemble.to_density_matrix(sparse=False).dense()
            assert rho.dense() == pytest.approx(expected, abs=1e-6)

    def test_charge_truncation_restricts_and_embeds(self, degenerate_pair):
        space, h, charge = degenerate_pair
        truncation = ChargeTruncation(space, [(2, 1)], [2])
        # n_b <= 2 при n_a = 0 и n_b = 0 при n_a = 1
        assert truncation.dim == 4
        jumps = jump_operators(LindbladSpec({"b": 0.2}), space)
        rho0 = prepare(space, {"a": StatePrep.fock(1)}, as_density=True)
        (rho,) = lindblad_evolve(h, jumps, rho0, TimeGrid.single(1.0), truncation=truncation)
        assert rho.space == space
        assert rho.trace() == pytest.approx(1.0, abs=1e-8)
        reduced_b = reduce(rho, ["b"], check=False).diagonal()
        assert reduced_b[3:] == pytest.approx(0.0)
