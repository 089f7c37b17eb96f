"""
Тесты мер запутанности и неклассичности.
"""
import math

import numpy as np
import pytest
import scipy.linalg as la

from modules.core.errors import InvalidModeError, NonPhysicalStateError, TruncationError
from modules.evolution import TimeGrid, unitary_evolve
from modules.fock import DensityMatrix, FockSpace, StatePrep, ThermalEnsemble, moments, prepare, reduce
from modules.hamiltonians import HamiltonianSpec, build, conserved_charge
from modules.measures import (
    CovarianceMatrix,
    PhononDistribution,
    covariance,
    default_grid,
    entanglement_potential,
    gaussian_log_negativity,
    klyshko,
    log_negativity,
    phonon_distribution,
    quadrature_pdf,
    squeezed_vacuum,
    squeezed_vacuum_ep,
    wigner_function,
    wigner_min,
)


class TestLogNegativity:
    def test_bell_pair(self, bell_pair):
        assert log_negativity(bell_pair, ["c"]) == pytest.approx(1.0)
        assert log_negativity(bell_pair, ["b"], base=math.e) == pytest.approx(math.log(2.0))

    def test_two_mode_squeezed_truncated(self, two_mode_squeezed):
        rho, amplitudes = two_mode_squeezed(0.6, 12)
        expected = math.log2(float(np.sum(amplitudes)) ** 2)
        assert log_negativity(rho, ["c"]) == pytest.approx(expected, abs=1e-10)

    def test_product_state_not_entangled(self):
        space = FockSpace((3, 3), ("b", "c"))
        rho = prepare(space, {"b": StatePrep.thermal(0.3), "c": StatePrep.fock(1)}, eps_tail=1e-2, as_density=True)
        assert log_negativity(rho, ["b"]) == pytest.approx(0.0, abs=1e-12)

    def test_invariant_under_local_unitaries(self, two_mode_squeezed):
        rho, _ = two_mode_squeezed(0.6, 6)
        rng = np.random.default_rng(7)
        local = []
        for _ in range(2):
            x = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
            local.append(la.expm(1j * (x + x.conj().T)))
        u = np.kron(*local)
        rotated = DensityMatrix(rho.space, u @ rho.dense() @ u.conj().T)
        assert log_negativity(rotated, ["c"]) == pytest.approx(log_negativity(rho, ["c"]), abs=1e-9)

    def test_partition_must_split_modes(self, bell_pair):
        with pytest.raises(InvalidModeError):
            log_negativity(bell_pair, ["b", "c"])
        with pytest.raises(InvalidModeError):
            log_negativity(bell_pair, [])


class TestEntanglementPotential:
    def test_vacuum(self, fock_density):
        assert entanglement_potential(fock_density(0, 4)) == pytest.approx(0.0, abs=1e-12)

    def test_single_phonon(self, fock_density):
        # |1⟩ на светоделителе даёт (|10⟩ - |01⟩)/√2
        assert entanglement_potential(fock_density(1, 2)) == pytest.approx(1.0)
        assert entanglement_potential(fock_density(1, 4)) == pytest.approx(1.0)

    def test_thermal_state_is_classical(self):
        space = FockSpace((30,), ("b",))
        rho = prepare(space, {"b": StatePrep.thermal(0.8)}, eps_tail=1e-8, as_density=True)
        assert entanglement_potential(rho) == pytest.approx(0.0, abs=1e-8)

    def test_doubled_dimension_limit(self, fock_density):
        with pytest.raises(TruncationError):
            entanglement_potential(fock_density(0, 201))

    def test_multimode_state_rejected(self, bell_pair):
        with pytest.raises(InvalidModeError):
            entanglement_potential(bell_pair)


class TestSqueezedVacuum:
    def test_requested_variance(self):
        state = squeezed_vacuum(0.2, 80)
        _, variance = moments(ThermalEnsemble.pure(state), 0, 0.0)
        assert variance == pytest.approx(0.2, abs=1e-8)
        _, anti = moments(ThermalEnsemble.pure(state), 0, np.pi)
        assert anti == pytest.approx(0.25 / 0.2, abs=1e-6)

    def test_reference_ep_grows_with_squeezing(self):
        assert squeezed_vacuum_ep(0.5) == pytest.approx(0.0, abs=1e-12)
        mild, strong = squeezed_vacuum_ep(0.4), squeezed_vacuum_ep(0.25)
        assert 0.0 < mild < strong

    def test_truncation_too_small(self):
        with pytest.raises(TruncationError):
            squeezed_vacuum(0.05, 6)


class TestGaussian:
    def test_vacuum_covariance(self, fock_density):
        cm = covariance(fock_density(0, 3), ["b"])
        assert cm.matrix == pytest.approx(0.5 * np.eye(2))
        assert cm.means == pytest.approx(np.zeros(2))

    def test_two_mode_squeezed_gaussian_ln(self, two_mode_squeezed):
        r = 0.5
        rho, _ = two_mode_squeezed(r, 30)
        cm = covariance(rho, ["b", "c"])
        assert gaussian_log_negativity(cm, ["c"]) == pytest.approx(2 * r / math.log(2.0), abs=1e-6)
        assert gaussian_log_negativity(cm, ["c"], base=math.e) == pytest.approx(2 * r, abs=1e-6)
        assert log_negativity(rho, ["c"]) == pytest.approx(2 * r / math.log(2.0), abs=1e-6)

    def test_product_vacuum_has_no_gaussian_entanglement(self):
        space = FockSpace((2, 2), ("b", "c"))
        rho = prepare(space, {}, as_density=True)
        assert gaussian_log_negativity(covariance(rho, ["b", "c"]), ["b"]) == pytest.approx(0.0)

    def test_thermal_pump_never_gives_gaussian_entanglement(self):
        space = FockSpace((4, 7, 7), ("a", "b", "c"))
        spec = HamiltonianSpec.aux_linear(1.0)
        init = prepare(space, {"a": StatePrep.thermal(0.3)}, eps_tail=1e-2)
        grid = TimeGrid.uniform(3.0, 0.25)
        for ensemble in unitary_evolve(build(spec, space), init, grid, conserved_charge(spec, space)):
            for pair in (("a", "b"), ("a", "c"), ("b", "c")):
                cm = covariance(reduce(ensemble, list(pair)), list(pair), check=False)
                assert gaussian_log_negativity(cm, [pair[0]]) < 1e-8

    def test_uncertainty_violation_detected(self):
        cm =CovarianceMatrix(0.1 * np.eye(2), np.zeros(2), ("b",))
        with pytest.raises(NonPhysicalStateError):
            cm.validate()


class TestPhononStatistics:
    def test_fock_state_distribution(self, fock_density):
        distribution = phonon_distribution(fock_density(1, 3), "b")
        assert distribution.mean == pytest.approx(1.0)
        assert distribution.odd_population == pytest.approx(1.0)
        assert distribution[7] == 0.0

    def test_klyshko_violated_by_fock_state(self, fock_density):
        report = klyshko(phonon_distribution(fock_density(1, 3), "b"))
        assert report.any_violation
        assert report.violated_at[0] == 0
        assert report.strongest == pytest.approx(-1.0)

    def test_klyshko_holds_for_thermal_state(self):
        space = FockSpace((40,), ("b",))
        rho = prepare(space, {"b": StatePrep.thermal(0.5)}, eps_tail=1e-15, as_density=True)
        report = klyshko(phonon_distribution(rho, "b"))
        assert not report.any_violation

    def test_negative_probability_rejected(self):
        with pytest.raises(NonPhysicalStateError):
            PhononDistribution(np.array([1.2, -0.2]))


class TestQuadrature:
    def test_vacuum_pdf(self, fock_density):
        rho = fock_density(0, 4)
        pdf = quadrature_pdf(rho, 0.0)
        assert pdf.total == pytest.approx(1.0, abs=1e-9)
        assert pdf.variance == pytest.approx(0.5, abs=1e-9)
        centre = int(np.argmin(np.abs(pdf.grid)))
        assert pdf.density[centre] == pytest.approx(1 / math.sqrt(math.pi), abs=1e-4)

    def test_fock_pdf_vanishes_at_origin(self, fock_density):
        rho = fock_density(1, 4)
        grid = np.linspace(-8.0, 8.0, 1601)
        pdf = quadrature_pdf(rho, 0.3, grid)
        assert pdf.density[800] == pytest.approx(0.0, abs=1e-12)
        assert pdf.variance == pytest.approx(1.5, abs=1e-8)

    def test_grid_widened_for_high_levels(self, fock_density):
        rho = fock_density(80, 81)
        grid = default_grid(rho)
        assert grid[-1] > 10.0


class TestWigner:
    def test_single_phonon_is_negative(self, fock_density):
        result = wigner_min(fock_density(1, 3))
        assert result.value == pytest.approx(-1 / math.pi, abs=1e-9)
        assert result.normalisation == pytest.approx(1.0, abs=1e-3)
        assert not result.coarse

    def test_single_phonon_profile(self, fock_density):
        values = wigner_function(fock_density(1, 3), np.array([1.0]), np.array([0.0]))
        assert values[0, 0] == pytest.approx(math.exp(-1.0) / math.pi)

    def test_vacuum_is_positive(self, fock_density):
        result = wigner_min(fock_density(0, 3))
        assert result.value >= 0.0

    def test_coarse_grid_flagged(self, fock_density):
        axis = np.linspace(-1.0, 1.0, 5)
        assert wigner_min(fock_density(0, 3), (axis, axis)).coarse
