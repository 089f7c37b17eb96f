"""
Тесты усечённого пространства Фока: индексы, приготовление состояний,
частичный след и моменты квадратур.
"""
import numpy as np
import pytest

from modules.core.errors import InvalidModeError, InvalidStateError, TruncationError
from modules.fock import (
    DensityMatrix,
    FockSpace,
    StatePrep,
    StateVector,
    ThermalEnsemble,
    ladder,
    moments,
    number_operator,
    partial_trace,
    partial_transpose,
    prepare,
    reduce,
    required_levels,
    tensor,
    thermal_weights,
)


class TestFockSpace:
    def test_last_mode_varies_fastest(self):
        space = FockSpace((2, 3))
        assert space.mode_names == ("a", "b")
        assert space.flat_index((0, 1)) == 1
        assert space.flat_index((1, 0)) == 3
        assert space.multi_index(5) == (1, 2)

    def test_position_by_name_and_index(self):
        space = FockSpace((2, 3, 4), ("a", "b", "c"))
        assert space.position("c") == 2
        assert space.position(1) == 1
        with pytest.raises(InvalidModeError):
            space.position("z")

    def test_rejects_bad_dims(self):
        with pytest.raises(InvalidModeError):
            FockSpace((2, 0))
        with pytest.raises(InvalidModeError):
            FockSpace((2, 2), ("a",))

    def test_enlarged(self):
        space = FockSpace((2, 3), ("b", "c"))
        assert space.enlarged(2).mode_dims == (4, 5)
        assert space.with_dims((5, 1)).mode_names == ("b", "c")


class TestPreparation:
    def test_thermal_weights_law(self):
        weights = thermal_weights(1.0, 4)
        assert weights == pytest.approx([0.5, 0.25, 0.125, 0.0625])

    def test_required_levels(self):
        assert required_levels(StatePrep.ground()) == 1
        assert required_levels(StatePrep.fock(3)) == 4
        # (1/2)^k <= 1e-6 впервые при k = 20
        assert required_levels(StatePrep.thermal(1.0), 1e-6) == 20

    def test_thermal_mean_occupation(self):
        space = FockSpace((60,), ("a",))
        ensemble = prepare(space, {"a": StatePrep.thermal(1.5)}, eps_tail=1e-12)
        mean = ensemble.expectation(number_operator(space, "a")).real
        assert mean == pytest.approx(1.5, abs=1e-8)
        assert ensemble.weights.sum() == pytest.approx(1.0)

    def test_zero_temperature_is_vacuum(self):
        ensemble = prepare(FockSpace((4,), ("a",)), {"a": StatePrep.thermal(0.0)})
        assert len(ensemble) == 1
        assert ensemble.states[0].dense()[0] == pytest.approx(1.0)

    def test_phase_randomised_coherent_state(self):
        space = FockSpace((40,), ("a",))
        ensemble = prepare(space, {"a": StatePrep.prcs(3.0)}, eps_tail=1e-12)
        assert ensemble.weights[0] == pytest.approx(np.exp(-3.0), abs=1e-10)
        assert ensemble.expectation(number_operator(space, "a")).real == pytest.approx(3.0, abs=1e-8)

    def test_unspecified_modes_in_vacuum(self):
        space = FockSpace((3, 2), ("a", "b"))
        ensemble = prepare(space, {"a": StatePrep.fock(2)})
        assert len(ensemble) == 1
        idx, _ = ensemble.states[0].support()
        assert list(idx) == [space.flat_index((2, 0))]

    def test_truncation_too_small(self):
        space = FockSpace((3,), ("a",))
        with pytest.raises(TruncationError):
            prepare(space, {"a": StatePrep.thermal(2.0)}, eps_tail=1e-6)

    def test_invalid_prep(self):
        with pytest.raises(InvalidStateError):
            StatePrep.thermal(-1.0)
        with pytest.raises(InvalidStateError):
            StatePrep("squeezed")

    def test_as_density(self):
        space = FockSpace((30,), ("a",))
        rho = prepare(space, {"a": StatePrep.coherent(1.0)}, eps_tail=1e-10, as_density=True)
        assert isinstance(rho, DensityMatrix)
        assert rho.trace() == pytest.approx(1.0)

    def test_unnormalised_vector_rejected(self):
        with pytest.raises(InvalidStateError):
            StateVector(FockSpace((2,)), np.array([1.0, 1.0]))


class TestReduction:
    def test_reduce_product_state(self):
        left = StateVector.normalized(FockSpace((2,)), np.array([1.0, 1.0]))
        right = StateVector.basis(FockSpace((3,)), (2,))
        product = tensor(left, right, names=("a", "b"))
        rho_a = reduce(product, ["a"])
        assert rho_a.dense() == pytest.approx(np.full((2, 2), 0.5))
        rho_b = reduce(product, ["b"])
        assert rho_b.diagonal() == pytest.approx([0.0, 0.0, 1.0])

    def test_reduce_ensemble_matches_partial_trace(self):
        space = FockSpace((4, 3), ("a", "b"))
        ensemble = prepare(space, {"a": StatePrep.coherent(0.5), "b": StatePrep.thermal(0.1)}, eps_tail=1e-2)
        direct = reduce(ensemble, ["b"])
        via_density = partial_trace(ensemble.to_density_matrix(sparse=False), ["b"])
        assert direct.dense() == pytest.approx(via_density.dense(), abs=1e-12)

    def test_bell_pair_marginal(self, bell_pair):
        assert partial_trace(bell_pair, ["b"]).dense() == pytest.approx(0.5 * np.eye(2))

    def test_partial_transpose_is_involution(self, bell_pair):
        once = partial_transpose(bell_pair, ["c"])
        twice = partial_transpose(DensityMatrix(bell_pair.space, once.dense(), check=False), ["c"])
        assert twice.dense() == pytest.approx(bell_pair.dense())
        assert np.linalg.eigvalsh(once.dense()).min() == pytest.approx(-0.5)


class TestMoments:
    def test_vacuum_shot_noise(self):
        space = FockSpace((5,), ("b",))
        vacuum = ThermalEnsemble.pure(StateVector.basis(space, (0,)))
        for theta in (0.0, 0.7, np.pi):
            mean, variance = moments(vacuum, "b", theta)
            assert mean == pytest.approx(0.0)
            assert variance == pytest.approx(0.5)

    def test_coherent_state_mean(self):
        space = FockSpace((40,), ("b",))
        ensemble = prepare(space, {"b": StatePrep.coherent(1.2)}, eps_tail=1e-14)
        mean, variance = moments(ensemble, "b", 0.0)
        assert mean == pytest.approx(np.sqrt(2.0) * 1.2, abs=1e-6)
        assert variance == pytest.approx(0.5, abs=1e-6)

    def test_thermal_variance(self):
        space = FockSpace((60,), ("b",))
        ensemble = prepare(space, {"b": StatePrep.thermal(0.7)}, eps_tail=1e-13)
        _, variance = moments(ensemble, "b", 0.3)
        assert variance == pytest.approx((2 * 0.7 + 1) / 2, abs=1e-8)

    def test_ladder_lowers_fock_state(self):
        space = FockSpace((4,), ("b",))
        a = ladder(space, "b").dense()
        assert a[space.flat_index((2,)), space.flat_index((3,))] == pytest.approx(np.sqrt(3.0))
