"""
Общие фикстуры тестов.
"""
import numpy as np
import pytest

from config import config
from db import reset_engine
from modules.fock import FockSpace, StateVector, ThermalEnsemble


@pytest.fixture
def isolated_cache(tmp_path, monkeypatch):
    """Кэш серий в sqlite во временном каталоге."""
    reset_engine()
    monkeypatch.setattr(config, "cache_dir", tmp_path / "cache")
    monkeypatch.setattr(config, "cache_url", None)
    yield tmp_path / "cache"
    reset_engine()


@pytest.fixture
def two_modes():
    return FockSpace((2, 2), ("b", "c"))


@pytest.fixture
def bell_pair(two_modes):
    """(|00⟩ + |11⟩)/√2 как матрица плотности."""
    state = StateVector.normalized(
        two_modes,
        np.array([1.0, 1.0]),
        np.array([two_modes.flat_index((0, 0)), two_modes.flat_index((1, 1))]),
    )
    return ThermalEnsemble.pure(state).to_density_matrix(sparse=False)


@pytest.fixture
def two_mode_squeezed():
    """Фабрика усечённого двухмодового сжатого вакуума: (ρ, нормированные амплитуды c_n)."""

    def make(r: float, dim: int):
        space = FockSpace((dim, dim), ("b", "c"))
        n = np.arange(dim)
        amplitudes = np.tanh(r) ** n
        amplitudes = amplitudes / np.linalg.norm(amplitudes)
        indices = np.array([space.flat_index((k, k)) for k in n])
        state = StateVector(space, amplitudes, indices)
        return ThermalEnsemble.pure(state).to_density_matrix(sparse=False), amplitudes

    return make


@pytest.fixture
def fock_density():
    """Фабрика одномодового фоковского состояния |n⟩ в усечении dim."""

    def make(n: int, dim: int):
        space = FockSpace((dim,), ("b",))
        return ThermalEnsemble.pure(StateVector.basis(space, (n,))).to_density_matrix(sparse=False)

    return make
