"""
Подготовка одной точки перебора: пространство, гамильтониан, заряды, начальное состояние.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config import config
from modules.core.errors import ConfigError
from modules.evolution.truncation import ChargeTruncation
from modules.fock import (
    DensityMatrix,
    FockSpace,
    OperatorMatrix,
    StatePrep,
    ThermalEnsemble,
    prepare,
    required_levels,
    weighted_number,
)
from modules.hamiltonians import (
    HamiltonianSpec,
    LindbladSpec,
    build,
    charge_weights,
    jump_operators,
    required_dims,
)
from .scenario_config import ScenarioConfig

logger = logging.getLogger(__name__)

PUMP_MODE = "a"
SIGNAL_MODE = "b"
AUX_MODE = "d"


@dataclass(frozen=True)
class Settings:
    """Действующие численные настройки сценария."""

    numerics: Dict[str, Any]
    eps_tail: float
    log_base: str

    @property
    def base(self) -> float:
        return math.e if self.log_base == "e" else 2.0

    def get(self, key: str) -> Any:
        return self.numerics[key]


def resolve_settings(scenario: ScenarioConfig) -> Settings:
    """simulation_settings.yml, поверх него numerics: сценария; eps_tail и log_base сценария важнее."""
    numerics = {**config.numerics, **scenario.numerics}
    eps_tail = scenario.eps_tail if scenario.eps_tail is not None else float(numerics["eps_tail"])
    log_base = scenario.log_base or ("e" if str(config.log_base).lower() == "e" else "2")
    return Settings(numerics, eps_tail, log_base)


def refined_settings(settings: Settings, dims_increment: int) -> Settings:
    """Настройки прохода проверки сходимости: eps_tail делится на convergence_eps_factor."""
    if dims_increment <= 0:
        return settings
    factor = float(settings.numerics.get("convergence_eps_factor", 1.0))
    return replace(settings, eps_tail=settings.eps_tail / factor)


def hamiltonian_spec(kind: str, parameters: Dict[str, Any], modes: Tuple[str, ...]) -> HamiltonianSpec:
    """Именованный вариант гамильтониана с параметрами; free_motion добавляется слагаемым."""
    omega_t = float(parameters.get("omega_t", 1.0))
    if kind == "degenerate_trilinear":
        spec = HamiltonianSpec.degenerate_trilinear(omega_t)
    elif kind == "aux_linear":
        spec = HamiltonianSpec.aux_linear(
            float(parameters.get("g", 1.0)), omega_t, int(parameters.get("N", 2))
        )
    elif kind == "higher_order":
        spec = HamiltonianSpec.higher_order(int(parameters.get("N", 2)), omega_t)
    elif kind == "nondegenerate":
        omega = float(parameters.get("omega", omega_t))
        if "g" in parameters:
            spec = HamiltonianSpec.nondegenerate_aux(omega, float(parameters["g"]), AUX_MODE)
        else:
            spec = HamiltonianSpec.nondegenerate(omega)
    elif kind == "multi_shared_b":
        spec = HamiltonianSpec.multi_shared_b(
            float(parameters.get("omega_1", omega_t)), float(parameters.get("omega_2", omega_t))
        )
    elif kind == "multi_shared_a":
        spec = HamiltonianSpec.multi_shared_a(
            float(parameters.get("omega_1", omega_t)), float(parameters.get("omega_2", omega_t))
        )
    else:
        raise ConfigError(f"Неизвестный гамильтониан {kind!r}")
    omega_b = parameters.get("omega_b")
    if omega_b is not None:
        spec = HamiltonianSpec.compose(spec, HamiltonianSpec.free_motion(float(omega_b), modes))
    return spec


def mode_prep(description: Dict[str, Any]) -> StatePrep:
    return StatePrep(
        description.get("kind", "ground"),
        n=int(description.get("n", 0)),
        nbar=float(description.get("nbar", 0.0)),
        amplitude=float(description.get("amplitude", 0.0)),
        phase=float(description.get("phase", 0.0)),
    )


def resource_prep(kind: str, mean: float, phase: float = 0.0) -> StatePrep:
    """Приготовление накачки заданного типа со средней заселённостью mean."""
    if kind == "thermal":
        return StatePrep.thermal(mean)
    if kind == "prcs":
        return StatePrep.prcs(mean)
    if kind == "coherent":
        return StatePrep.coherent(math.sqrt(mean), phase)
    if kind == "fock":
        n = int(round(mean))
        if abs(n - mean) > 1e-12:
            raise ConfigError(f"Фоковская накачка требует целого n̄, получено {mean}")
        return StatePrep.fock(n)
    if kind == "ground":
        return StatePrep.ground()
    raise ConfigError(f"Неизвестный тип ресурса {kind!r}")


@dataclass
class PointSetup:
    """Всё, что нужно протоколу для одной точки."""

    scenario: ScenarioConfig
    point: Dict[str, Any]
    settings: Settings
    space: FockSpace
    spec: HamiltonianSpec
    hamiltonian: OperatorMatrix
    charge_basis: List[Tuple[int, ...]]
    max_charges: Tuple[int, ...]
    preps: Dict[str, StatePrep]
    lindblad: Optional[LindbladSpec] = None
    truncation_bounds: Optional[Tuple[int, ...]] = None
    _initial: Optional[ThermalEnsemble] = field(default=None, repr=False)

    @property
    def charge(self):
        """Заряд(ы) в виде диагональных операторов (None без зарядов)."""
        charges = tuple(weighted_number(self.space, w) for w in self.charge_basis)
        if not charges:
            return None
        return charges[0] if len(charges) == 1 else charges

    @property
    def charge_values(self) -> np.ndarray:
        """Значения первого заряда на базисных состояниях (для контроля дрейфа)."""
        if not self.charge_basis:
            return np.zeros(self.space.dim)
        weights = np.asarray(self.charge_basis[0], dtype=np.float64)
        return weights @ self.space.occupation_table()

    def option(self, key: str, default: Any = None) -> Any:
        return self.scenario.options.get(key, default)

    def initial_ensemble(self) -> ThermalEnsemble:
        if self._initial is None:
            self._initial = prepare(self.space, self.preps, self.settings.eps_tail)
        return self._initial

    def initial_density(self) -> DensityMatrix:
        return self.initial_ensemble().to_density_matrix(sparse=True)

    def truncation(self) -> Optional[ChargeTruncation]:
        if not self.charge_basis or self.truncation_bounds is None:
            return None
        return ChargeTruncation(self.space, self.charge_basis, self.truncation_bounds)

    def jumps(self) -> List[OperatorMatrix]:
        if self.lindblad is None:
            return []
        return jump_operators(self.lindblad, self.space)

    def provenance(self) -> Dict[str, Any]:
        return {
            "config_hash": self.scenario.config_hash,
            "dims": list(self.space.mode_dims),
            "charges": [list(w) for w in self.charge_basis],
            "max_charges": list(self.max_charges),
            "eps_tail": self.settings.eps_tail,
            "log_base": self.settings.log_base,
            "preps": {m: p.label() for m, p in sorted(self.preps.items())},
            "hamiltonian": self.spec.kind,
        }


def _point_preps(scenario: ScenarioConfig, point: Dict[str, Any]) -> Dict[str, StatePrep]:
    preps = {mode: mode_prep(desc) for mode, desc in scenario.initial.items()}
    if "nbar" in point or "resource" in point:
        base = scenario.initial.get(PUMP_MODE, {"kind": "thermal"})
        kind = point.get("resource", base.get("kind", "thermal"))
        current = preps.get(PUMP_MODE, StatePrep.ground())
        mean = float(point.get("nbar", current.mean_occupation))
        preps[PUMP_MODE] = resource_prep(kind, mean, float(base.get("phase", 0.0)))
    if "nbar_b" in point:
        preps[SIGNAL_MODE] = StatePrep.thermal(float(point["nbar_b"]))
    return preps


def _point_lindblad(scenario: ScenarioConfig, point: Dict[str, Any]) -> Optional[LindbladSpec]:
    if scenario.protocol != "open_system":
        return None
    description = scenario.lindblad or {}
    nbar_th = float(point.get("nbar_th", description.get("nbar_th", 0.0)))
    if "lam" in point:
        return LindbladSpec.uniform(float(point["lam"]), nbar_th, scenario.modes)
    if "rates" in description:
        return LindbladSpec(description["rates"], nbar_th)
    return LindbladSpec.uniform(float(description.get("rate", 0.0)), nbar_th, scenario.modes)


def resolve_point(
    scenario: ScenarioConfig,
    point: Dict[str, Any],
    dims_increment: int = 0,
    settings: Optional[Settings] = None,
) -> PointSetup:
    """
    Строит PointSetup для точки перебора.

    При dims: auto размерности выводятся из отсечки хвоста начальных
    распределений и сохраняющихся зарядов так, чтобы все занятые оболочки
    помещались в усечение целиком. Для открытой системы граница заряда
    увеличивается на lindblad_charge_margin.

    При dims_increment > 0 (проход проверки сходимости) отсечка хвоста
    ужесточается в convergence_eps_factor раз, размерности растут на
    dims_increment сверх необходимых, границы заряда Линдблада тоже.

    Raises:
        ConfigError: явные размерности меньше необходимых или мода не ограничена зарядом
    """
    settings = refined_settings(settings or resolve_settings(scenario), dims_increment)
    modes = tuple(scenario.modes)
    parameters = dict(scenario.hamiltonian)
    base_kind = parameters.pop("kind", "degenerate_trilinear")
    kind = point.get("hamiltonian", base_kind)
    free = parameters.pop("free_motion", None)
    if free is not None:
        parameters["omega_b"] = free["omega_b"]
    for axis in ("N", "g", "omega_b"):
        if axis in point:
            parameters[axis] = point[axis]
    if "N" in point and kind == "degenerate_trilinear":
        kind = "higher_order"
    spec = hamiltonian_spec(kind, parameters, modes)

    preps = _point_preps(scenario, point)
    lindblad = _point_lindblad(scenario, point)
    levels = [required_levels(preps.get(m, StatePrep.ground()), settings.eps_tail) for m in modes]

    probe = FockSpace(tuple(1 for _ in modes), modes)
    basis = charge_weights(spec, probe)
    max_charges = tuple(int(sum(w[i] * (levels[i] - 1) for i in range(len(modes)))) for w in basis)
    dissipative = lindblad is not None and not lindblad.is_closed
    margin = int(settings.get("lindblad_charge_margin")) + dims_increment if dissipative else 0
    bounds = tuple(k + margin for k in max_charges)

    needed = required_dims(basis, bounds, modes) if basis else tuple(levels)
    if scenario.dims == "auto":
        dims = tuple(n + dims_increment for n in needed)
    elif dims_increment:
        dims = tuple(max(d + dims_increment, n) for d, n in zip(scenario.dims, needed))
    else:
        dims = tuple(scenario.dims)
        short = [f"{m}: {d} < {n}" for m, d, n in zip(modes, dims, needed) if d < n]
        if short:
            raise ConfigError("Размерности меньше необходимых для оболочек заряда: " + ", ".join(short))

    space = FockSpace(dims, modes)
    hamiltonian = build(spec, space)
    logger.debug("Точка %s: %s, заряды %s, K <= %s", point, space, basis, bounds)
    return PointSetup(
        scenario=scenario,
        point=dict(point),
        settings=settings,
        space=space,
        spec=spec,
        hamiltonian=hamiltonian,
        charge_basis=list(basis),
        max_charges=max_charges,
        preps=preps,
        lindblad=lindblad,
        truncation_bounds=bounds if lindblad is not None else None,
    )
