"""
Валидаторы полей файла сценария.

Каждый валидатор возвращает (is_valid, normalized_value, error_message):
при успехе (True, значение, None), при ошибке (False, None, "сообщение").
"""
import math
import re
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config import DEFAULT_NUMERICS
from modules.fock.states import StatePrep
from .scenario_config import PROTOCOL_NAMES, SWEEP_AXES

Result = Tuple[bool, Optional[Any], Optional[str]]

MODE_NAME = re.compile(r"^[a-z]$")
SCENARIO_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.-]*$")
MEASURE = re.compile(r"^(EP|sv_EP|odd|LN|gaussian_LN)_([a-z]+)$")

HAMILTONIAN_KINDS = (
    "degenerate_trilinear",
    "aux_linear",
    "higher_order",
    "nondegenerate",
    "multi_shared_b",
    "multi_shared_a",
)
HAMILTONIAN_PARAMETERS = ("omega_t", "g", "N", "omega", "omega_1", "omega_2")
RESOURCES = ("thermal", "coherent", "prcs", "fock")
NUMERIC_AXES = ("nbar", "nbar_b", "lam", "nbar_th", "g", "omega_b")


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def validate_scenario_id(value: Any) -> Result:
    if not value or not SCENARIO_ID.match(str(value)):
        return False, None, f"Некорректный id сценария: {value!r} (буквы, цифры, _ . -)"
    return True, str(value), None


def validate_protocol(value: Any) -> Result:
    if value not in PROTOCOL_NAMES:
        return False, None, f"Неизвестный протокол {value!r}; допустимы: {', '.join(PROTOCOL_NAMES)}"
    return True, value, None


def validate_modes(value: Any) -> Result:
    """Список однобуквенных имён мод без повторов."""
    if not isinstance(value, (list, tuple)) or not value:
        return False, None, "modes должен быть непустым списком имён мод"
    names = [str(v) for v in value]
    bad = [n for n in names if not MODE_NAME.match(n)]
    if bad:
        return False, None, f"Имена мод должны быть строчными буквами: {', '.join(bad)}"
    if len(set(names)) != len(names):
        return False, None, "Имена мод повторяются"
    return True, tuple(names), None


def validate_hamiltonian(value: Any, modes: Sequence[str]) -> Result:
    """
    Returns:
        (is_valid, normalized_value_or_error_message, error_message)
        normalized: {"kind": ..., параметры..., "free_motion": {"omega_b": ...} или отсутствует}
    """
    if not isinstance(value, dict):
        return False, None, "hamiltonian должен быть словарём с полем kind"
    kind = value.get("kind", "degenerate_trilinear")
    if kind not in HAMILTONIAN_KINDS:
        return False, None, f"Неизвестный гамильтониан {kind!r}; допустимы: {', '.join(HAMILTONIAN_KINDS)}"
    normalized: Dict[str, Any] = {"kind": kind}
    for key, item in value.items():
        if key in ("kind", "free_motion"):
            continue
        if key not in HAMILTONIAN_PARAMETERS:
            return False, None, f"Неизвестный параметр гамильтониана {key!r}"
        if not _is_number(item):
            return False, None, f"Параметр гамильтониана {key} должен быть числом: {item!r}"
        normalized[key] = int(item) if key == "N" else float(item)
    if "N" in normalized and normalized["N"] < 2:
        return False, None, f"Порядок нелинейности N должен быть >= 2: {normalized['N']}"
    free = value.get("free_motion")
    if free is not None:
        if not isinstance(free, dict) or not _is_number(free.get("omega_b")):
            return False, None, "free_motion должен задавать числовое omega_b"
        normalized["free_motion"] = {"omega_b": float(free["omega_b"])}
    needed = {"nondegenerate": 3, "aux_linear": 3, "multi_shared_b": 3, "multi_shared_a": 3}.get(kind, 2)
    if kind == "nondegenerate" and "g" in normalized:
        needed = 4
        if "d" not in modes:
            return False, None, "nondegenerate с g связывает b со вспомогательной модой d: добавьте d в modes"
    if len(modes) < needed:
        return False, None, f"Гамильтониан {kind} требует {needed} мод, задано {len(modes)}"
    return True, normalized, None


def validate_prep(value: Any) -> Result:
    """Приготовление моды: {kind, nbar | n | amplitude, phase}."""
    if not isinstance(value, dict):
        return False, None, "Приготовление моды должно быть словарём с полем kind"
    kind = value.get("kind", "ground")
    allowed = {"kind", "nbar", "n", "amplitude", "phase", "mu"}
    unknown = set(value) - allowed
    if unknown:
        return False, None, f"Неизвестные поля приготовления: {', '.join(sorted(unknown))}"
    for key in allowed - {"kind"}:
        if key in value and not _is_number(value[key]):
            return False, None, f"Поле {key} приготовления должно быть числом: {value[key]!r}"
    normalized = {k: value[k] for k in sorted(value)}
    normalized["kind"] = kind
    if kind == "prcs" and "mu" in normalized:
        normalized["nbar"] = normalized.pop("mu")
    try:
        StatePrep(
            kind,
            n=int(normalized.get("n", 0)),
            nbar=float(normalized.get("nbar", 0.0)),
            amplitude=float(normalized.get("amplitude", 0.0)),
            phase=float(normalized.get("phase", 0.0)),
        )
    except ValueError as e:
        return False, None, str(e)
    return True, normalized, None


def validate_lindblad(value: Any, modes: Sequence[str]) -> Result:
    """{rate | rates: {mode: rate}, nbar_th}."""
    if value is None:
        return True, None, None
    if not isinstance(value, dict):
        return False, None, "lindblad должен быть словарём"
    normalized: Dict[str, Any] = {"nbar_th": 0.0}
    if "rates" in value:
        rates = value["rates"]
        if not isinstance(rates, dict) or any(m not in modes for m in rates):
            return False, None, "lindblad.rates должен сопоставлять моды сценария скоростям"
        if not all(_is_number(r) and r >= 0 for r in rates.values()):
            return False, None, "Скорости затухания должны быть числами >= 0"
        normalized["rates"] = {m: float(r) for m, r in sorted(rates.items())}
    else:
        rate = value.get("rate", 0.0)
        if not (_is_number(rate) and rate >= 0):
            return False, None, f"lindblad.rate должен быть числом >= 0: {rate!r}"
        normalized["rate"] = float(rate)
    nbar_th = value.get("nbar_th", 0.0)
    if not (_is_number(nbar_th) and nbar_th >= 0):
        return False, None, f"lindblad.nbar_th должен быть числом >= 0: {nbar_th!r}"
    normalized["nbar_th"] = float(nbar_th)
    return True, normalized, None


def validate_sweep_axis(name: str, values: Any) -> Result:
    """Непустой список значений известной оси."""
    if name not in SWEEP_AXES:
        return False, None, f"Неизвестная ось перебора {name!r}; допустимы: {', '.join(SWEEP_AXES)}"
    if not isinstance(values, (list, tuple)) or not values:
        return False, None, f"Ось {name} должна быть непустым списком"
    if name in NUMERIC_AXES:
        if not all(_is_number(v) and v >= 0 for v in values):
            return False, None, f"Значения оси {name} должны быть числами >= 0"
        return True, [float(v) for v in values], None
    if name == "N":
        if not all(isinstance(v, int) and not isinstance(v, bool) and v >= 2 for v in values):
            return False, None, "Значения оси N должны быть целыми >= 2"
        return True, [int(v) for v in values], None
    if name == "resource":
        bad = [v for v in values if v not in RESOURCES]
        if bad:
            return False, None, f"Неизвестные ресурсы {bad}; допустимы: {', '.join(RESOURCES)}"
        return True, list(values), None
    bad = [v for v in values if v not in HAMILTONIAN_KINDS]
    if bad:
        return False, None, f"Неизвестные гамильтонианы {bad}"
    return True, list(values), None


def validate_measure(name: Any, modes: Sequence[str]) -> Result:
    """EP_b, sv_EP_b, odd_b (одна мода), LN_bc, gaussian_LN_bc (две разные моды)."""
    match = MEASURE.match(str(name))
    if not match:
        return False, None, f"Некорректное имя величины {name!r}"
    kind, letters = match.groups()
    unknown = [m for m in letters if m not in modes]
    if unknown:
        return False, None, f"Величина {name}: моды {', '.join(unknown)} отсутствуют в сценарии"
    expected = 2 if kind in ("LN", "gaussian_LN") else 1
    if len(letters) != expected or len(set(letters)) != expected:
        return False, None, f"Величина {name} требует {expected} различных мод"
    return True, str(name), None


def validate_dims(value: Any, modes: Sequence[str]) -> Result:
    """'auto', список размерностей или строка '4,8,8' (из --dims)."""
    if value is None or value == "auto":
        return True, "auto", None
    if isinstance(value, str):
        parts = [p for p in re.split(r"[,\s]+", value.strip()) if p]
        if not all(p.isdigit() for p in parts):
            return False, None, f"Размерности должны быть целыми числами: {value!r}"
        value = [int(p) for p in parts]
    if not isinstance(value, (list, tuple)) or len(value) != len(modes):
        return False, None, f"Нужно {len(modes)} размерностей (по одной на моду)"
    if not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in value):
        return False, None, "Размерности мод должны быть целыми >= 1"
    return True, tuple(int(d) for d in value), None


def validate_log_base(value: Any) -> Result:
    if value is None:
        return True, None, None
    text = str(value).strip().lower()
    if text in ("2", "2.0"):
        return True, "2", None
    if text == "e":
        return True, "e", None
    return False, None, f"Основание логарифма должно быть 2 или e: {value!r}"


def validate_eps_tail(value: Any) -> Result:
    if value is None:
        return True, None, None
    if not (_is_number(value) and 0 < value < 1):
        return False, None, f"eps_tail должен быть в (0, 1): {value!r}"
    return True, float(value), None


def validate_numerics(value: Any) -> Result:
    """Переопределения численных настроек: только известные ключи с числовыми значениями."""
    if value is None:
        return True, {}, None
    if not isinstance(value, dict):
        return False, None, "numerics должен быть словарём"
    errors: List[str] = []
    for key, item in value.items():
        if key not in DEFAULT_NUMERICS:
            errors.append(f"неизвестная настройка {key!r}")
        elif isinstance(DEFAULT_NUMERICS[key], bool):
            if not isinstance(item, bool):
                errors.append(f"{key} должен быть true/false")
        elif not (_is_number(item) and item >= 0):
            errors.append(f"{key} должен быть числом >= 0")
        elif key == "convergence_eps_factor" and item < 1:
            errors.append("convergence_eps_factor должен быть >= 1")
    if errors:
        return False, None, "numerics: " + "; ".join(errors)
    return True, dict(sorted(value.items())), None
