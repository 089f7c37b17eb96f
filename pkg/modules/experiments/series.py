"""
Результаты прогона сценария.
"""
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

SUMMARY_TABLE = "points"


def plain(value: Any) -> Any:
    """numpy-скаляры и массивы в обычные типы Python (для JSON)."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def without_nan(value: Any) -> Any:
    """NaN и бесконечности в None (строгий JSON)."""
    if isinstance(value, dict):
        return {k: without_nan(v) for k, v in value.items()}
    if isinstance(value, list):
        return [without_nan(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


@dataclass
class PointRecord:
    """
    Результаты одной точки перебора.

    scalars - сравниваемые проверкой сходимости числа (колонки таблицы points);
    tables - построчные таблицы протокола; provenance - хэш конфигурации,
    размерности и допуски, с которыми точка посчитана.
    """

    point: Dict[str, Any]
    scalars: Dict[str, float] = field(default_factory=dict)
    tables: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    provenance: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return plain(
            {
                "point": self.point,
                "scalars": self.scalars,
                "tables": self.tables,
                "diagnostics": self.diagnostics,
                "provenance": self.provenance,
            }
        )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PointRecord":
        return cls(
            point=dict(data["point"]),
            scalars={k: (math.nan if v is None else v) for k, v in data["scalars"].items()},
            tables={k: list(v) for k, v in data.get("tables", {}).items()},
            diagnostics=dict(data.get("diagnostics", {})),
            provenance=dict(data.get("provenance", {})),
        )


@dataclass
class MeasureSeries:
    """Серия измерений сценария: оси перебора и записи по точкам в порядке перебора."""

    scenario_id: str
    protocol: str
    axes: Dict[str, List[Any]]
    records: List[PointRecord] = field(default_factory=list)
    provenance: Dict[str, Any] = field(default_factory=dict)
    convergence: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario_id": self.scenario_id,
            "protocol": self.protocol,
            "axes": plain(self.axes),
            "provenance": plain(self.provenance),
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self) -> str:
        """Сериализация для кэша; порядок ключей сохраняется, чтобы таблицы из кэша совпадали побайтно."""
        return json.dumps(self.to_dict(), separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MeasureSeries":
        return cls(
            scenario_id=data["scenario_id"],
            protocol=data["protocol"],
            axes={k: list(v) for k, v in data["axes"].items()},
            records=[PointRecord.from_dict(r) for r in data["records"]],
            provenance=dict(data.get("provenance", {})),
        )

    @classmethod
    def from_json(cls, payload: str) -> "MeasureSeries":
        return cls.from_dict(json.loads(payload))

    def table_names(self) -> List[str]:
        names = [SUMMARY_TABLE]
        for record in self.records:
            for name in record.tables:
                if name not in names:
                    names.append(name)
        return names

    def rows(self, table: str) -> List[Dict[str, Any]]:
        """Строки таблицы; к каждой строке слева добавляются значения осей точки."""
        if table == SUMMARY_TABLE:
            return [{**r.point, **r.scalars} for r in self.records]
        return [{**r.point, **row} for r in self.records for row in r.tables.get(table, [])]

    def scalar(self, name: str) -> List[float]:
        return [float(r.scalars.get(name, math.nan)) for r in self.records]
