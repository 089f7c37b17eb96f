"""
Запись результатов: CSV-таблицы и summary.json в <out>/<scenario_id>/.

Файлы не содержат времени запуска, поэтому повторный прогон (в том числе из
кэша) даёт побайтно те же таблицы.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

import pandas as pd

from .series import MeasureSeries, plain, without_nan

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def table_frame(series: MeasureSeries, table: str) -> pd.DataFrame:
    rows = series.rows(table)
    frame = pd.DataFrame(rows)
    if not rows:
        frame = pd.DataFrame(columns=list(series.axes))
    return frame


def summary(series: MeasureSeries, columns: Dict[str, List[str]]) -> Dict[str, Any]:
    provenance = dict(series.provenance)
    return without_nan(
        plain(
            {
                "scenario_id": series.scenario_id,
                "protocol": series.protocol,
                "config_hash": provenance.get("config_hash"),
                "library_version": provenance.get("library_version"),
                "log_base": provenance.get("log_base"),
                "axes": series.axes,
                "provenance": provenance,
                "convergence": series.convergence,
                "tables": columns,
                "points": [
                    {
                        "point": r.point,
                        "scalars": r.scalars,
                        "diagnostics": r.diagnostics,
                        "provenance": r.provenance,
                    }
                    for r in series.records
                ],
            }
        )
    )


def emit(series: MeasureSeries, out_dir: Union[str, Path], plots: bool = False) -> Path:
    """
    Пишет <table>.csv для каждой таблицы серии и summary.json.

    Returns:
        каталог сценария
    """
    target = Path(out_dir) / series.scenario_id
    target.mkdir(parents=True, exist_ok=True)

    columns: Dict[str, List[str]] = {}
    for table in series.table_names():
        frame = table_frame(series, table)
        frame.to_csv(target / f"{table}.csv", index=False, float_format=FLOAT_FORMAT)
        columns[table] = [str(c) for c in frame.columns]
        logger.debug("Таблица %s: %d строк", table, len(frame))

    with open(target / "summary.json", "w", encoding="utf-8") as f:
        json.dump(summary(series, columns), f, ensure_ascii=False, indent=2, allow_nan=False)
        f.write("\n")

    if plots:
        from .plots import plot_series

        plot_series(series, target)

    logger.info("Результаты %s записаны в %s", series.scenario_id, target)
    return target
