"""
SVG-графики серий (matplotlib, бэкенд Agg).
"""
import logging
from itertools import groupby
from pathlib import Path
from typing import Any, Dict, List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .series import SUMMARY_TABLE, MeasureSeries  # noqa: E402

logger = logging.getLogger(__name__)

# фиксированная соль id элементов SVG и без даты в метаданных: файлы воспроизводимы
plt.rcParams["svg.hashsalt"] = "thermal-quanta-splitting"
SVG_METADATA = {"Date": None}

AUX_PREFIXES = ("tau_", "max_")
AUX_SUFFIXES = ("_base_e", "_base_2")


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=SVG_METADATA)
    plt.close(fig)
    logger.debug("График %s", path)


def _label(point: Dict[str, Any]) -> str:
    return ", ".join(f"{k}={v}" for k, v in point.items()) or "—"


def _plotted_scalars(series: MeasureSeries) -> List[str]:
    if not series.records:
        return []
    return [
        name
        for name in series.records[0].scalars
        if not name.startswith(AUX_PREFIXES) and not name.endswith(AUX_SUFFIXES)
    ]


def plot_scalars(series: MeasureSeries, target: Path) -> None:
    """Скаляры таблицы points против первой оси; остальные оси - отдельные кривые."""
    axes = list(series.axes)
    names = _plotted_scalars(series)
    if not axes or not names:
        return
    x_axis, rest = axes[0], axes[1:]
    fig, panels = plt.subplots(len(names), 1, figsize=(6, 2.6 * len(names)), squeeze=False)
    rows = series.rows(SUMMARY_TABLE)
    key = lambda row: tuple(row[a] for a in rest)  # noqa: E731
    for panel, name in zip(panels[:, 0], names):
        for group, members in groupby(sorted(rows, key=lambda r: str(key(r))), key=key):
            members = list(members)
            xs = [m[x_axis] for m in members]
            ys = [m.get(name, np.nan) for m in members]
            label = _label(dict(zip(rest, group))) if rest else None
            panel.plot(range(len(xs)) if isinstance(xs[0], str) else xs, ys, marker="o", label=label)
            if isinstance(xs[0], str):
                panel.set_xticks(range(len(xs)), xs)
        panel.set_xlabel(x_axis)
        panel.set_ylabel(name)
        if rest:
            panel.legend(fontsize="small")
    _save(fig, target / f"{SUMMARY_TABLE}.svg")


def plot_lines(series: MeasureSeries, table: str, x: str, target: Path) -> None:
    """Каждая колонка таблицы против x, по кривой на точку перебора."""
    columns = [c for c in (series.records[0].tables.get(table) or [{}])[0] if c != x]
    if not columns:
        return
    fig, panels = plt.subplots(len(columns), 1, figsize=(6, 2.6 * len(columns)), squeeze=False)
    for panel, column in zip(panels[:, 0], columns):
        for record in series.records:
            rows = record.tables.get(table, [])
            panel.plot([r[x] for r in rows], [r[column] for r in rows], label=_label(record.point))
        panel.set_xlabel(x)
        panel.set_ylabel(column)
        panel.legend(fontsize="small")
    _save(fig, target / f"{table}.svg")


def plot_quadrature_map(series: MeasureSeries, target: Path) -> None:
    for index, record in enumerate(series.records):
        rows = record.tables.get("quadrature_map", [])
        if not rows:
            continue
        taus = np.unique([r["tau"] for r in rows])
        thetas = np.unique([r["theta"] for r in rows])
        values = np.array([r["variance"] for r in rows]).reshape(taus.size, thetas.size)
        fig, ax = plt.subplots(figsize=(6, 4.5))
        mesh = ax.pcolormesh(thetas, taus, values, shading="auto", cmap="viridis")
        ax.contour(thetas, taus, values, levels=[0.5], colors="white", linewidths=0.8)
        fig.colorbar(mesh, ax=ax, label="Var X_θ")
        ax.set_xlabel("θ")
        ax.set_ylabel("τ")
        ax.set_title(_label(record.point))
        _save(fig, target / f"quadrature_map_{index}.svg")


def plot_series(series: MeasureSeries, target: Path) -> None:
    """Графики по протоколу серии; вызывается при --plots."""
    target = Path(target)
    plot_scalars(series, target)
    if not series.records:
        return
    tables = series.records[0].tables
    if "series" in tables:
        plot_lines(series, "series", "tau", target)
    if "open_series" in tables:
        plot_lines(series, "open_series", "tau", target)
    if "phonon" in tables:
        plot_lines(series, "phonon", "k", target)
    if "pdf" in tables:
        plot_lines(series, "pdf", "x", target)
    if "quadrature_map" in tables:
        plot_quadrature_map(series, target)
