"""Figures for the CLI report paths: relation tables and rule coverage."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import relations as rel  # noqa: E402

_CLASS_CODES = {"sc": 1, "bc": 2, "mc": 3}


def _table_values(cells: list[list[str]]) -> np.ndarray:
    return np.array([[_CLASS_CODES.get(c, 1 if c == "1" else 0) for c in row] for row in cells])


def plot_table(name: str, path: str | Path) -> Path:
    """Heatmap of a relation table; rows relate to columns where shaded."""
    rows, cols, cells = rel.sum_table(name)
    values = _table_values(cells)
    size = max(3.0, 0.45 * len(cols) + 1.5)
    fig, ax = plt.subplots(figsize=(size, size))
    ax.imshow(values, cmap="Greys" if name != "cast-class" else "viridis", vmin=0)
    ax.set_xticks(range(len(cols)), cols, rotation=90)
    ax.set_yticks(range(len(rows)), rows)
    if name == "cast-class":
        for r, row in enumerate(cells):
            for c, cell in enumerate(row):
                ax.text(c, r, cell, ha="center", va="center", color="white")
    ax.set_title(name)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_coverage(report, path: str | Path) -> Path:
    """Horizontal bars of how often each rule fired in a suite run (log scale)."""
    names = sorted(set(report.coverage) | set(report.expected_rules))
    counts = [report.coverage.get(n, 0) for n in names]
    colors = ["tab:red" if n in report.missing_rules else "tab:blue" for n in names]
    fig, ax = plt.subplots(figsize=(6, 0.25 * len(names) + 1.2))
    ax.barh(range(len(names)), [max(c, 0.5) for c in counts], color=colors)
    ax.set_yticks(range(len(names)), names, fontsize=7)
    ax.set_xscale("log")
    ax.invert_yaxis()
    ax.set_xlabel("times fired")
    status = "ok" if report.ok else f"{len(report.failures)} failures"
    ax.set_title(f"{report.suite}: {report.cases} cases, {status}", fontsize=9)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


__all__ = ["plot_table", "plot_coverage"]
