"""Figures for evaluation reports, rendered straight to image files.

Figures are drawn on bare :class:`~matplotlib.figure.Figure` objects, so the
global pyplot state and backend are never touched.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .evaluation import Comparison, EvalReport

STYLE = {"dpi": 120, "cmap": "Blues", "colors": ("#4c72b0", "#dd8452", "#55a868")}


def _new_figure(width=5.0, height=4.0) -> Figure:
    fig = Figure(figsize=(width, height))
    FigureCanvasAgg(fig)
    return fig


def _save(fig: Figure, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=STYLE["dpi"], metadata={"Software": None})
    return path


def plot_confusion(report: EvalReport, path, title=None) -> Path:
    labels = report.classes
    matrix = np.array(report.confusion_matrix(), dtype=float)
    size = max(3.5, 1.0 + 0.6 * len(labels))
    fig = _new_figure(size + 1, size)
    ax = fig.add_subplot()
    im = ax.imshow(matrix, cmap=STYLE["cmap"], vmin=0)
    fig.colorbar(im, ax=ax, fraction=0.046, pad=0.04)
    ax.set_xticks(range(len(labels)), labels, rotation=45, ha="right")
    ax.set_yticks(range(len(labels)), labels)
    ax.set_xlabel("predicted")
    ax.set_ylabel("gold")
    threshold = matrix.max() / 2 if matrix.size else 0
    for i in range(len(labels)):
        for j in range(len(labels)):
            ax.text(j, i, int(matrix[i, j]), ha="center", va="center",
                    color="white" if matrix[i, j] > threshold else "black")
    ax.set_title(title or f"{report.metadata.get('classifier', '')} accuracy {report.accuracy:.3f}".strip())
    return _save(fig, path)


def plot_per_class(report: EvalReport, path, title=None) -> Path:
    """Grouped precision/recall bars; undefined values are left blank."""
    labels = report.classes
    x = np.arange(len(labels))
    prec = [s.precision if s.precision is not None else np.nan for s in report.per_class.values()]
    rec = [s.recall if s.recall is not None else np.nan for s in report.per_class.values()]
    fig = _new_figure(max(4.0, 1.2 * len(labels) + 2), 3.5)
    ax = fig.add_subplot()
    ax.bar(x - 0.2, prec, 0.4, label="precision", color=STYLE["colors"][0])
    ax.bar(x + 0.2, rec, 0.4, label="recall", color=STYLE["colors"][1])
    ax.set_xticks(x, labels)
    ax.set_ylim(0, 1.2)
    ax.legend(loc="upper center", ncol=2, frameon=False)
    ax.set_title(title or "per-class precision and recall")
    return _save(fig, path)


def plot_comparison(comparison: Comparison, path, title=None) -> Path:
    names = [name for name, _ in comparison.rows]
    metrics = {
        "accuracy": [r.accuracy for _, r in comparison.rows],
        "macro precision": [r.macro_precision or 0.0 for _, r in comparison.rows],
        "macro recall": [r.macro_recall or 0.0 for _, r in comparison.rows],
    }
    x = np.arange(len(names))
    width = 0.8 / len(metrics)
    fig = _new_figure(max(5.0, 1.4 * len(names) + 2), 3.8)
    ax = fig.add_subplot()
    for i, (metric, values) in enumerate(metrics.items()):
        ax.bar(x + (i - 1) * width, values, width, label=metric, color=STYLE["colors"][i])
    ax.set_xticks(x, names)
    ax.set_ylim(0, 1.2)
    ax.legend(loc="upper center", ncol=len(metrics), frameon=False, fontsize="small")
    ax.set_title(title or "classifier comparison")
    return _save(fig, path)


def report_figures(report: EvalReport, out_dir, prefix="report") -> list[Path]:
    out_dir = Path(out_dir)
    return [
        plot_confusion(report, out_dir / f"{prefix}_confusion.png"),
        plot_per_class(report, out_dir / f"{prefix}_per_class.png"),
    ]


def comparison_figures(comparison: Comparison, out_dir, prefix="compare") -> list[Path]:
    out_dir = Path(out_dir)
    paths = [plot_comparison(comparison, out_dir / f"{prefix}_accuracy.png")]
    for name, report in comparison.rows:
        paths.append(plot_confusion(report, out_dir / f"{prefix}_{name}_confusion.png"))
    return paths
