"""Figure rendering for the report path: every delimited report gets a PNG."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .profiler import DistributionReport, ReportComparison

_FIGSIZE = (7.0, 3.6)
_DPI = 120


def _finish(fig, ax, path: str | Path, rotate: bool) -> None:
    if rotate:
        for label in ax.get_xticklabels():
            label.set_rotation(45)
            label.set_horizontalalignment("right")
    fig.tight_layout()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_distribution(report: DistributionReport, path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    keys = [k for k, _ in report.bins]
    props = [p for _, p in report.bins]
    ax.bar(range(len(keys)), props, color="#4878a8")
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels(keys)
    ax.set_ylabel("proportion")
    ax.set_title(f"{report.facet} (n={report.total})")
    _finish(fig, ax, path, rotate=len(keys) > 8 or any(len(k) > 4 for k in keys))


def render_comparison(comparison: ReportComparison, path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    keys = [k for k, *_ in comparison.gaps]
    left = [a for _, a, _, _ in comparison.gaps]
    right = [b for _, _, b, _ in comparison.gaps]
    xs = range(len(keys))
    ax.plot(xs, left, marker="o", label="dataset")
    ax.plot(xs, right, marker="s", label="reference")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(keys)
    ax.set_ylabel("proportion")
    ax.set_title(f"{comparison.facet} (max gap {comparison.max_gap:.4f})")
    ax.legend()
    _finish(fig, ax, path, rotate=len(keys) > 8)


def render_importance(rows: Sequence[tuple[str, float, float]], path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    names = [n for n, _, _ in rows]
    means = [m for _, m, _ in rows]
    stds = [s for _, _, s in rows]
    ax.bar(range(len(names)), means, yerr=stds, capsize=3, color="#4878a8")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names)
    ax.set_ylabel("importance")
    ax.set_title("feature contributions across forest trees")
    _finish(fig, ax, path, rotate=True)


def render_tune_grid(points: Iterable[tuple[float, float]], best: float, path: str | Path) -> None:
    pts = list(points)
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot([t for t, _ in pts], [f for _, f in pts], marker="o")
    ax.axvline(best, color="#a84848", linestyle="--", label=f"best = {best:g}")
    ax.set_xlabel("distance threshold")
    ax.set_ylabel("B3-F1")
    ax.set_title("threshold tuning grid")
    ax.legend()
    _finish(fig, ax, path, rotate=False)
