"""Figures for experiment reports, written next to the CSV."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .evaluation import ExperimentRow, best_strategy_recall  # noqa: E402

LANGUAGE_ORDER = ("random", "single", "chain", "chaintree", "blktree")
LABELS = {"random": "R", "single": "SH", "chain": "C", "chaintree": "CT", "blktree": "HBT"}

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.linewidth": 0.5,
    "svg.hashsalt": "cblock",
}


def _languages(best) -> list[str]:
    present = {lang for _, lang, _ in best}
    return [lang for lang in LANGUAGE_ORDER if lang in present]


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None} if path.suffix == ".svg" else None)
    plt.close(fig)
    return path


def plot_overall_recall(rows: Sequence[ExperimentRow], path: Path) -> Path:
    best = best_strategy_recall(rows)
    sizes = sorted({S for S, _, _ in best})
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        for lang in _languages(best):
            ax.plot(sizes, [best[(S, lang, 1)] for S in sizes], marker="o", label=LABELS[lang])
        ax.set_xscale("log")
        ax.set_xlabel("max canopy size S")
        ax.set_ylabel("recall (disjoint)")
        ax.set_ylim(0, 1.02)
        ax.legend(loc="lower right")
        return _save(fig, path)


def plot_disjoint_nondisjoint(rows: Sequence[ExperimentRow], path: Path) -> Path:
    best = best_strategy_recall(rows)
    sizes = sorted({S for S, _, _ in best})
    R = max(r for _, _, r in best)
    langs = [lang for lang in _languages(best) if lang != "random"]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        width = 0.8 / max(len(langs), 1)
        for k, lang in enumerate(langs):
            xs = [i + k * width for i in range(len(sizes))]
            gain = [best[(S, lang, R)] - best[(S, lang, 1)] for S in sizes]
            ax.bar(xs, gain, width=width, label=LABELS[lang])
        ax.set_xticks([i + 0.4 - width / 2 for i in range(len(sizes))])
        ax.set_xticklabels([str(S) for S in sizes])
        ax.set_xlabel("max canopy size S")
        ax.set_ylabel(f"recall gain, {R} rounds vs 1")
        ax.legend()
        return _save(fig, path)


def plot_iterations(rows: Sequence[ExperimentRow], path: Path, S: int) -> Path:
    best = best_strategy_recall(rows)
    R = max(r for _, _, r in best)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        for lang in _languages(best):
            ax.plot(range(1, R + 1), [best[(S, lang, r)] for r in range(1, R + 1)], marker="o", label=LABELS[lang] + "-ND")
        ax.set_xlabel("rounds")
        ax.set_ylabel(f"recall (S={S})")
        ax.set_xticks(range(1, R + 1))
        ax.legend(loc="lower right")
        return _save(fig, path)


def render_report_figures(
    rows: Sequence[ExperimentRow], out_dir: Union[str, Path], prefix: str = "", fmt: str = "png"
) -> list[Path]:
    """Recall vs S, non-disjoint gain, and recall vs rounds at the middle S."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if not rows:
        return []
    sizes = sorted({row.S for row in rows})
    return [
        plot_overall_recall(rows, out / f"{prefix}overall_recall.{fmt}"),
        plot_disjoint_nondisjoint(rows, out / f"{prefix}disjoint_nondisjoint.{fmt}"),
        plot_iterations(rows, out / f"{prefix}iterations.{fmt}", sizes[len(sizes) // 2]),
    ]
