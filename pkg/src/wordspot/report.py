"""Figure rendering for evaluation reports and weight diagnostics.

Figures are written straight to files next to the delimited reports, so the
CLI stays usable on headless machines.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from wordspot.evaluation import PRReport
from wordspot.weighting import WeightVector


def save_pr_figure(
    report: PRReport,
    path: str | os.PathLike,
    compare: PRReport | None = None,
    labels: tuple[str, str] = ("weighted", "uniform"),
) -> None:
    """Per-query precision and recall chart, optionally two runs side by side."""
    runs = [(report, labels[0])]
    if compare is not None:
        runs.append((compare, labels[1]))
    x = np.arange(len(report.outcomes))
    words = [o.word for o in report.outcomes]

    fig, (ax_p, ax_r) = plt.subplots(2, 1, figsize=(max(7, len(x) * 0.35), 6),
                                     sharex=True)
    for rep, label in runs:
        ax_p.plot(x, [o.precision for o in rep.outcomes], marker="o",
                  markersize=3.5, linewidth=1.0,
                  label=f"{label} (avg {rep.avg_precision:.2f}%)")
        ax_r.plot(x, [o.recall for o in rep.outcomes], marker="o",
                  markersize=3.5, linewidth=1.0,
                  label=f"{label} (avg {rep.avg_recall:.2f}%)")
    ax_p.set_ylabel("precision (%)")
    ax_r.set_ylabel("recall (%)")
    for ax in (ax_p, ax_r):
        ax.set_ylim(-5, 105)
        ax.grid(True, alpha=0.3)
        ax.legend(loc="lower left", fontsize=8)
    ax_r.set_xticks(x)
    ax_r.set_xticklabels(words, rotation=90, fontsize=7)
    ax_r.set_xlabel("query")
    fig.suptitle("retrieval precision and recall per query")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_weight_figure(weights: WeightVector, path: str | os.PathLike) -> None:
    """Weight and lambda profile over the 93 feature slots."""
    x = np.arange(weights.dim)
    fig, (ax_w, ax_l) = plt.subplots(2, 1, figsize=(9, 5), sharex=True)
    ax_w.bar(x, weights.weight, width=0.9)
    ax_w.set_ylabel("weight")
    ax_l.bar(x, weights.lam, width=0.9, color="darkorange")
    ax_l.set_ylabel("multiple correlation")
    ax_l.set_xlabel("feature index")
    for ax in (ax_w, ax_l):
        ax.grid(True, axis="y", alpha=0.3)
    fig.suptitle("learned feature weights")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
