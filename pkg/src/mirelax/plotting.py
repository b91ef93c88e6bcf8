"""Figure rendering for the stats and eval reports.

Figures are written next to the delimited output files; nothing here is
interactive, so the Agg backend is forced before pyplot loads.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import MetricsReport
from .merging import SubqueryStats

_FIG_DPI = 120


def save_stats_figure(
    per_topic: Mapping[str, Sequence[SubqueryStats]],
    path: str | Path,
    title: str = "Relative number of results per subquery",
) -> None:
    """Grouped bar chart: one group per topic, one bar per subquery,
    bar height the fraction of the per-subquery fetch limit."""
    topics = sorted(per_topic)
    max_subqueries = max((len(per_topic[t]) for t in topics), default=0)
    fig, ax = plt.subplots(figsize=(max(6.0, 1.6 * len(topics)), 4.0))
    if topics and max_subqueries:
        group_width = 0.84
        bar_width = group_width / max_subqueries
        cmap = plt.get_cmap("viridis")
        for sq in range(max_subqueries):
            xs, heights = [], []
            for ti, topic in enumerate(topics):
                rows = per_topic[topic]
                if sq < len(rows):
                    xs.append(ti - group_width / 2 + (sq + 0.5) * bar_width)
                    heights.append(rows[sq].fraction)
            ax.bar(
                xs,
                heights,
                width=bar_width,
                color=cmap(sq / max(1, max_subqueries - 1) * 0.9),
                label=f"subquery {sq + 1}",
            )
        ax.set_xticks(range(len(topics)))
        ax.set_xticklabels(topics, rotation=30, ha="right")
        ax.legend(fontsize=8, ncol=2)
    ax.set_ylabel("fraction of fetch limit")
    ax.set_ylim(bottom=0)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=_FIG_DPI)
    plt.close(fig)


def save_metrics_figure(report: MetricsReport, path: str | Path, title: str = "") -> None:
    """Bar chart of the macro-averaged metrics."""
    labels = ["Bpref", "MAP", "P@1", "P@5", "P@10"]
    values = [
        report.bpref,
        report.mean_average_precision,
        report.precision_at_1,
        report.precision_at_5,
        report.precision_at_10,
    ]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    bars = ax.bar(labels, values, color="#33658a")
    ax.bar_label(bars, fmt="%.4f", fontsize=8)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("macro average")
    ax.set_title(title or f"metrics over {report.evaluated_topics} topics")
    fig.tight_layout()
    fig.savefig(path, dpi=_FIG_DPI)
    plt.close(fig)
