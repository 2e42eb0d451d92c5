"""Figures for evaluation reports."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .oracle import EvalReport  # noqa: E402


def plot_eval(report: EvalReport, path: str | os.PathLike) -> None:
    """Expression counts per graph size, with the share that needed a name tie-break."""
    sizes = sorted(report.by_size)
    counts = [report.by_size[s][0] for s in sizes]
    rates = [report.by_size[s][1] / report.by_size[s][0] for s in sizes]

    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.bar(sizes, counts, color="0.75", label="expressions")
    ax.set_xlabel("vertices")
    ax.set_ylabel("expressions")
    ax.set_xticks(sizes)

    ax2 = ax.twinx()
    ax2.plot(sizes, rates, "o-", color="C3", label="tie-break rate")
    ax2.set_ylabel("tie-break rate")
    ax2.set_ylim(0, 1)

    ax.set_title(
        f"{report.pairs_tested} pairs, false_equal={report.false_equal}, "
        f"missed_equal={report.missed_equal}",
        fontsize=9,
    )
    handles = ax.get_legend_handles_labels()[0] + ax2.get_legend_handles_labels()[0]
    ax.legend(handles, [h.get_label() for h in handles], loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
