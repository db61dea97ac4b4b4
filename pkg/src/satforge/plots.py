"""Static report figures rendered to files next to their CSV outputs."""
from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bench import TimingRecord

_METHOD_STYLE = {
    "naive": ("tab:red", "s"),
    "solver_loop": ("tab:orange", "^"),
    "ours": ("tab:blue", "o"),
}


def slack_histogram_figure(
    histograms: Mapping[tuple[str, int], Mapping[int, float]],
    path: str | Path,
    reference: Mapping[tuple[str, int], Mapping[int, float]] | None = None,
) -> Path:
    """One bar panel per (label, width) slack histogram, with an optional
    reference distribution drawn as outlined bars for comparison."""
    keys = sorted(histograms)
    if not keys:
        raise ValueError("nothing to plot")
    fig, axes = plt.subplots(
        1, len(keys), figsize=(3.2 * len(keys), 3.0), squeeze=False
    )
    for ax, key in zip(axes[0], keys):
        label, width = key
        dist = histograms[key]
        support = sorted(dist)
        ax.bar(support, [dist[s] for s in support], width=0.8, color="tab:blue",
               alpha=0.75, label="generated")
        if reference and key in reference:
            ref = reference[key]
            ref_support = sorted(ref)
            ax.bar(ref_support, [ref[s] for s in ref_support], width=0.8,
                   fill=False, edgecolor="black", linewidth=1.2, label="profile")
        ax.set_title(f"{label}, k={width}")
        ax.set_xlabel("slack")
        ax.set_ylabel("fraction")
        ax.set_xticks(range(width))
        ax.legend(fontsize=8)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def bench_scaling_figure(records: Sequence[TimingRecord], path: str | Path) -> Path:
    """Log-log median time against clause count, one line per method."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    by_method: dict[str, list[TimingRecord]] = {}
    for r in records:
        if r.usable and r.median_ms > 0:
            by_method.setdefault(r.method, []).append(r)
    if not by_method:
        raise ValueError("no usable records to plot")
    for method, recs in sorted(by_method.items()):
        recs.sort(key=lambda r: r.m)
        color, marker = _METHOD_STYLE.get(method, ("tab:gray", "x"))
        ax.plot([r.m for r in recs], [r.median_ms for r in recs],
                marker=marker, color=color, label=method)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("clauses m")
    ax.set_ylabel("median ms per labeled pair")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
