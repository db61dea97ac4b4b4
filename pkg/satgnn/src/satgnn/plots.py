"""Training-curve charts rendered from a metrics CSV."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .train import EpochRow

RANDOM_ASSIGNMENT_CSR = 7 / 8  # width-3 floor: 1 - 2^-3


def training_curves(rows: Sequence[EpochRow], path: str | Path) -> None:
    """Two panels: training loss, and accuracy/CSR/k-over-m per epoch."""
    if not rows:
        raise ValueError("no metrics rows to plot")
    epochs = [row.epoch for row in rows]
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    left.plot(epochs, [row.loss for row in rows], marker="o", color="tab:red")
    left.set_xlabel("epoch")
    left.set_ylabel("training loss")
    left.set_title("loss")
    left.grid(True, alpha=0.3)
    right.plot(epochs, [row.accuracy for row in rows], marker="o", label="accuracy")
    right.plot(epochs, [row.csr for row in rows], marker="s", label="CSR (SAT)")
    right.plot(epochs, [row.k_over_m for row in rows], marker="^", label="k/m (UNSAT)")
    right.axhline(
        RANDOM_ASSIGNMENT_CSR,
        linestyle="--",
        color="gray",
        label="random-assignment CSR floor",
    )
    right.set_xlabel("epoch")
    right.set_ylabel("metric")
    right.set_ylim(0.0, 1.05)
    right.set_title("evaluation metrics")
    right.legend(fontsize=8)
    right.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
