"""Training loop: joint label + assignment supervision.

Per instance the loss is binary cross entropy on the SAT/UNSAT label plus
binary cross entropy of the assignment logits against the instance's planted
assignment whenever one is known (the dataset manifest supplies it for both
labels; on UNSAT instances that target violates exactly one clause).
Runs are deterministic for a fixed seed on CPU.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import torch
from torch import nn

from .graphs import LpGraph
from .metrics import EvalMetrics, evaluate
from .model import LpResidualGNN, default_update

METRICS_HEADER = ("epoch", "loss", "accuracy", "csr", "k_over_m")


@dataclass
class TrainConfig:
    hidden_dim: int = 128
    num_layers: int = 16
    use_residual: bool = True
    epochs: int = 5
    lr: float = 1e-3
    weight_decay: float = 1e-6
    seed: int = 0
    update_builder: Callable[[int], nn.Module] = field(default=default_update)

    def build_model(self, dtype: torch.dtype = torch.float32) -> LpResidualGNN:
        torch.manual_seed(self.seed)
        return LpResidualGNN(
            hidden_dim=self.hidden_dim,
            num_layers=self.num_layers,
            use_residual=self.use_residual,
            update_builder=self.update_builder,
            dtype=dtype,
        )


@dataclass(frozen=True)
class EpochRow:
    epoch: int
    loss: float
    accuracy: float
    csr: float
    k_over_m: float


def instance_loss(
    model: LpResidualGNN, graph: LpGraph, bce: nn.BCEWithLogitsLoss
) -> torch.Tensor:
    class_logit, assign_logits = model(graph)
    target = torch.tensor(float(graph.label), dtype=class_logit.dtype)
    loss = bce(class_logit, target)
    if graph.witness is not None:
        bits = torch.tensor(graph.witness, dtype=assign_logits.dtype)
        loss = loss + bce(assign_logits, bits)
    return loss


def train(
    train_graphs: Sequence[LpGraph],
    config: TrainConfig,
    eval_graphs: Sequence[LpGraph] | None = None,
    log: Callable[[str], None] | None = None,
) -> tuple[LpResidualGNN, list[EpochRow]]:
    """Train a fresh model; returns it with one metrics row per epoch.

    Evaluation metrics are computed on `eval_graphs` when given, else on the
    training set itself.
    """
    if not train_graphs:
        raise ValueError("empty training dataset")
    model = config.build_model()
    optimizer = torch.optim.Adam(
        model.parameters(), lr=config.lr, weight_decay=config.weight_decay
    )
    bce = nn.BCEWithLogitsLoss()
    shuffler = torch.Generator().manual_seed(config.seed)
    held_out = eval_graphs if eval_graphs is not None else train_graphs
    rows: list[EpochRow] = []
    for epoch in range(1, config.epochs + 1):
        model.train()
        order = torch.randperm(len(train_graphs), generator=shuffler)
        total = 0.0
        for index in order.tolist():
            loss = instance_loss(model, train_graphs[index], bce)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            total += float(loss.detach())
        model.eval()
        scores: EvalMetrics = evaluate(model, held_out)
        row = EpochRow(
            epoch=epoch,
            loss=total / len(train_graphs),
            accuracy=scores.accuracy,
            csr=scores.csr,
            k_over_m=scores.k_over_m,
        )
        rows.append(row)
        if log is not None:
            log(
                f"epoch {row.epoch}: loss {row.loss:.4f} accuracy {row.accuracy:.3f} "
                f"csr {row.csr:.4f} k/m {row.k_over_m:.4f}"
            )
    return model, rows


def write_metrics_csv(rows: Sequence[EpochRow], path: str | Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(METRICS_HEADER)
        for row in rows:
            writer.writerow(
                [row.epoch, f"{row.loss:.6f}", f"{row.accuracy:.6f}",
                 f"{row.csr:.6f}", f"{row.k_over_m:.6f}"]
            )


def read_metrics_csv(path: str | Path) -> list[EpochRow]:
    rows = []
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or tuple(reader.fieldnames) != METRICS_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        for record in reader:
            rows.append(
                EpochRow(
                    epoch=int(record["epoch"]),
                    loss=float(record["loss"]),
                    accuracy=float(record["accuracy"]),
                    csr=float(record["csr"]),
                    k_over_m=float(record["k_over_m"]),
                )
            )
    return rows


def save_model(model: LpResidualGNN, config: TrainConfig, path: str | Path) -> None:
    torch.save(
        {
            "hidden_dim": config.hidden_dim,
            "num_layers": config.num_layers,
            "use_residual": config.use_residual,
            "state_dict": model.state_dict(),
        },
        path,
    )


def load_model(path: str | Path) -> LpResidualGNN:
    payload = torch.load(path, weights_only=True)
    model = LpResidualGNN(
        hidden_dim=payload["hidden_dim"],
        num_layers=payload["num_layers"],
        use_residual=payload["use_residual"],
    )
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model
