"""Evaluation metrics computed by exact clause evaluation.

Clause satisfaction is decided purely from the instance's integer system —
clause i is satisfied by x exactly when its variable-column row dotted with
x reaches b_i — never from model internals. The model only contributes the
predicted label probability and the thresholded assignment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Protocol

import numpy as np

from .graphs import LpGraph


class Predictor(Protocol):
    def predict(self, graph: LpGraph) -> tuple[float, np.ndarray]: ...


def satisfied_mask(graph: LpGraph, assignment: np.ndarray) -> np.ndarray:
    """Boolean per-clause satisfaction of `assignment`, by integer arithmetic."""
    assignment = np.asarray(assignment)
    if assignment.shape != (graph.n,):
        raise ValueError(f"assignment has shape {assignment.shape}, expected ({graph.n},)")
    var_part = graph.cols < graph.n
    lhs = np.zeros(graph.m, dtype=np.int64)
    np.add.at(
        lhs,
        graph.rows[var_part],
        graph.vals[var_part] * assignment.astype(np.int64)[graph.cols[var_part]],
    )
    return lhs >= graph.b_ints


def satisfied_fraction(graph: LpGraph, assignment: np.ndarray) -> float:
    return float(satisfied_mask(graph, assignment).mean())


@dataclass(frozen=True)
class EvalMetrics:
    accuracy: float
    csr: float  # mean satisfied-clause fraction on SAT instances
    k_over_m: float  # mean violated-clause fraction on UNSAT instances
    n_sat: int
    n_unsat: int


def evaluate(model: Predictor, graphs: Iterable[LpGraph]) -> EvalMetrics:
    """Label accuracy plus assignment quality on both labels.

    CSR averages the satisfied fraction of the predicted assignment over the
    SAT instances; k/m averages the violated fraction over the UNSAT ones.
    Either is NaN when its label is absent.
    """
    correct = total = 0
    sat_fractions: list[float] = []
    unsat_fractions: list[float] = []
    for graph in graphs:
        probability, assignment = model.predict(graph)
        predicted = 1 if probability > 0.5 else 0
        correct += int(predicted == graph.label)
        total += 1
        fraction = satisfied_fraction(graph, assignment)
        if graph.label == 1:
            sat_fractions.append(fraction)
        else:
            unsat_fractions.append(1.0 - fraction)
    if total == 0:
        raise ValueError("no graphs to evaluate")
    return EvalMetrics(
        accuracy=correct / total,
        csr=float(np.mean(sat_fractions)) if sat_fractions else math.nan,
        k_over_m=float(np.mean(unsat_fractions)) if unsat_fractions else math.nan,
        n_sat=len(sat_fractions),
        n_unsat=len(unsat_fractions),
    )
