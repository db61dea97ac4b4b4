"""Binary linear view of CNF and residual math over the slack-augmented system.

A clause with positive variable set P and negative variable set N is satisfied
by x in {0,1}^n iff sum(x_j, j in P) - sum(x_j, j in N) >= 1 - |N|, so a
formula maps to A x >= b with A in {-1, 0, 1}^(m x n) and b_i = 1 - |N_i|.
Adding per-clause slacks s_i in {0..k_i-1} turns it into the equality system
A_hat z = b with A_hat = [A | -I] and z = [x; s].
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .cnf import Assignment, CnfFormula, evaluate_clause


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """A x >= b encoding of a formula; A is CSR with int8 entries in {-1,0,1}."""

    a: sp.csr_matrix
    b: np.ndarray

    def __post_init__(self) -> None:
        if self.a.dtype != np.int8:
            raise ValueError(f"A must be int8, got {self.a.dtype}")
        if self.b.shape != (self.a.shape[0],):
            raise ValueError(
                f"b has shape {self.b.shape}, expected ({self.a.shape[0]},)"
            )
        if self.a.nnz and not np.isin(self.a.data, (-1, 1)).all():
            raise ValueError("A entries must lie in {-1, 0, 1}")

    @property
    def num_clauses(self) -> int:
        return self.a.shape[0]

    @property
    def num_vars(self) -> int:
        return self.a.shape[1]


@dataclass(frozen=True, eq=False)
class AugmentedSystem:
    """Equality system A_hat z = b with A_hat = [A | -I] and z = [x; s]."""

    a_hat: sp.csr_matrix
    b: np.ndarray
    widths: np.ndarray

    def __post_init__(self) -> None:
        m, cols = self.a_hat.shape
        if cols != self.num_vars + m:
            raise ValueError(f"A_hat must be m x (n + m), got {self.a_hat.shape}")
        if self.b.shape != (m,) or self.widths.shape != (m,):
            raise ValueError("b and widths must each have one entry per clause")

    @property
    def num_clauses(self) -> int:
        return self.a_hat.shape[0]

    @property
    def num_vars(self) -> int:
        return self.a_hat.shape[1] - self.a_hat.shape[0]

    @property
    def slack_bounds(self) -> np.ndarray:
        """Inclusive upper bound of each slack variable: k_i - 1."""
        return self.widths - 1


@dataclass(frozen=True, eq=False)
class SlackVector:
    """Per-clause induced slack values; -1 marks a violated clause."""

    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", np.asarray(self.values, dtype=np.int64)
        )

    def __len__(self) -> int:
        return len(self.values)


def encode_cnf(formula: CnfFormula) -> LinearSystem:
    """Encode a formula as A x >= b with A_ij = +1 / -1 for positive / negative literals."""
    rows: list[int] = []
    cols: list[int] = []
    data: list[int] = []
    b = np.zeros(formula.num_clauses, dtype=np.int64)
    for i, clause in enumerate(formula.clauses):
        negatives = 0
        for lit in clause.lits:
            rows.append(i)
            cols.append(abs(lit) - 1)
            if lit > 0:
                data.append(1)
            else:
                data.append(-1)
                negatives += 1
        b[i] = 1 - negatives
    a = sp.csr_matrix(
        (np.asarray(data, dtype=np.int8), (rows, cols)),
        shape=(formula.num_clauses, formula.num_vars),
    )
    return LinearSystem(a, b)


def augment(system: LinearSystem, widths: np.ndarray) -> AugmentedSystem:
    """Append -I slack columns: A_hat = [A | -I], one slack per clause."""
    widths = np.asarray(widths, dtype=np.int64)
    m = system.num_clauses
    if widths.shape != (m,):
        raise ValueError(f"widths has shape {widths.shape}, expected ({m},)")
    row_nnz = np.diff(system.a.indptr)
    if not np.array_equal(row_nnz, widths):
        raise ValueError("widths must match the nonzero count of each row of A")
    a_hat = sp.hstack(
        [system.a, -sp.identity(m, dtype=np.int8, format="csr")], format="csr"
    )
    return AugmentedSystem(a_hat, system.b, widths)


def encode_augmented(formula: CnfFormula) -> AugmentedSystem:
    """Convenience: encode a formula straight to its slack-augmented system."""
    system = encode_cnf(formula)
    return augment(system, np.asarray(formula.widths(), dtype=np.int64))


def induced_slack(formula: CnfFormula, assignment: Assignment) -> SlackVector:
    """Per-clause slack under an assignment: satisfied-literal count minus one.

    Computed directly from clause semantics, not via the matrix encoding, so
    it can serve as an independent check of that encoding. A violated clause
    yields -1, outside the feasible slack range.
    """
    values = np.empty(formula.num_clauses, dtype=np.int64)
    for i, clause in enumerate(formula.clauses):
        values[i] = evaluate_clause(clause, assignment) - 1
    return SlackVector(values)


def assemble_z(assignment: Assignment, slack: SlackVector) -> np.ndarray:
    """Stack [x; s] into one float vector for residual evaluation."""
    return np.concatenate(
        [np.asarray(assignment.values, dtype=np.float64), slack.values.astype(np.float64)]
    )


def clause_residual(system: AugmentedSystem, z: np.ndarray) -> np.ndarray:
    """Residual r = A_hat z - b; zero exactly on feasible (x, s) pairs."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (system.a_hat.shape[1],):
        raise ValueError(
            f"z has shape {z.shape}, expected ({system.a_hat.shape[1]},)"
        )
    return system.a_hat @ z - system.b


def node_residual(system: AugmentedSystem, r: np.ndarray) -> np.ndarray:
    """Back-projected residual g = A_hat^T r, the gradient of 0.5 * ||A_hat z - b||^2."""
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (system.num_clauses,):
        raise ValueError(f"r has shape {r.shape}, expected ({system.num_clauses},)")
    return system.a_hat.T @ r
