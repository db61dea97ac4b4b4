"""Shared test helpers.

Datasets come from the `satforge` command-line tool run as a subprocess —
this package consumes only its exported files. Handcrafted records are
built directly against the documented record shape for unit tests that
need exact, small systems.
"""

from __future__ import annotations

import json
import subprocess
from pathlib import Path

import numpy as np

from satgnn import GRAPH_FORMAT, GRAPH_VERSION, SAT


def run_satforge(*args: str) -> subprocess.CompletedProcess:
    result = subprocess.run(
        ["satforge", *args], capture_output=True, text=True
    )
    if result.returncode != 0:
        raise RuntimeError(
            f"satforge {' '.join(args)} failed ({result.returncode}):\n"
            f"{result.stdout}{result.stderr}"
        )
    return result


def build_dataset(
    out_dir: Path,
    count: int,
    seed: int,
    *,
    n_range: str = "10:20",
    sat_fraction: float = 0.5,
    fmt: str = "binary",
    jobs: int = 1,
) -> Path:
    """Generate a certified dataset and export its graph records into it."""
    run_satforge(
        "generate",
        "-o",
        str(out_dir),
        "--count",
        str(count),
        "--sat-fraction",
        str(sat_fraction),
        "--n-range",
        n_range,
        "--seed",
        str(seed),
        "--jobs",
        str(jobs),
    )
    run_satforge(
        "export",
        str(out_dir / "manifest.jsonl"),
        "-o",
        str(out_dir),
        "--format",
        fmt,
    )
    return out_dir


def export_as(manifest: Path, out_dir: Path, fmt: str) -> Path:
    run_satforge("export", str(manifest), "-o", str(out_dir), "--format", fmt)
    return out_dir


def record_from_clauses(
    n: int,
    clauses: list[list[int]],
    label: str,
    witness: str | None = None,
) -> dict:
    """Build a graph record for a formula given as signed 1-based literals."""
    m = len(clauses)
    rows: list[int] = []
    cols: list[int] = []
    vals: list[int] = []
    widths: list[int] = []
    b: list[int] = []
    pos = np.zeros(n, dtype=np.int64)
    neg = np.zeros(n, dtype=np.int64)
    slack_features = []
    for i, clause in enumerate(clauses):
        variables = [abs(lit) for lit in clause]
        assert len(set(variables)) == len(clause), "repeated variable in clause"
        assert all(1 <= v <= n for v in variables)
        clause_pos = clause_neg = 0
        for lit in sorted(clause, key=abs):
            rows.append(i)
            cols.append(abs(lit) - 1)
            vals.append(1 if lit > 0 else -1)
            if lit > 0:
                pos[abs(lit) - 1] += 1
                clause_pos += 1
            else:
                neg[abs(lit) - 1] += 1
                clause_neg += 1
        rows.append(i)
        cols.append(n + i)
        vals.append(-1)
        widths.append(len(clause))
        b.append(1 - clause_neg)
        slack_features.append([len(clause), 1 - clause_neg, clause_pos, clause_neg])
    record = {
        "format": GRAPH_FORMAT,
        "version": GRAPH_VERSION,
        "n": n,
        "m": m,
        "label": label,
        "widths": widths,
        "b": b,
        "a_hat": {"rows": rows, "cols": cols, "vals": vals},
        "var_features": [[int(pos[j] + neg[j]), int(pos[j]), int(neg[j])] for j in range(n)],
        "slack_features": slack_features,
    }
    if witness is not None and label == SAT:
        record["witness"] = witness
    return record


def single_clause_record() -> dict:
    """(x1 v x2) with witness (1,1): A-hat = [1, 1, -1], b = [1]."""
    return record_from_clauses(2, [[1, 2]], SAT, witness="11")


def permute_record(record: dict, perm_x: list[int], perm_c: list[int]) -> dict:
    """Relabel variables by perm_x and reorder clauses by perm_c.

    perm_x[j] is the new index of old variable j; perm_c[i] the new position
    of old clause i. Slack columns move with their clauses.
    """
    n, m = record["n"], record["m"]
    assert sorted(perm_x) == list(range(n)) and sorted(perm_c) == list(range(m))
    triplets = sorted(
        (
            perm_c[r],
            perm_x[c] if c < n else n + perm_c[c - n],
            v,
        )
        for r, c, v in zip(
            record["a_hat"]["rows"], record["a_hat"]["cols"], record["a_hat"]["vals"]
        )
    )
    widths = [0] * m
    b = [0] * m
    slack_features = [None] * m
    for i in range(m):
        widths[perm_c[i]] = record["widths"][i]
        b[perm_c[i]] = record["b"][i]
        slack_features[perm_c[i]] = record["slack_features"][i]
    var_features = [None] * n
    for j in range(n):
        var_features[perm_x[j]] = record["var_features"][j]
    permuted = {
        "format": record["format"],
        "version": record["version"],
        "n": n,
        "m": m,
        "label": record["label"],
        "widths": widths,
        "b": b,
        "a_hat": {
            "rows": [t[0] for t in triplets],
            "cols": [t[1] for t in triplets],
            "vals": [t[2] for t in triplets],
        },
        "var_features": var_features,
        "slack_features": slack_features,
    }
    if "witness" in record:
        bits = [None] * n
        for j in range(n):
            bits[perm_x[j]] = record["witness"][j]
        permuted["witness"] = "".join(bits)
    return permuted


def dense_a_hat(record: dict) -> np.ndarray:
    """Dense m x (n+m) matrix from a record's triplets (independent route)."""
    matrix = np.zeros((record["m"], record["n"] + record["m"]), dtype=np.int64)
    for r, c, v in zip(
        record["a_hat"]["rows"], record["a_hat"]["cols"], record["a_hat"]["vals"]
    ):
        matrix[r, c] = v
    return matrix


def write_record_json(record: dict, path: Path) -> Path:
    path.write_text(json.dumps(record))
    return path
