"""Per-instance graph export of the slack-augmented system.

Each instance becomes one self-contained record: sparse A_hat = [A | -I] in
row-major triplet order, the right-hand side b, clause widths, per-node
features, the label, and the witness for SAT instances. Two encodings carry
the identical record: JSON and a length-prefixed little-endian binary
format, both specified field by field in docs/FORMATS.md.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .cnf import SAT, UNSAT, Assignment, CnfFormula
from .encode import encode_augmented
from .generate import GeneratedInstance

GRAPH_FORMAT = "satforge-graph"
GRAPH_VERSION = 1
_MAGIC = b"SFGRAPH\x00"


def graph_record(
    formula: CnfFormula, label: str, witness: Assignment | None = None
) -> dict:
    """Build the exportable record for one instance.

    Variable-node features are [degree, positive occurrences, negative
    occurrences]; slack-node features are [clause width, b_i, positive
    literal count, negative literal count]. Triplets cover the full A_hat
    including the -I slack block; graph consumers treat columns >= n as
    slack-node self-attachments rather than edges.
    """
    system = encode_augmented(formula)
    n, m = system.num_vars, system.num_clauses
    coo = system.a_hat.tocoo()
    order = np.lexsort((coo.col, coo.row))
    rows = coo.row[order]
    cols = coo.col[order]
    vals = coo.data[order]
    pos_by_var = np.zeros(n, dtype=np.int64)
    neg_by_var = np.zeros(n, dtype=np.int64)
    pos_by_clause = np.zeros(m, dtype=np.int64)
    neg_by_clause = np.zeros(m, dtype=np.int64)
    for clause_i, col, val in zip(rows, cols, vals):
        if col >= n:
            continue
        if val > 0:
            pos_by_var[col] += 1
            pos_by_clause[clause_i] += 1
        else:
            neg_by_var[col] += 1
            neg_by_clause[clause_i] += 1
    widths = system.widths
    record = {
        "format": GRAPH_FORMAT,
        "version": GRAPH_VERSION,
        "n": n,
        "m": m,
        "label": label,
        "widths": [int(w) for w in widths],
        "b": [int(v) for v in system.b],
        "a_hat": {
            "rows": [int(v) for v in rows],
            "cols": [int(v) for v in cols],
            "vals": [int(v) for v in vals],
        },
        "var_features": [
            [int(pos_by_var[j] + neg_by_var[j]), int(pos_by_var[j]), int(neg_by_var[j])]
            for j in range(n)
        ],
        "slack_features": [
            [int(widths[i]), int(system.b[i]), int(pos_by_clause[i]), int(neg_by_clause[i])]
            for i in range(m)
        ],
    }
    if label == SAT:
        if witness is None:
            raise ValueError("SAT export requires a witness")
        record["witness"] = witness.to_bits()
    return record


def record_from_instance(inst: GeneratedInstance) -> dict:
    return graph_record(inst.formula, inst.label, inst.witness)


def write_graph_json(record: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(record) + "\n")


def read_graph_json(path: str | Path) -> dict:
    record = json.loads(Path(path).read_text())
    if record.get("format") != GRAPH_FORMAT or record.get("version") != GRAPH_VERSION:
        raise ValueError(f"{path}: not a {GRAPH_FORMAT} v{GRAPH_VERSION} record")
    return record


def write_graph_binary(record: dict, path: str | Path) -> None:
    """Serialize a record to the length-prefixed little-endian layout."""
    n, m = record["n"], record["m"]
    witness = record.get("witness")
    out = bytearray()
    out += _MAGIC
    out += struct.pack(
        "<IIIII",
        GRAPH_VERSION,
        n,
        m,
        1 if record["label"] == SAT else 0,
        1 if witness is not None else 0,
    )
    out += struct.pack(f"<I{m}I", m, *record["widths"])
    out += struct.pack(f"<I{m}q", m, *record["b"])
    trip = record["a_hat"]
    nnz = len(trip["rows"])
    out += struct.pack("<I", nnz)
    for r, c, v in zip(trip["rows"], trip["cols"], trip["vals"]):
        out += struct.pack("<IIb", r, c, v)
    out += struct.pack("<I", n)
    for feats in record["var_features"]:
        out += struct.pack("<3q", *feats)
    out += struct.pack("<I", m)
    for feats in record["slack_features"]:
        out += struct.pack("<4q", *feats)
    if witness is not None:
        bits = np.array([1 if ch == "1" else 0 for ch in witness], dtype=np.uint8)
        packed = np.packbits(bits, bitorder="little").tobytes()
        out += struct.pack("<I", n)
        out += packed
    Path(path).write_bytes(bytes(out))


def read_graph_binary(path: str | Path) -> dict:
    """Decode the binary layout back to the exact JSON-equivalent record."""
    data = Path(path).read_bytes()
    if data[:8] != _MAGIC:
        raise ValueError(f"{path}: bad magic")
    off = 8
    version, n, m, label_bit, has_witness = struct.unpack_from("<IIIII", data, off)
    off += 20
    if version != GRAPH_VERSION:
        raise ValueError(f"{path}: unsupported version {version}")

    def take(fmt: str) -> tuple:
        nonlocal off
        vals = struct.unpack_from(fmt, data, off)
        off += struct.calcsize(fmt)
        return vals

    (count,) = take("<I")
    widths = list(take(f"<{count}I"))
    (count,) = take("<I")
    b = list(take(f"<{count}q"))
    (nnz,) = take("<I")
    rows, cols, vals = [], [], []
    for _ in range(nnz):
        r, c, v = take("<IIb")
        rows.append(r)
        cols.append(c)
        vals.append(v)
    (count,) = take("<I")
    var_features = [list(take("<3q")) for _ in range(count)]
    (count,) = take("<I")
    slack_features = [list(take("<4q")) for _ in range(count)]
    record = {
        "format": GRAPH_FORMAT,
        "version": version,
        "n": n,
        "m": m,
        "label": SAT if label_bit else UNSAT,
        "widths": widths,
        "b": b,
        "a_hat": {"rows": rows, "cols": cols, "vals": vals},
        "var_features": var_features,
        "slack_features": slack_features,
    }
    if has_witness:
        (nbits,) = take("<I")
        nbytes = (nbits + 7) // 8
        packed = np.frombuffer(data[off : off + nbytes], dtype=np.uint8)
        off += nbytes
        bits = np.unpackbits(packed, count=nbits, bitorder="little")
        record["witness"] = "".join("1" if bit else "0" for bit in bits)
    if off != len(data):
        raise ValueError(f"{path}: {len(data) - off} trailing bytes")
    return record
