"""Load exported graph records into tensors.

The input files are the graph records and dataset manifests produced by the
`satforge` command-line tool. Their on-disk formats (JSON and a fixed
little-endian binary layout, plus the manifest.jsonl row schema) are
specified field by field in the generator's docs/FORMATS.md; the readers
here implement those documents independently — this package never imports
the generator.

A record describes one CNF instance as a slack-augmented linear system
[A | -I] z >= ... with z = [x; s]: clause i over variables J with
b_i = 1 - (#negative literals) is satisfied by x in {0,1}^n exactly when
sum_j A_ij x_j >= b_i. The graph view is bipartite: n variable nodes and
m slack nodes, one edge per nonzero A_ij (attribute A_ij = +-1); the -I
entries are the slack nodes' own coefficients, not edges.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

GRAPH_FORMAT = "satforge-graph"
GRAPH_VERSION = 1
BINARY_MAGIC = b"SFGRAPH\x00"
MANIFEST_NAME = "manifest.jsonl"

SAT = "SAT"
UNSAT = "UNSAT"


def read_graph_json(path: str | Path) -> dict:
    """Read one JSON graph record, validating the format discriminator."""
    record = json.loads(Path(path).read_text())
    if record.get("format") != GRAPH_FORMAT:
        raise ValueError(f"{path}: not a {GRAPH_FORMAT} record")
    if record.get("version") != GRAPH_VERSION:
        raise ValueError(f"{path}: unsupported version {record.get('version')!r}")
    return record


def read_graph_binary(path: str | Path) -> dict:
    """Read one binary graph record into the same dict shape as the JSON form."""
    data = Path(path).read_bytes()
    if data[:8] != BINARY_MAGIC:
        raise ValueError(f"{path}: bad magic")
    off = 8
    version, n, m, label_bit, has_witness = struct.unpack_from("<IIIII", data, off)
    off += 20
    if version != GRAPH_VERSION:
        raise ValueError(f"{path}: unsupported version {version}")

    def take_u32() -> int:
        nonlocal off
        (value,) = struct.unpack_from("<I", data, off)
        off += 4
        return value

    count = take_u32()
    widths = list(struct.unpack_from(f"<{count}I", data, off))
    off += 4 * count
    count = take_u32()
    b = list(struct.unpack_from(f"<{count}q", data, off))
    off += 8 * count
    nnz = take_u32()
    rows, cols, vals = [], [], []
    for _ in range(nnz):
        r, c, v = struct.unpack_from("<IIb", data, off)
        off += 9
        rows.append(r)
        cols.append(c)
        vals.append(v)
    count = take_u32()
    flat = struct.unpack_from(f"<{3 * count}q", data, off)
    off += 24 * count
    var_features = [list(flat[3 * i : 3 * i + 3]) for i in range(count)]
    count = take_u32()
    flat = struct.unpack_from(f"<{4 * count}q", data, off)
    off += 32 * count
    slack_features = [list(flat[4 * i : 4 * i + 4]) for i in range(count)]
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
        nbits = take_u32()
        nbytes = (nbits + 7) // 8
        packed = np.frombuffer(data[off : off + nbytes], dtype=np.uint8)
        if packed.size != nbytes:
            raise ValueError(f"{path}: truncated witness")
        off += nbytes
        bits = np.unpackbits(packed, bitorder="little")[:nbits]
        record["witness"] = "".join(str(int(bit)) for bit in bits)
    if off != len(data):
        raise ValueError(f"{path}: {len(data) - off} trailing bytes")
    return record


def read_graph_file(path: str | Path) -> dict:
    """Dispatch on extension: .json / .bin."""
    path = Path(path)
    if path.suffix == ".bin":
        return read_graph_binary(path)
    return read_graph_json(path)


@dataclass
class LpGraph:
    """One instance's slack-augmented system, ready for the model.

    Node indexing is combined: variable j is node j, the slack of clause i
    is node n + i. Edges are directed both ways between each variable node
    and each slack node whose clause contains it, carrying the +-1
    coefficient as a scalar attribute. The full m x (n+m) system matrix
    (including the -I slack block) is kept as a sparse tensor for the
    residual computation, and as raw integer triplets for exact clause
    evaluation.
    """

    n: int
    m: int
    label: int  # 1 = SAT, 0 = UNSAT
    rows: np.ndarray  # nnz int64, clause index per triplet
    cols: np.ndarray  # nnz int64, column (variables then slacks)
    vals: np.ndarray  # nnz int64, +-1
    b_ints: np.ndarray  # (m,) int64
    widths: np.ndarray  # (m,) int64
    witness: np.ndarray | None  # (n,) uint8, when known
    var_features: torch.Tensor = field(repr=False)  # (n, 3)
    slack_features: torch.Tensor = field(repr=False)  # (m, 4)
    b: torch.Tensor = field(repr=False)  # (m,)
    a_hat: torch.Tensor = field(repr=False)  # sparse (m, n+m)
    a_hat_t: torch.Tensor = field(repr=False)  # sparse (n+m, m)
    node_type: torch.Tensor = field(repr=False)  # (n+m,) long, 0 var / 1 slack
    edge_src: torch.Tensor = field(repr=False)  # (2E,) long
    edge_dst: torch.Tensor = field(repr=False)  # (2E,) long
    edge_attr: torch.Tensor = field(repr=False)  # (2E, 1)

    @property
    def num_nodes(self) -> int:
        return self.n + self.m

    @property
    def num_edges(self) -> int:
        """Undirected variable-slack edge count (= total literal count)."""
        return int(self.edge_src.shape[0]) // 2


def _parse_witness(text: str, n: int) -> np.ndarray:
    bits = np.array([int(ch) for ch in text], dtype=np.uint8)
    if bits.size != n or not np.isin(bits, (0, 1)).all():
        raise ValueError(f"witness {text!r} is not {n} bits")
    return bits


def graph_from_record(
    record: dict,
    witness: np.ndarray | str | None = None,
    dtype: torch.dtype = torch.float32,
) -> LpGraph:
    """Build an LpGraph from a record dict.

    `witness` supplements records that carry none (UNSAT records): the
    dataset manifest stores the planted assignment for both labels. When
    both the record and the argument provide one, they must agree.
    """
    n = int(record["n"])
    m = int(record["m"])
    label = 1 if record["label"] == SAT else 0
    rows = np.asarray(record["a_hat"]["rows"], dtype=np.int64)
    cols = np.asarray(record["a_hat"]["cols"], dtype=np.int64)
    vals = np.asarray(record["a_hat"]["vals"], dtype=np.int64)
    if not (rows.shape == cols.shape == vals.shape):
        raise ValueError("triplet arrays differ in length")
    b_ints = np.asarray(record["b"], dtype=np.int64)
    widths = np.asarray(record["widths"], dtype=np.int64)
    if b_ints.shape != (m,) or widths.shape != (m,):
        raise ValueError("b/widths length != m")

    if isinstance(witness, str):
        witness = _parse_witness(witness, n)
    recorded = record.get("witness")
    if recorded is not None:
        recorded = _parse_witness(recorded, n)
        if witness is None:
            witness = recorded
        elif not np.array_equal(witness, recorded):
            raise ValueError("witness argument disagrees with record witness")
    if witness is not None and witness.shape != (n,):
        raise ValueError("witness length != n")

    var_features = torch.tensor(record["var_features"], dtype=dtype).reshape(n, 3)
    slack_features = torch.tensor(record["slack_features"], dtype=dtype).reshape(m, 4)
    b = torch.tensor(b_ints, dtype=dtype)
    indices = torch.tensor(np.stack([rows, cols]), dtype=torch.long)
    values = torch.tensor(vals, dtype=dtype)
    a_hat = torch.sparse_coo_tensor(
        indices, values, (m, n + m), check_invariants=True
    ).coalesce()
    a_hat_t = a_hat.t().coalesce()
    node_type = torch.cat(
        [torch.zeros(n, dtype=torch.long), torch.ones(m, dtype=torch.long)]
    )

    var_mask = cols < n
    if int(var_mask.sum()) != int(widths.sum()):
        raise ValueError("variable-column triplet count != total literal count")
    var_nodes = torch.tensor(cols[var_mask], dtype=torch.long)
    slack_nodes = torch.tensor(rows[var_mask] + n, dtype=torch.long)
    attr = torch.tensor(vals[var_mask], dtype=dtype).unsqueeze(1)
    edge_src = torch.cat([var_nodes, slack_nodes])
    edge_dst = torch.cat([slack_nodes, var_nodes])
    edge_attr = torch.cat([attr, attr])

    return LpGraph(
        n=n,
        m=m,
        label=label,
        rows=rows,
        cols=cols,
        vals=vals,
        b_ints=b_ints,
        widths=widths,
        witness=witness,
        var_features=var_features,
        slack_features=slack_features,
        b=b,
        a_hat=a_hat,
        a_hat_t=a_hat_t,
        node_type=node_type,
        edge_src=edge_src,
        edge_dst=edge_dst,
        edge_attr=edge_attr,
    )


def load_manifest(path: str | Path) -> list[dict]:
    rows = []
    with open(path) as handle:
        for line in handle:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows


def find_graph_file(graph_dir: Path, cnf_name: str) -> Path:
    """Locate the exported graph record for a manifest row's .cnf filename."""
    stem = Path(cnf_name).stem
    for suffix in (".graph.json", ".graph.bin"):
        candidate = graph_dir / (stem + suffix)
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"no graph record for {cnf_name} under {graph_dir}")


def load_dataset(
    manifest_path: str | Path,
    graph_dir: str | Path | None = None,
    dtype: torch.dtype = torch.float32,
) -> list[LpGraph]:
    """Load every instance of a dataset: manifest rows paired with graph files.

    The manifest supplies each instance's planted assignment, which is the
    assignment-supervision target for both labels (the exported record only
    embeds it for SAT instances).
    """
    manifest_path = Path(manifest_path)
    if manifest_path.is_dir():
        manifest_path = manifest_path / MANIFEST_NAME
    graph_dir = Path(graph_dir) if graph_dir is not None else manifest_path.parent
    graphs = []
    for row in load_manifest(manifest_path):
        record = read_graph_file(find_graph_file(graph_dir, row["file"]))
        if record["label"] != row["label"]:
            raise ValueError(f"{row['file']}: record label != manifest label")
        graphs.append(graph_from_record(record, witness=row["witness"], dtype=dtype))
    if not graphs:
        raise ValueError(f"{manifest_path}: empty manifest")
    return graphs
