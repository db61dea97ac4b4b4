"""Graph network over slack-augmented CNF systems with residual injection.

Consumes the graph records and manifests produced by the `satforge`
command-line tool (formats specified in the generator's docs/FORMATS.md);
does not import the generator.
"""

from .graphs import (
    BINARY_MAGIC,
    GRAPH_FORMAT,
    GRAPH_VERSION,
    MANIFEST_NAME,
    SAT,
    UNSAT,
    LpGraph,
    find_graph_file,
    graph_from_record,
    load_dataset,
    load_manifest,
    read_graph_binary,
    read_graph_file,
    read_graph_json,
)
from .metrics import EvalMetrics, evaluate, satisfied_fraction, satisfied_mask
from .model import (
    LpResidualGNN,
    clause_residual,
    default_update,
    residual_gradient,
)
from .plots import RANDOM_ASSIGNMENT_CSR, training_curves
from .train import (
    METRICS_HEADER,
    EpochRow,
    TrainConfig,
    instance_loss,
    load_model,
    read_metrics_csv,
    save_model,
    train,
    write_metrics_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BINARY_MAGIC",
    "GRAPH_FORMAT",
    "GRAPH_VERSION",
    "MANIFEST_NAME",
    "METRICS_HEADER",
    "RANDOM_ASSIGNMENT_CSR",
    "SAT",
    "UNSAT",
    "EpochRow",
    "EvalMetrics",
    "LpGraph",
    "LpResidualGNN",
    "TrainConfig",
    "clause_residual",
    "default_update",
    "evaluate",
    "find_graph_file",
    "graph_from_record",
    "instance_loss",
    "load_dataset",
    "load_manifest",
    "load_model",
    "read_graph_binary",
    "read_graph_file",
    "read_graph_json",
    "read_metrics_csv",
    "residual_gradient",
    "satisfied_fraction",
    "satisfied_mask",
    "save_model",
    "train",
    "training_curves",
    "write_metrics_csv",
    "__version__",
]
