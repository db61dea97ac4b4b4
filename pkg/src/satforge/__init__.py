"""satforge: solver-free generation of certified SAT/UNSAT CNF instances."""
from .bench import (
    METHOD_NAIVE,
    METHOD_OURS,
    METHOD_SOLVER,
    ScalingFit,
    TimingRecord,
    emit_table,
    fit_scaling,
    random_ksat,
    records_to_csv,
    solver_available,
    time_naive,
    time_ours,
    time_solver_loop,
)
from .cnf import (
    SAT,
    UNSAT,
    Assignment,
    Clause,
    CnfFormula,
    DimacsError,
    evaluate_clause,
    evaluate_formula,
    parse_dimacs,
    read_dimacs,
    write_dimacs,
)
from .encode import (
    AugmentedSystem,
    LinearSystem,
    SlackVector,
    assemble_z,
    augment,
    clause_residual,
    encode_augmented,
    encode_cnf,
    induced_slack,
    node_residual,
)
from .export import (
    GRAPH_FORMAT,
    GRAPH_VERSION,
    graph_record,
    read_graph_binary,
    read_graph_json,
    record_from_instance,
    write_graph_binary,
    write_graph_json,
)
from .generate import (
    MANIFEST_NAME,
    W_MAX,
    GeneratedInstance,
    build_core,
    derive_instance_seed,
    generate_dataset,
    generate_sat,
    generate_unsat,
    instance_from_row,
    load_manifest,
    plant_clause,
)
from .profiles import (
    BenchmarkProfile,
    LabeledCorpusEntry,
    ProfileSampler,
    default_3sat_profile,
    find_assignment,
    load_profile,
    profile_corpus,
    profile_from_dict,
    profile_id,
    profile_to_dict,
    save_profile,
    slack_distribution,
    stretch_skew,
)
from .verify import (
    BRUTE_FORCE_CAP,
    CoreInfo,
    VerifyReport,
    brute_force_label,
    detect_core,
    verify_witness,
)

__version__ = "0.1.0"

__all__ = [
    "BRUTE_FORCE_CAP",
    "GRAPH_FORMAT",
    "GRAPH_VERSION",
    "MANIFEST_NAME",
    "METHOD_NAIVE",
    "METHOD_OURS",
    "METHOD_SOLVER",
    "SAT",
    "UNSAT",
    "W_MAX",
    "Assignment",
    "AugmentedSystem",
    "BenchmarkProfile",
    "Clause",
    "CnfFormula",
    "CoreInfo",
    "DimacsError",
    "GeneratedInstance",
    "LabeledCorpusEntry",
    "LinearSystem",
    "ProfileSampler",
    "ScalingFit",
    "SlackVector",
    "TimingRecord",
    "VerifyReport",
    "assemble_z",
    "augment",
    "brute_force_label",
    "build_core",
    "clause_residual",
    "default_3sat_profile",
    "derive_instance_seed",
    "detect_core",
    "emit_table",
    "encode_augmented",
    "encode_cnf",
    "evaluate_clause",
    "evaluate_formula",
    "find_assignment",
    "fit_scaling",
    "generate_dataset",
    "generate_sat",
    "generate_unsat",
    "graph_record",
    "induced_slack",
    "instance_from_row",
    "load_manifest",
    "load_profile",
    "node_residual",
    "parse_dimacs",
    "plant_clause",
    "profile_corpus",
    "profile_from_dict",
    "profile_id",
    "profile_to_dict",
    "random_ksat",
    "read_dimacs",
    "read_graph_binary",
    "read_graph_json",
    "record_from_instance",
    "records_to_csv",
    "save_profile",
    "slack_distribution",
    "solver_available",
    "stretch_skew",
    "time_naive",
    "time_ours",
    "time_solver_loop",
    "verify_witness",
    "write_dimacs",
    "write_graph_binary",
    "write_graph_json",
]
