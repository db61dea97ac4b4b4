"""Command line front end: profile, generate, verify, export, slackdist, bench.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .cnf import SAT, UNSAT, Assignment, DimacsError, evaluate_formula, read_dimacs
from .encode import induced_slack
from .export import record_from_instance, write_graph_binary, write_graph_json
from .generate import MANIFEST_NAME, generate_dataset, instance_from_row, load_manifest
from .plots import bench_scaling_figure, slack_histogram_figure
from .profiles import (
    LabeledCorpusEntry,
    default_3sat_profile,
    find_assignment,
    load_profile,
    profile_corpus,
    profile_id,
    save_profile,
    slack_distribution,
)
from .verify import BRUTE_FORCE_CAP, brute_force_label, verify_witness

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_IO = 3

SOLVER_ENV = "SATFORGE_SOLVER"


class _ArgumentParser(argparse.ArgumentParser):
    """argparse maps usage errors to exit code 2; this CLI reserves 2 for
    verification failures, so usage errors exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def _load_profile_arg(spec: str):
    if spec == "3sat":
        return default_3sat_profile()
    return load_profile(spec)


def _parse_n_range(spec: str) -> tuple[int, int]:
    parts = spec.split(":")
    if len(parts) == 1:
        lo = hi = int(parts[0])
    elif len(parts) == 2:
        lo, hi = int(parts[0]), int(parts[1])
    else:
        raise ValueError(f"malformed n range {spec!r}, expected LO:HI")
    return lo, hi


def cmd_profile(args) -> int:
    corpus = Path(args.corpus)
    files = sorted(corpus.glob("*.cnf"))
    if not files:
        raise ValueError(f"no .cnf files found under {corpus}")
    manifest_path = Path(args.manifest) if args.manifest else corpus / MANIFEST_NAME
    rows_by_file: dict[str, dict] = {}
    if manifest_path.exists():
        rows_by_file = {row["file"]: row for row in load_manifest(manifest_path)}
    else:
        print(
            "note: no witness manifest found; labels and reference assignments "
            "come from local search",
            file=sys.stderr,
        )
    entries = []
    for idx, path in enumerate(files):
        formula = read_dimacs(path, strict=not args.lenient)
        row = rows_by_file.get(path.name)
        if row is not None:
            entries.append(
                LabeledCorpusEntry(
                    formula, row["label"], Assignment.from_bits(row["witness"])
                )
            )
            continue
        guess = find_assignment(
            formula,
            args.max_flips,
            rng=np.random.default_rng(np.random.SeedSequence([args.seed, idx])),
        )
        satisfied, _ = evaluate_formula(formula, guess)
        entries.append(
            LabeledCorpusEntry(formula, SAT if satisfied else UNSAT, guess)
        )
    profile = profile_corpus(entries, seed=args.seed, max_flips=args.max_flips)
    save_profile(profile, args.output)
    print(
        f"profiled {len(entries)} formulas -> {args.output} "
        f"(id {profile_id(profile)}, widths {sorted(profile.width_dist)}, "
        f"alpha {profile.alpha:.3f})"
    )
    return EXIT_OK


def cmd_generate(args) -> int:
    profile = _load_profile_arg(args.profile)
    n_range = _parse_n_range(args.n_range)
    rows = generate_dataset(
        args.output,
        profile,
        args.count,
        args.sat_fraction,
        n_range,
        args.seed,
        jobs=args.jobs,
        dedupe=args.dedupe,
        exclude_core_vars=args.exclude_core_vars,
        m_override=args.m_override,
    )
    sat_count = sum(1 for r in rows if r["label"] == SAT)
    print(
        f"wrote {len(rows)} instances ({sat_count} SAT, {len(rows) - sat_count} UNSAT) "
        f"and {MANIFEST_NAME} to {args.output}"
    )
    return EXIT_OK


def _verify_row(row: dict, root: str, cap: int) -> dict:
    try:
        inst = instance_from_row(row, root)
    except (DimacsError, ValueError, OSError) as exc:
        return {"file": row.get("file", "?"), "ok": False, "failures": [str(exc)]}
    report = verify_witness(inst)
    failures = list(report.failures)
    brute = None
    if cap > 0 and inst.n <= cap:
        brute, _ = brute_force_label(inst.formula, cap)
        if brute != inst.label:
            failures.append(f"exhaustive label {brute} != recorded {inst.label}")
    result = {"file": row["file"], "ok": not failures, "failures": failures}
    if brute is not None:
        result["brute_force"] = brute
    return result


def _verify_row_star(args: tuple) -> dict:
    return _verify_row(*args)


def cmd_verify(args) -> int:
    manifest = Path(args.manifest)
    rows = load_manifest(manifest)
    root = str(manifest.parent)
    work = [(row, root, args.cap) for row in rows]
    if args.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            chunk = max(1, len(work) // (args.jobs * 4))
            results = list(pool.map(_verify_row_star, work, chunksize=chunk))
    else:
        results = [_verify_row_star(w) for w in work]
    failed = [r for r in results if not r["ok"]]
    if args.output:
        Path(args.output).write_text(
            "".join(json.dumps(r) + "\n" for r in results)
        )
    for r in results:
        if r["ok"]:
            print(f"{r['file']}: ok")
        else:
            print(f"{r['file']}: FAIL ({'; '.join(r['failures'])})")
    print(f"verified {len(results)} instances, {len(failed)} failures")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_export(args) -> int:
    manifest = Path(args.manifest)
    rows = load_manifest(manifest)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    suffix = ".graph.json" if args.format == "json" else ".graph.bin"
    for row in rows:
        inst = instance_from_row(row, manifest.parent)
        record = record_from_instance(inst)
        target = out / (Path(row["file"]).stem + suffix)
        if args.format == "json":
            write_graph_json(record, target)
        else:
            write_graph_binary(record, target)
    print(f"exported {len(rows)} graph files to {out}")
    return EXIT_OK


def _slack_histograms(args) -> dict[tuple[str, int], Counter]:
    source = Path(args.input)
    counts: dict[tuple[str, int], Counter] = defaultdict(Counter)
    manifest = source if source.is_file() else source / MANIFEST_NAME
    if manifest.exists():
        for row in load_manifest(manifest):
            inst = instance_from_row(row, manifest.parent)
            skip = set(inst.core_indices)
            slacks = induced_slack(inst.formula, inst.witness).values
            for i, clause in enumerate(inst.formula.clauses):
                if i in skip or slacks[i] < 0:
                    continue
                counts[(inst.label, clause.width)][int(slacks[i])] += 1
        return counts
    if not source.is_dir():
        raise ValueError(f"{source} is neither a manifest file nor a corpus directory")
    files = sorted(source.glob("*.cnf"))
    if not files:
        raise ValueError(f"no .cnf files found under {source}")
    print(
        "note: no manifest found; labels and assignments come from local search",
        file=sys.stderr,
    )
    for idx, path in enumerate(files):
        formula = read_dimacs(path, strict=not args.lenient)
        guess = find_assignment(
            formula,
            args.max_flips,
            rng=np.random.default_rng(np.random.SeedSequence([args.seed, idx])),
        )
        satisfied, _ = evaluate_formula(formula, guess)
        label = SAT if satisfied else UNSAT
        slacks = induced_slack(formula, guess).values
        for clause, s in zip(formula.clauses, slacks):
            if s >= 0:
                counts[(label, clause.width)][int(s)] += 1
    return counts


def cmd_slackdist(args) -> int:
    counts = _slack_histograms(args)
    if not counts:
        raise ValueError("no satisfied clauses to histogram")
    profile = _load_profile_arg(args.profile) if args.profile else None
    fractions: dict[tuple[str, int], dict[int, float]] = {}
    references: dict[tuple[str, int], dict[int, float]] = {}
    lines = ["label,width,slack,count,fraction" + (",profile_fraction" if profile else "")]
    for (label, width), counter in sorted(counts.items()):
        total = sum(counter.values())
        fractions[(label, width)] = {s: c / total for s, c in counter.items()}
        ref = slack_distribution(profile, width, label) if profile else {}
        if profile:
            references[(label, width)] = ref
        for s in range(width):
            c = counter.get(s, 0)
            row = f"{label},{width},{s},{c},{c / total:.6f}"
            if profile:
                row += f",{ref.get(s, 0.0):.6f}"
            lines.append(row)
    out = Path(args.output)
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out}")
    if profile:
        for key, dist in sorted(fractions.items()):
            ref = references[key]
            support = set(dist) | set(ref)
            tv = 0.5 * sum(abs(dist.get(s, 0.0) - ref.get(s, 0.0)) for s in support)
            print(f"TV({key[0]}, k={key[1]}) = {tv:.4f}")
    if args.plot:
        fig_path = out.with_suffix(".png")
        slack_histogram_figure(fractions, fig_path, references if profile else None)
        print(f"wrote {fig_path}")
    return EXIT_OK


def _parse_sizes(spec: str, alpha: float) -> list[tuple[int, int]]:
    sizes = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        if ":" in token:
            n_str, m_str = token.split(":", 1)
            sizes.append((int(n_str), int(m_str)))
        else:
            n = int(token)
            sizes.append((n, int(round(alpha * n))))
    if not sizes:
        raise ValueError(f"no sizes in {spec!r}")
    return sizes


def cmd_bench(args) -> int:
    profile = _load_profile_arg(args.profile)
    sizes = _parse_sizes(args.sizes, profile.alpha)
    solver = args.solver or os.environ.get(SOLVER_ENV)
    records = []
    for n, m in sizes:
        records.append(
            bench_mod.time_ours(n, m, profile, reps=args.reps, base_seed=args.seed)
        )
        if not args.skip_naive:
            records.append(
                bench_mod.time_naive(
                    n, m, reps=args.baseline_reps, timeout_s=args.timeout,
                    base_seed=args.seed,
                )
            )
        records.append(
            bench_mod.time_solver_loop(
                n, m, solver, reps=args.baseline_reps, timeout_s=args.timeout,
                base_seed=args.seed,
            )
        )
    out = Path(args.output)
    out.write_text(bench_mod.records_to_csv(records))
    print(bench_mod.emit_table(records))
    ours = [r for r in records if r.method == bench_mod.METHOD_OURS]
    usable = [r for r in ours if r.usable]
    if len({r.m for r in usable}) >= 3:
        fit = bench_mod.fit_scaling(ours)
        print(
            f"scaling fit (ours): slope {fit.slope:.3f}, r^2 {fit.r_squared:.4f}"
        )
    print(f"wrote {out}")
    if args.plot:
        fig_path = out.with_suffix(".png")
        bench_scaling_figure(records, fig_path)
        print(f"wrote {fig_path}")
    return EXIT_OK


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="satforge",
        description="Generate, verify, and export certified SAT/UNSAT CNF instances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="extract a benchmark profile from a CNF corpus")
    p.add_argument("corpus", help="directory of .cnf files")
    p.add_argument("-o", "--output", required=True, help="profile JSON to write")
    p.add_argument("--manifest", help="witness manifest (default: <corpus>/manifest.jsonl)")
    p.add_argument("--max-flips", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lenient", action="store_true", help="tolerate malformed DIMACS")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("generate", help="generate a labeled dataset with certificates")
    p.add_argument("--profile", default="3sat", help="profile JSON path or '3sat'")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--sat-fraction", type=float, default=0.5)
    p.add_argument("--n-range", default="10:40", help="variable count range LO:HI")
    p.add_argument("--m-override", type=int, help="fixed clause count instead of alpha * n")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dedupe", action="store_true", help="resample duplicate clauses")
    p.add_argument(
        "--exclude-core-vars", action="store_true",
        help="keep UNSAT filler clauses off the core variables",
    )
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check certificates of a generated dataset")
    p.add_argument("manifest", help="manifest.jsonl of the dataset")
    p.add_argument("-o", "--output", help="JSONL report path")
    p.add_argument(
        "--cap", type=int, default=BRUTE_FORCE_CAP,
        help="exhaustively re-label instances with n <= CAP (0 disables)",
    )
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="export instances as graph files")
    p.add_argument("manifest", help="manifest.jsonl of the dataset")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--format", choices=("json", "binary"), default="json")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser(
        "slackdist", help="per-width slack histograms of a dataset or corpus"
    )
    p.add_argument("input", help="manifest.jsonl, dataset directory, or corpus directory")
    p.add_argument("-o", "--output", required=True, help="CSV path")
    p.add_argument("--profile", help="profile JSON (or '3sat') to compare against")
    p.add_argument("--max-flips", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lenient", action="store_true")
    p.add_argument("--no-plot", dest="plot", action="store_false",
                   help="skip the PNG next to the CSV")
    p.set_defaults(func=cmd_slackdist)

    p = sub.add_parser("bench", help="time planted generation against baselines")
    p.add_argument("-o", "--output", default="bench.csv", help="CSV path")
    p.add_argument("--profile", default="3sat")
    p.add_argument("--sizes", default="15,20,50,75,100,150,200,250",
                   help="comma list of n or n:m entries")
    p.add_argument("--reps", type=int, default=200, help="repetitions for generation timing")
    p.add_argument("--baseline-reps", type=int, default=5,
                   help="repetitions for naive and solver baselines")
    p.add_argument("--timeout", type=float, default=30.0, help="per-rep baseline timeout (s)")
    p.add_argument("--solver", help=f"solver command (default: ${SOLVER_ENV})")
    p.add_argument("--skip-naive", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-plot", dest="plot", action="store_false")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DimacsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
