"""Target-aware generation of certified SAT and UNSAT instances.

SAT instances are built backward from a planted witness x*: each clause draws
a width, a variable set, and a slack s* from the profile, then receives
s* + 1 satisfying and k - s* - 1 falsifying polarities, so x* satisfies the
formula by construction in O(m k) work with no solver involved. UNSAT
instances embed a core enumerating all 2^w polarity patterns over one
w-variable set, which every assignment violates exactly once, padded with
satisfied filler clauses and shuffled.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import profiles
from .cnf import SAT, UNSAT, Assignment, Clause, CnfFormula, read_dimacs, write_dimacs
from .profiles import BenchmarkProfile, ProfileSampler

W_MAX = 12

MANIFEST_NAME = "manifest.jsonl"


@dataclass(frozen=True)
class GeneratedInstance:
    """A formula with its certificate: label, witness, planted structure, seed."""

    formula: CnfFormula
    label: str
    witness: Assignment
    planted_slacks: tuple[int, ...]
    core_indices: tuple[int, ...]
    seed: int
    profile_id: str = ""

    @property
    def n(self) -> int:
        return self.formula.num_vars

    @property
    def m(self) -> int:
        return self.formula.num_clauses


def plant_clause(
    variables: Sequence[int], target_slack: int, witness: Assignment | Sequence[int]
) -> Clause:
    """Build a clause over `variables` with exactly target_slack + 1 literals
    satisfied by the witness: the first target_slack + 1 variables (in the
    given, already shuffled order) get the satisfying polarity, the rest the
    falsifying one."""
    k = len(variables)
    if not 0 <= target_slack <= k - 1:
        raise ValueError(f"target slack {target_slack} outside 0..{k - 1}")
    values = witness.values if isinstance(witness, Assignment) else witness
    lits = []
    for j, v in enumerate(variables):
        want_true = j <= target_slack
        is_one = values[v - 1] == 1
        lits.append(v if want_true == is_one else -v)
    return Clause(tuple(lits))


def build_core(variables: Sequence[int], w_max: int = W_MAX) -> tuple[Clause, ...]:
    """All 2^w polarity combinations over one variable set, in binary-counter
    order (pattern bit 0 means positive; leftmost variable is the most
    significant bit). Any assignment falsifies exactly one of these clauses."""
    variables = [int(v) for v in variables]
    w = len(variables)
    if not 1 <= w <= w_max:
        raise ValueError(f"core width {w} outside 1..{w_max}")
    if len(set(variables)) != w:
        raise ValueError("core variables must be distinct")
    clauses = []
    for pattern in range(1 << w):
        lits = tuple(
            -v if (pattern >> (w - 1 - j)) & 1 else v
            for j, v in enumerate(variables)
        )
        clauses.append(Clause(lits))
    return tuple(clauses)


def _planted_clauses(
    sampler: ProfileSampler,
    witness_values: Sequence[int],
    count: int,
    label: str,
    seen: set[tuple[int, ...]] | None,
) -> tuple[list[Clause], list[int]]:
    """Draw `count` planted clauses; when `seen` is given, retry duplicates a
    bounded number of times (the last attempt is kept either way)."""
    clauses: list[Clause] = []
    slacks: list[int] = []
    for _ in range(count):
        for _attempt in range(32):
            k = sampler.sample_width()
            variables = sampler.sample_variables(k)
            s = sampler.sample_slack(k, label)
            clause = plant_clause(variables, s, witness_values)
            if seen is None or clause.lits not in seen:
                break
        if seen is not None:
            seen.add(clause.lits)
        clauses.append(clause)
        slacks.append(s)
    return clauses, slacks


def generate_sat(
    n: int,
    m: int,
    profile: BenchmarkProfile,
    seed: int,
    *,
    dedupe: bool = False,
    profile_tag: str = "",
) -> GeneratedInstance:
    """Generate a SAT instance with a planted witness and per-clause slacks.

    The PCG64 stream seeded by `seed` is consumed in a fixed order (witness
    bits, then sampler state, then per-clause draws), so equal seeds yield
    bit-identical instances.
    """
    if n < 1:
        raise ValueError(f"need at least one variable, got n={n}")
    if m < 0:
        raise ValueError(f"clause count must be nonnegative, got m={m}")
    rng = np.random.default_rng(seed)
    witness = rng.integers(0, 2, size=n, dtype=np.uint8).tolist()
    if m == 0:
        return GeneratedInstance(
            CnfFormula(n, ()), SAT, Assignment(tuple(witness)), (), (), seed, profile_tag
        )
    sampler = ProfileSampler(profile, n, rng)
    seen: set[tuple[int, ...]] | None = set() if dedupe else None
    clauses, slacks = _planted_clauses(sampler, witness, m, SAT, seen)
    return GeneratedInstance(
        formula=CnfFormula(n, tuple(clauses)),
        label=SAT,
        witness=Assignment(tuple(witness)),
        planted_slacks=tuple(slacks),
        core_indices=(),
        seed=seed,
        profile_id=profile_tag,
    )


def generate_unsat(
    n: int,
    m: int,
    profile: BenchmarkProfile,
    seed: int,
    *,
    dedupe: bool = False,
    exclude_core_vars: bool = False,
    profile_tag: str = "",
) -> GeneratedInstance:
    """Generate an UNSAT instance: a full 2^w core over the profile's dominant
    width plus satisfied filler clauses, in a uniformly shuffled order.

    The recorded witness violates exactly the one core clause matching its
    restriction to the core variables and satisfies everything else.
    """
    if n < 1:
        raise ValueError(f"need at least one variable, got n={n}")
    w = profile.dominant_width
    if w > n:
        raise ValueError(f"core width {w} exceeds n={n}")
    if w > W_MAX:
        raise ValueError(f"core width {w} exceeds the 2^w construction bound {W_MAX}")
    core_size = 1 << w
    if m < core_size:
        raise ValueError(f"m={m} cannot hold a 2^{w} = {core_size} clause core")
    rng = np.random.default_rng(seed)
    witness = rng.integers(0, 2, size=n, dtype=np.uint8).tolist()
    core_vars = [int(v) + 1 for v in rng.choice(n, size=w, replace=False)]
    core = build_core(core_vars)
    exclude = core_vars if exclude_core_vars else ()
    filler_count = m - core_size
    filler: list[Clause] = []
    slacks: list[int] = []
    if filler_count:
        sampler = ProfileSampler(profile, n, rng, exclude=exclude)
        seen: set[tuple[int, ...]] | None = None
        if dedupe:
            seen = {c.lits for c in core}
        filler, slacks = _planted_clauses(sampler, witness, filler_count, UNSAT, seen)
    ordered: list[Clause | None] = [None] * m
    slack_at: dict[int, int] = {}
    positions = rng.permutation(m)
    for j, clause in enumerate(core):
        ordered[positions[j]] = clause
    for j, clause in enumerate(filler):
        p = int(positions[core_size + j])
        ordered[p] = clause
        slack_at[p] = slacks[j]
    core_indices = tuple(sorted(int(p) for p in positions[:core_size]))
    planted = tuple(slack_at[p] for p in sorted(slack_at))
    return GeneratedInstance(
        formula=CnfFormula(n, tuple(ordered)),
        label=UNSAT,
        witness=Assignment(tuple(witness)),
        planted_slacks=planted,
        core_indices=core_indices,
        seed=seed,
        profile_id=profile_tag,
    )


def derive_instance_seed(base_seed: int, index: int) -> int:
    """Published stream-splitting rule: one 64-bit word from
    SeedSequence([base_seed, index]). Regenerating an instance needs only
    this value."""
    ss = np.random.SeedSequence([int(base_seed), int(index)])
    return int(ss.generate_state(1, np.uint64)[0])


def _build_row(
    index: int,
    base_seed: int,
    profile: BenchmarkProfile,
    tag: str,
    n_sat: int,
    n_range: tuple[int, int],
    m_override: int | None,
    dedupe: bool,
    exclude_core_vars: bool,
) -> tuple[str, str, dict]:
    size_rng = np.random.default_rng(np.random.SeedSequence([base_seed, index, 1]))
    n = int(size_rng.integers(n_range[0], n_range[1] + 1))
    m = m_override if m_override is not None else int(round(profile.alpha * n))
    seed = derive_instance_seed(base_seed, index)
    label = SAT if index < n_sat else UNSAT
    if label == SAT:
        inst = generate_sat(n, m, profile, seed, dedupe=dedupe, profile_tag=tag)
    else:
        inst = generate_unsat(
            n, m, profile, seed, dedupe=dedupe,
            exclude_core_vars=exclude_core_vars, profile_tag=tag,
        )
    filename = f"{label.lower()}_{index:05d}.cnf"
    row = {
        "file": filename,
        "label": inst.label,
        "n": inst.n,
        "m": inst.m,
        "seed": inst.seed,
        "witness": inst.witness.to_bits(),
        "planted_slacks": list(inst.planted_slacks),
        "core_indices": list(inst.core_indices),
        "profile_id": inst.profile_id,
    }
    return filename, write_dimacs(inst.formula), row


def generate_dataset(
    out_dir: str | Path,
    profile: BenchmarkProfile,
    count: int,
    sat_fraction: float,
    n_range: tuple[int, int],
    base_seed: int,
    *,
    jobs: int = 1,
    dedupe: bool = False,
    exclude_core_vars: bool = False,
    m_override: int | None = None,
    profile_tag: str | None = None,
) -> list[dict]:
    """Write a labeled dataset and its manifest; returns the manifest rows.

    Exactly round(count * sat_fraction) instances are SAT (the leading
    indices). Every instance derives its own seed from (base_seed, index), so
    output bytes do not depend on `jobs`; rows and files are written in index
    order after all instances exist, and any infeasible instance aborts the
    batch before anything is written.
    """
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    if not 0.0 <= sat_fraction <= 1.0:
        raise ValueError(f"sat_fraction must lie in [0, 1], got {sat_fraction}")
    lo, hi = int(n_range[0]), int(n_range[1])
    if lo < 1 or lo > hi:
        raise ValueError(f"malformed n_range {n_range}")
    tag = profiles.profile_id(profile) if profile_tag is None else profile_tag
    n_sat = int(round(count * sat_fraction))
    args = [
        (i, base_seed, profile, tag, n_sat, (lo, hi), m_override, dedupe, exclude_core_vars)
        for i in range(count)
    ]
    if jobs > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunk = max(1, count // (jobs * 4))
            results = list(pool.map(_build_row_star, args, chunksize=chunk))
    else:
        results = [_build_row_star(a) for a in args]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for filename, text, row in results:
        (out / filename).write_text(text)
        rows.append(row)
    manifest = out / MANIFEST_NAME
    manifest.write_text("".join(json.dumps(row) + "\n" for row in rows))
    return rows


def _build_row_star(args: tuple) -> tuple[str, str, dict]:
    return _build_row(*args)


def load_manifest(path: str | Path) -> list[dict]:
    """Read manifest.jsonl rows."""
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            rows.append(json.loads(line))
    return rows


def instance_from_row(row: dict, root: str | Path) -> GeneratedInstance:
    """Rebuild a GeneratedInstance from a manifest row and its DIMACS file."""
    formula = read_dimacs(Path(root) / row["file"])
    return GeneratedInstance(
        formula=formula,
        label=row["label"],
        witness=Assignment.from_bits(row["witness"]),
        planted_slacks=tuple(int(s) for s in row["planted_slacks"]),
        core_indices=tuple(int(i) for i in row["core_indices"]),
        seed=int(row["seed"]),
        profile_id=row.get("profile_id", ""),
    )
