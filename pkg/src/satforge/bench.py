"""Timing harness: planted generation vs exhaustive labeling vs a solver loop.

All three methods are timed on the same task, producing one correctly labeled
SAT/UNSAT pair at a given size. The baselines keep sampling uniform random
phase-transition formulas and labeling them (by exhaustive enumeration, or by
an external solver subprocess) until both labels have been seen; the planted
generator simply emits one instance of each. Solver timings cover the raw
decision call only, with no proof or certificate extraction, so any reported
speedup over it is conservative.
"""
from __future__ import annotations

import math
import shlex
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from statistics import median
from typing import Sequence

import numpy as np

from .cnf import SAT, UNSAT, Clause, CnfFormula, write_dimacs
from .generate import generate_sat, generate_unsat
from .profiles import BenchmarkProfile
from .verify import BRUTE_FORCE_CAP, brute_force_label

METHOD_NAIVE = "naive"
METHOD_SOLVER = "solver_loop"
METHOD_OURS = "ours"


@dataclass(frozen=True)
class TimingRecord:
    """Median wall-clock cost of one labeled SAT/UNSAT pair for one method."""

    n: int
    m: int
    method: str
    median_ms: float
    repetitions: int
    censored: bool = False
    available: bool = True
    errors: int = 0

    @property
    def usable(self) -> bool:
        return self.available and not self.censored and self.repetitions >= 1


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    r_squared: float


def _rep_seed(base_seed: int, rep: int, lane: int) -> int:
    ss = np.random.SeedSequence([int(base_seed), int(rep), int(lane)])
    return int(ss.generate_state(1, np.uint64)[0])


def random_ksat(n: int, m: int, k: int, rng: np.random.Generator) -> CnfFormula:
    """Uniform random k-SAT: k distinct variables and independent polarities per clause."""
    if k > n:
        raise ValueError(f"clause width {k} exceeds n={n}")
    clauses = []
    for _ in range(m):
        variables = rng.choice(n, size=k, replace=False)
        signs = rng.integers(0, 2, size=k)
        clauses.append(
            Clause(tuple(int(v) + 1 if s else -(int(v) + 1) for v, s in zip(variables, signs)))
        )
    return CnfFormula(n, tuple(clauses))


def time_ours(
    n: int,
    m: int,
    profile: BenchmarkProfile,
    reps: int = 200,
    warmup: int = 10,
    base_seed: int = 0,
) -> TimingRecord:
    """Median time to generate one planted SAT instance plus one planted
    UNSAT instance, in memory, nothing written."""
    times = []
    for rep in range(warmup + reps):
        sat_seed = _rep_seed(base_seed, rep, 0)
        unsat_seed = _rep_seed(base_seed, rep, 1)
        t0 = time.perf_counter()
        generate_sat(n, m, profile, sat_seed)
        generate_unsat(n, m, profile, unsat_seed)
        dt = time.perf_counter() - t0
        if rep >= warmup:
            times.append(dt)
    return TimingRecord(n, m, METHOD_OURS, median(times) * 1000.0, reps)


def time_naive(
    n: int,
    m: int,
    reps: int = 5,
    timeout_s: float = 30.0,
    cap: int = BRUTE_FORCE_CAP,
    base_seed: int = 0,
    k: int = 3,
) -> TimingRecord:
    """Median time for the enumerate-and-reject baseline to see both labels.

    Sizes beyond the enumeration cap are censored without running, mirroring
    how exhaustive labeling stops being a baseline at all.
    """
    if n > cap:
        return TimingRecord(n, m, METHOD_NAIVE, math.nan, 0, censored=True)
    brute_force_label(CnfFormula(1, (Clause((1,)),)), cap)  # shake out JIT cost
    times = []
    censored = False
    for rep in range(reps):
        rng = np.random.default_rng(np.random.SeedSequence([base_seed, rep]))
        seen = set()
        t0 = time.perf_counter()
        while seen != {SAT, UNSAT}:
            label, _ = brute_force_label(random_ksat(n, m, k, rng), cap)
            seen.add(label)
            if time.perf_counter() - t0 > timeout_s:
                censored = True
                break
        if censored:
            break
        times.append(time.perf_counter() - t0)
    if not times:
        return TimingRecord(n, m, METHOD_NAIVE, math.nan, 0, censored=True)
    return TimingRecord(n, m, METHOD_NAIVE, median(times) * 1000.0, len(times), censored=censored)


def _solver_argv(solver: str | Sequence[str]) -> list[str]:
    return shlex.split(solver) if isinstance(solver, str) else list(solver)


def solver_available(solver: str | Sequence[str] | None) -> bool:
    if not solver:
        return False
    argv = _solver_argv(solver)
    if not argv:
        return False
    exe = argv[0]
    return shutil.which(exe) is not None or Path(exe).exists()


def time_solver_loop(
    n: int,
    m: int,
    solver: str | Sequence[str] | None,
    reps: int = 5,
    timeout_s: float = 30.0,
    base_seed: int = 0,
    k: int = 3,
    max_errors: int = 50,
) -> TimingRecord:
    """Median time for the solver-in-the-loop baseline to see both labels.

    Each candidate formula is written to a temp file and handed to the
    solver; exit status 10 means SAT and 20 means UNSAT, anything else
    counts as an error. The timed span covers formula sampling, file writes,
    and the decision calls, but no proof generation. A missing solver yields
    an unavailable record instead of an error.
    """
    if not solver_available(solver):
        return TimingRecord(n, m, METHOD_SOLVER, math.nan, 0, available=False)
    argv = _solver_argv(solver)
    times = []
    censored = False
    errors = 0
    with tempfile.TemporaryDirectory(prefix="satforge-bench-") as tmp:
        path = Path(tmp) / "candidate.cnf"
        for rep in range(reps):
            rng = np.random.default_rng(np.random.SeedSequence([base_seed, rep]))
            seen = set()
            t0 = time.perf_counter()
            while seen != {SAT, UNSAT}:
                path.write_text(write_dimacs(random_ksat(n, m, k, rng)))
                remaining = timeout_s - (time.perf_counter() - t0)
                if remaining <= 0:
                    censored = True
                    break
                try:
                    proc = subprocess.run(
                        argv + [str(path)], capture_output=True, timeout=remaining
                    )
                except subprocess.TimeoutExpired:
                    censored = True
                    break
                if proc.returncode == 10:
                    seen.add(SAT)
                elif proc.returncode == 20:
                    seen.add(UNSAT)
                else:
                    errors += 1
                    if errors >= max_errors:
                        censored = True
                        break
            if censored:
                break
            times.append(time.perf_counter() - t0)
    if not times:
        return TimingRecord(n, m, METHOD_SOLVER, math.nan, 0, censored=True, errors=errors)
    return TimingRecord(
        n, m, METHOD_SOLVER, median(times) * 1000.0, len(times),
        censored=censored, errors=errors,
    )


def fit_scaling(records: Sequence[TimingRecord]) -> ScalingFit:
    """Least-squares slope of log(median_ms) against log(m) over usable records."""
    pts = sorted(
        {(r.m, r.median_ms) for r in records if r.usable and r.median_ms > 0}
    )
    if len(pts) < 3:
        raise ValueError(f"need at least 3 usable records, got {len(pts)}")
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    if np.unique(x).size < 2:
        raise ValueError("need at least 2 distinct sizes to fit a slope")
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(float(slope), float(intercept), r2)


def _cell(record: TimingRecord | None) -> str:
    if record is None or not record.usable:
        return "N/A"
    return f"{record.median_ms:.3f}"


def emit_table(records: Sequence[TimingRecord]) -> str:
    """Render records as an aligned text table, one row per (n, m).

    Censored or unavailable measurements render as N/A; a speedup column
    compares the solver loop against planted generation where both exist.
    """
    by_size: dict[tuple[int, int], dict[str, TimingRecord]] = {}
    for r in records:
        by_size.setdefault((r.n, r.m), {})[r.method] = r
    header = ["n", "m", "naive_ms", "solver_loop_ms", "ours_ms", "speedup_vs_solver"]
    table = [header]
    for (n, m), methods in sorted(by_size.items()):
        solver = methods.get(METHOD_SOLVER)
        ours = methods.get(METHOD_OURS)
        if solver and ours and solver.usable and ours.usable and ours.median_ms > 0:
            speedup = f"{solver.median_ms / ours.median_ms:.1f}x"
        else:
            speedup = "N/A"
        table.append(
            [str(n), str(m), _cell(methods.get(METHOD_NAIVE)), _cell(solver),
             _cell(ours), speedup]
        )
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = [
        "  ".join(cell.rjust(widths[i]) for i, cell in enumerate(row)) for row in table
    ]
    lines.append("")
    lines.append(
        "N/A marks censored (timeout or enumeration cap) or unavailable methods."
    )
    lines.append(
        "Solver-loop timings cover decision calls only, with no proof generation,"
    )
    lines.append("so speedups over the solver loop are conservative.")
    return "\n".join(lines) + "\n"


def records_to_csv(records: Sequence[TimingRecord]) -> str:
    """Delimited form: n,m,method,median_ms,reps,censored."""
    lines = ["n,m,method,median_ms,reps,censored"]
    order = {METHOD_NAIVE: 0, METHOD_SOLVER: 1, METHOD_OURS: 2}
    for r in sorted(records, key=lambda r: (r.n, r.m, order.get(r.method, 9))):
        ms = "nan" if math.isnan(r.median_ms) else f"{r.median_ms:.6f}"
        flag = "true" if (r.censored or not r.available) else "false"
        lines.append(f"{r.n},{r.m},{r.method},{ms},{r.repetitions},{flag}")
    return "\n".join(lines) + "\n"
