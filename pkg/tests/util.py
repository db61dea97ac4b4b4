"""Shared fixtures: known-good worked examples and random-formula helpers."""
from __future__ import annotations

import itertools

import numpy as np

from satforge import Assignment, BenchmarkProfile, Clause, CnfFormula

# Worked SAT example: witness (1, 0, 1) with planted slacks (1, 0).
SAT_FORMULA = CnfFormula(3, (Clause((1, -2, -3)), Clause((3, 2))))
SAT_WITNESS = Assignment((1, 0, 1))
SAT_SLACKS = (1, 0)

# Worked UNSAT example: full width-2 core over (x1, x2) in binary-counter
# order plus one satisfied filler clause under witness (0, 1, 1, 0).
CORE_W2 = (Clause((1, 2)), Clause((1, -2)), Clause((-1, 2)), Clause((-1, -2)))
UNSAT_FORMULA = CnfFormula(4, CORE_W2 + (Clause((3, 4)),))
UNSAT_WITNESS = Assignment((0, 1, 1, 0))


def random_formula(
    rng: np.random.Generator, max_n: int = 20, max_m: int = 12, max_k: int = 6
) -> CnfFormula:
    """Arbitrary small formula; covers unit clauses, full-width clauses, m=0."""
    n = int(rng.integers(1, max_n + 1))
    m = int(rng.integers(0, max_m + 1))
    clauses = []
    for _ in range(m):
        k = int(rng.integers(1, min(n, max_k) + 1))
        variables = rng.choice(n, size=k, replace=False) + 1
        signs = rng.integers(0, 2, size=k)
        clauses.append(
            Clause(tuple(int(v) if s else -int(v) for v, s in zip(variables, signs)))
        )
    return CnfFormula(n, tuple(clauses))


def all_assignments(n: int):
    """Every assignment over n variables."""
    return (Assignment(bits) for bits in itertools.product((0, 1), repeat=n))


def enumerate_label(formula: CnfFormula) -> tuple[str, Assignment | None]:
    """Independent exhaustive oracle built on nothing but literal semantics."""
    for bits in itertools.product((0, 1), repeat=formula.num_vars):
        ok = True
        for clause in formula.clauses:
            if not any(
                (bits[abs(l) - 1] == 1) == (l > 0) for l in clause.lits
            ):
                ok = False
                break
        if ok:
            return "SAT", Assignment(bits)
    return "UNSAT", None


def make_profile(
    width_dist: dict[int, float],
    sat_slack: dict[int, dict[int, float]],
    unsat_slack: dict[int, dict[int, float]] | None = None,
    skew: tuple[float, ...] | None = None,
    dominant: int | None = None,
    alpha: float = 4.27,
) -> BenchmarkProfile:
    widths = sorted(width_dist)
    return BenchmarkProfile(
        width_dist=width_dist,
        occurrence_skew=skew if skew is not None else (1.0,) * 16,
        sat_slack=sat_slack,
        unsat_slack=unsat_slack if unsat_slack is not None else sat_slack,
        dominant_width=dominant if dominant is not None else widths[-1],
        alpha=alpha,
        size_range=(1, 100, 1, 500),
    )
