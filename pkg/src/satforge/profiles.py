"""Benchmark profiles: corpus statistics and the samplers that reproduce them.

A profile captures what makes a benchmark family look the way it does: the
clause width distribution, a rank-frequency profile of variable occurrence
skew, per-width planted-slack distributions for SAT and UNSAT instances, the
dominant width, and the clause/variable ratio. Profiles serialize to JSON and
drive the generators.
"""
from __future__ import annotations

import hashlib
import json
from bisect import bisect_left
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .cnf import SAT, UNSAT, Assignment, CnfFormula, evaluate_formula
from .encode import induced_slack

PROFILE_VERSION = 1
SKEW_RESOLUTION = 128

_DIST_TOL = 1e-9


def _check_dist(dist: dict[int, float], what: str) -> None:
    if not dist:
        return
    total = sum(dist.values())
    if abs(total - 1.0) > _DIST_TOL:
        raise ValueError(f"{what} sums to {total}, expected 1")
    for key, p in dist.items():
        if p < 0:
            raise ValueError(f"{what} has negative mass at {key}")


@dataclass(frozen=True)
class BenchmarkProfile:
    """Distributional fingerprint of a benchmark family."""

    width_dist: dict[int, float]
    occurrence_skew: tuple[float, ...]
    sat_slack: dict[int, dict[int, float]]
    unsat_slack: dict[int, dict[int, float]]
    dominant_width: int
    alpha: float
    size_range: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "width_dist", dict(self.width_dist))
        object.__setattr__(
            self, "sat_slack", {w: dict(d) for w, d in self.sat_slack.items()}
        )
        object.__setattr__(
            self, "unsat_slack", {w: dict(d) for w, d in self.unsat_slack.items()}
        )
        object.__setattr__(
            self, "occurrence_skew", tuple(float(v) for v in self.occurrence_skew)
        )
        object.__setattr__(self, "size_range", tuple(int(v) for v in self.size_range))
        if not self.width_dist:
            raise ValueError("width_dist must not be empty")
        for w in self.width_dist:
            if w < 1:
                raise ValueError(f"clause width must be >= 1, got {w}")
        _check_dist(self.width_dist, "width_dist")
        for name, table in (("sat_slack", self.sat_slack), ("unsat_slack", self.unsat_slack)):
            for w, dist in table.items():
                _check_dist(dist, f"{name}[{w}]")
                for s in dist:
                    if not 0 <= s <= w - 1:
                        raise ValueError(
                            f"{name}[{w}] has slack {s} outside 0..{w - 1}"
                        )
        if not self.occurrence_skew:
            raise ValueError("occurrence_skew must not be empty")
        if min(self.occurrence_skew) < 0 or sum(self.occurrence_skew) <= 0:
            raise ValueError("occurrence_skew must be nonnegative with positive total")
        if self.dominant_width not in self.width_dist:
            raise ValueError(f"dominant_width {self.dominant_width} not in width_dist")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        n_min, n_max, m_min, m_max = self.size_range
        if n_min > n_max or m_min > m_max:
            raise ValueError(f"malformed size_range {self.size_range}")


@dataclass(frozen=True)
class LabeledCorpusEntry:
    """One corpus formula with its label and, when known, a reference assignment."""

    formula: CnfFormula
    label: str
    witness: Assignment | None = None

    def __post_init__(self) -> None:
        if self.label not in (SAT, UNSAT):
            raise ValueError(f"label must be {SAT} or {UNSAT}, got {self.label!r}")


def find_assignment(
    formula: CnfFormula,
    max_flips: int = 10_000,
    rng: np.random.Generator | int | None = None,
) -> Assignment:
    """Greedy stochastic local search for a low-violation assignment.

    Starts from a uniform random assignment; each step picks a violated clause
    uniformly and flips the variable in it that minimizes the resulting
    violated-clause count, breaking ties uniformly. Returns the best
    assignment seen, which is not guaranteed to be satisfying.
    """
    rng = np.random.default_rng(rng)
    n, m = formula.num_vars, formula.num_clauses
    values = [int(v) for v in rng.integers(0, 2, size=max(n, 1))][:n]
    if n == 0 or m == 0:
        return Assignment(tuple(values))

    occ: list[list[tuple[int, int]]] = [[] for _ in range(n + 1)]
    for ci, clause in enumerate(formula.clauses):
        for lit in clause.lits:
            occ[abs(lit)].append((ci, 1 if lit > 0 else 0))
    counts = [0] * m
    for ci, clause in enumerate(formula.clauses):
        counts[ci] = sum(
            1 for lit in clause.lits if values[abs(lit) - 1] == (1 if lit > 0 else 0)
        )
    violated = [ci for ci in range(m) if counts[ci] == 0]
    vpos = {ci: i for i, ci in enumerate(violated)}

    def drop(ci: int) -> None:
        i = vpos.pop(ci)
        last = violated.pop()
        if last != ci:
            violated[i] = last
            vpos[last] = i

    def add(ci: int) -> None:
        vpos[ci] = len(violated)
        violated.append(ci)

    best_violated = len(violated)
    best_values = list(values)
    for _ in range(max_flips):
        if not violated:
            break
        clause = formula.clauses[violated[int(rng.integers(len(violated)))]]
        best_delta = None
        choices: list[int] = []
        for lit in clause.lits:
            v = abs(lit)
            breaks = 0
            makes = 0
            cur = values[v - 1]
            for ci, sign in occ[v]:
                if cur == sign:
                    if counts[ci] == 1:
                        breaks += 1
                elif counts[ci] == 0:
                    makes += 1
            delta = breaks - makes
            if best_delta is None or delta < best_delta:
                best_delta = delta
                choices = [v]
            elif delta == best_delta:
                choices.append(v)
        v = choices[int(rng.integers(len(choices)))]
        values[v - 1] ^= 1
        new = values[v - 1]
        for ci, sign in occ[v]:
            if new == sign:
                counts[ci] += 1
                if counts[ci] == 1:
                    drop(ci)
            else:
                counts[ci] -= 1
                if counts[ci] == 0:
                    add(ci)
        if len(violated) < best_violated:
            best_violated = len(violated)
            best_values = list(values)
    return Assignment(tuple(best_values))


def _rank_profile(formula: CnfFormula, resolution: int) -> np.ndarray:
    """Sorted normalized occurrence counts resampled onto a fixed rank grid."""
    counts = np.zeros(formula.num_vars, dtype=np.float64)
    for clause in formula.clauses:
        for lit in clause.lits:
            counts[abs(lit) - 1] += 1
    counts[::-1].sort()
    counts /= formula.num_clauses
    if formula.num_vars == 1:
        return np.full(resolution, counts[0])
    xp = np.linspace(0.0, 1.0, formula.num_vars)
    grid = np.linspace(0.0, 1.0, resolution)
    return np.interp(grid, xp, counts)


def profile_corpus(
    entries: Iterable[LabeledCorpusEntry],
    *,
    seed: int = 0,
    max_flips: int = 10_000,
    skew_resolution: int = SKEW_RESOLUTION,
) -> BenchmarkProfile:
    """Extract a BenchmarkProfile from a labeled corpus.

    SAT entries need a satisfying witness, either supplied or found by
    find_assignment. UNSAT slack statistics come from a minimally violating
    assignment (supplied or found), with violated clauses excluded. The
    per-entry work only reads that entry, so results do not depend on entry
    processing order beyond the deterministic per-entry search seed.
    """
    entries = list(entries)
    if not entries:
        raise ValueError("corpus must contain at least one entry")
    width_counts: Counter[int] = Counter()
    sat_slacks: dict[int, Counter[int]] = defaultdict(Counter)
    unsat_slacks: dict[int, Counter[int]] = defaultdict(Counter)
    skew_rows = np.zeros((len(entries), skew_resolution), dtype=np.float64)
    alphas = []
    n_vals = []
    m_vals = []
    for idx, entry in enumerate(entries):
        f = entry.formula
        if f.num_vars == 0 or f.num_clauses == 0:
            raise ValueError(f"entry {idx}: empty formula cannot be profiled")
        width_counts.update(c.width for c in f.clauses)
        alphas.append(f.num_clauses / f.num_vars)
        n_vals.append(f.num_vars)
        m_vals.append(f.num_clauses)
        skew_rows[idx] = _rank_profile(f, skew_resolution)
        witness = entry.witness
        if witness is None:
            witness = find_assignment(
                f, max_flips, rng=np.random.default_rng(np.random.SeedSequence([seed, idx]))
            )
        satisfied, _ = evaluate_formula(f, witness)
        if entry.label == SAT and not satisfied:
            raise ValueError(
                f"entry {idx}: no satisfying assignment available for a SAT entry; "
                "supply a witness or raise max_flips"
            )
        slacks = induced_slack(f, witness)
        table = sat_slacks if entry.label == SAT else unsat_slacks
        for clause, s in zip(f.clauses, slacks.values):
            if s >= 0:
                table[clause.width][int(s)] += 1
    total_clauses = sum(width_counts.values())
    width_dist = {w: c / total_clauses for w, c in sorted(width_counts.items())}
    skew = skew_rows.mean(axis=0)
    skew /= skew.sum()
    dominant = max(width_dist.items(), key=lambda kv: (kv[1], -kv[0]))[0]
    return BenchmarkProfile(
        width_dist=width_dist,
        occurrence_skew=tuple(skew),
        sat_slack={w: _normalize(c) for w, c in sorted(sat_slacks.items())},
        unsat_slack={w: _normalize(c) for w, c in sorted(unsat_slacks.items())},
        dominant_width=dominant,
        alpha=float(np.mean(alphas)),
        size_range=(min(n_vals), max(n_vals), min(m_vals), max(m_vals)),
    )


def _normalize(counter: Counter[int]) -> dict[int, float]:
    total = sum(counter.values())
    return {s: c / total for s, c in sorted(counter.items())}


def slack_distribution(profile: BenchmarkProfile, k: int, label: str) -> dict[int, float]:
    """Planted-slack distribution for width k.

    Falls back, when the profile has no entry for k, to pooling all recorded
    widths (weighted by width_dist), truncating to the feasible range
    0..k-1, and renormalizing; a uniform distribution is the last resort.
    """
    if k < 1:
        raise ValueError(f"clause width must be >= 1, got {k}")
    if label not in (SAT, UNSAT):
        raise ValueError(f"label must be {SAT} or {UNSAT}, got {label!r}")
    table = profile.sat_slack if label == SAT else profile.unsat_slack
    direct = table.get(k)
    if direct:
        return dict(direct)
    shares = {w: profile.width_dist.get(w, 0.0) for w in table}
    if sum(shares.values()) <= 0:
        shares = {w: 1.0 for w in table}
    pooled: dict[int, float] = defaultdict(float)
    for w, dist in table.items():
        for s, p in dist.items():
            pooled[s] += shares[w] * p
    truncated = {s: p for s, p in pooled.items() if s <= k - 1 and p > 0}
    if not truncated:
        return {s: 1.0 / k for s in range(k)}
    total = sum(truncated.values())
    return {s: p / total for s, p in sorted(truncated.items())}


def stretch_skew(skew: Sequence[float], n: int) -> np.ndarray:
    """Resample a rank profile onto n ranks and normalize it to a weight vector."""
    if n < 1:
        raise ValueError(f"need at least one rank, got {n}")
    values = np.asarray(skew, dtype=np.float64)
    if values.size == 1 or n == 1:
        weights = np.full(n, 1.0)
    else:
        grid = np.linspace(0.0, 1.0, n)
        xp = np.linspace(0.0, 1.0, values.size)
        weights = np.interp(grid, xp, values)
    floor = weights.max() * 1e-12
    weights = np.maximum(weights, floor if floor > 0 else 1.0)
    return weights / weights.sum()


class ProfileSampler:
    """Clause ingredient sampler bound to one instance.

    The occurrence-skew rank permutation is drawn once at construction so all
    clauses of the instance share one skew realization; widths that cannot
    fit the instance are dropped with the remaining mass renormalized, which
    matches resampling until the width fits.
    """

    _POOL = 4096

    def __init__(
        self,
        profile: BenchmarkProfile,
        n: int,
        rng: np.random.Generator | int | None,
        exclude: Sequence[int] = (),
    ) -> None:
        if n < 1:
            raise ValueError(f"instance must have at least one variable, got {n}")
        self.profile = profile
        self.n = n
        self.rng = np.random.default_rng(rng)
        self._exclude = frozenset(int(v) for v in exclude)
        for v in self._exclude:
            if not 1 <= v <= n:
                raise ValueError(f"excluded variable {v} outside 1..{n}")
        self._available = n - len(self._exclude)
        if self._available < 1:
            raise ValueError("every variable is excluded")
        widths = [w for w in sorted(profile.width_dist) if w <= self._available]
        if not widths:
            raise ValueError(
                f"no clause width in the profile fits {self._available} usable variables"
            )
        mass = [profile.width_dist[w] for w in widths]
        total = sum(mass)
        if total <= 0:
            raise ValueError("width distribution has no mass on feasible widths")
        self._widths = widths
        self._width_cdf = list(np.cumsum([p / total for p in mass]))
        self._width_cdf[-1] = float("inf")
        rank_weights = stretch_skew(profile.occurrence_skew, n)
        perm = self.rng.permutation(n)
        weights = rank_weights[perm]
        if self._exclude:
            for v in self._exclude:
                weights[v - 1] = 0.0
        cum = np.cumsum(weights)
        self._cum = (cum / cum[-1]).tolist()
        self._cum[-1] = float("inf")
        self._weights = weights
        self._slack_cdfs: dict[tuple[int, str], tuple[list[int], list[float]]] = {}
        self._pool = self.rng.random(self._POOL)
        self._pool_i = 0

    def _u(self) -> float:
        if self._pool_i == self._POOL:
            self._pool = self.rng.random(self._POOL)
            self._pool_i = 0
        u = self._pool[self._pool_i]
        self._pool_i += 1
        return u

    def sample_width(self) -> int:
        """Draw a clause width; widths wider than the usable variable count never occur."""
        return self._widths[bisect_left(self._width_cdf, self._u())]

    def sample_variables(self, k: int) -> list[int]:
        """Draw k distinct variables by sequential weighted sampling, then shuffle.

        Drawing from the fixed skew weights and keeping first occurrences is
        distributionally identical to successive sampling without
        replacement; the final uniform shuffle removes the size-biased order.
        """
        if not 1 <= k <= self._available:
            raise ValueError(f"cannot draw {k} distinct variables from {self._available}")
        if k == self._available:
            allowed = [v for v in range(1, self.n + 1) if v not in self._exclude]
            picked = [int(v) for v in np.array(allowed)[self.rng.permutation(k)]]
            return picked
        cum = self._cum
        picked: list[int] = []
        seen: set[int] = set()
        misses = 0
        while len(picked) < k:
            v = bisect_left(cum, self._u()) + 1
            if v in seen:
                misses += 1
                if misses > 64:
                    picked = self._sample_exact(k, picked, seen)
                    break
                continue
            misses = 0
            seen.add(v)
            picked.append(v)
        for i in range(k - 1, 0, -1):
            j = int(self._u() * (i + 1))
            picked[i], picked[j] = picked[j], picked[i]
        return picked

    def _sample_exact(self, k: int, picked: list[int], seen: set[int]) -> list[int]:
        """O(n)-per-draw remainder of sequential sampling, for pathological skews."""
        weights = self._weights.copy()
        for v in seen:
            weights[v - 1] = 0.0
        picked = list(picked)
        while len(picked) < k:
            cum = np.cumsum(weights)
            u = self._u() * cum[-1]
            v = int(np.searchsorted(cum, u, side="right")) + 1
            v = min(v, self.n)
            while weights[v - 1] == 0.0:
                v -= 1
            picked.append(v)
            weights[v - 1] = 0.0
        return picked

    def sample_slack(self, k: int, label: str) -> int:
        """Draw a planted slack for a width-k clause from the label's distribution."""
        key = (k, label)
        cached = self._slack_cdfs.get(key)
        if cached is None:
            dist = slack_distribution(self.profile, k, label)
            support = sorted(dist)
            cdf = list(np.cumsum([dist[s] for s in support]))
            cdf[-1] = float("inf")
            cached = (support, cdf)
            self._slack_cdfs[key] = cached
        support, cdf = cached
        return support[bisect_left(cdf, self._u())]


def default_3sat_profile() -> BenchmarkProfile:
    """Width-3 phase-transition profile.

    The slack law is that of a uniformly random width-3 clause conditioned on
    being satisfied: satisfied-literal counts follow Binomial(3, 1/2)
    restricted to >= 1, so slacks 0, 1, 2 carry mass 3/7, 3/7, 1/7.
    """
    slack3 = {0: 3 / 7, 1: 3 / 7, 2: 1 / 7}
    res = SKEW_RESOLUTION
    return BenchmarkProfile(
        width_dist={3: 1.0},
        occurrence_skew=(1.0 / res,) * res,
        sat_slack={3: dict(slack3)},
        unsat_slack={3: dict(slack3)},
        dominant_width=3,
        alpha=4.27,
        size_range=(10, 40, 43, 171),
    )


def profile_to_dict(profile: BenchmarkProfile) -> dict:
    return {
        "version": PROFILE_VERSION,
        "width_dist": {str(w): p for w, p in profile.width_dist.items()},
        "skew_profile": list(profile.occurrence_skew),
        "sat_slack": {
            str(w): {str(s): p for s, p in d.items()}
            for w, d in profile.sat_slack.items()
        },
        "unsat_slack": {
            str(w): {str(s): p for s, p in d.items()}
            for w, d in profile.unsat_slack.items()
        },
        "dominant_width": profile.dominant_width,
        "alpha": profile.alpha,
        "size_range": list(profile.size_range),
    }


def profile_from_dict(data: dict) -> BenchmarkProfile:
    version = data.get("version")
    if version != PROFILE_VERSION:
        raise ValueError(f"unsupported profile version {version!r}")
    return BenchmarkProfile(
        width_dist={int(w): float(p) for w, p in data["width_dist"].items()},
        occurrence_skew=tuple(float(v) for v in data["skew_profile"]),
        sat_slack={
            int(w): {int(s): float(p) for s, p in d.items()}
            for w, d in data["sat_slack"].items()
        },
        unsat_slack={
            int(w): {int(s): float(p) for s, p in d.items()}
            for w, d in data["unsat_slack"].items()
        },
        dominant_width=int(data["dominant_width"]),
        alpha=float(data["alpha"]),
        size_range=tuple(int(v) for v in data["size_range"]),
    )


def save_profile(profile: BenchmarkProfile, path: str | Path) -> None:
    Path(path).write_text(json.dumps(profile_to_dict(profile), indent=2) + "\n")


def load_profile(path: str | Path) -> BenchmarkProfile:
    return profile_from_dict(json.loads(Path(path).read_text()))


def profile_id(profile: BenchmarkProfile) -> str:
    """Short content hash identifying a profile in dataset manifests."""
    canonical = json.dumps(profile_to_dict(profile), sort_keys=True)
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]
