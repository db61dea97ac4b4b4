"""Certificate checking: witness contracts, exhaustive labeling, core detection."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .cnf import SAT, UNSAT, Assignment, CnfFormula
from .encode import induced_slack
from .generate import GeneratedInstance

BRUTE_FORCE_CAP = 25


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of checking one instance's certificate."""

    label: str
    ok: bool
    failures: tuple[str, ...]


@dataclass(frozen=True)
class CoreInfo:
    """A full polarity enumeration found inside a formula."""

    width: int
    variables: tuple[int, ...]
    clause_indices: tuple[int, ...]


@njit(cache=True)
def _gray_search(n, var_ptr, var_cls, var_sign, counts, violated):
    """Walk all 2^n assignments in Gray-code order, updating only the clauses
    touched by the single flipped variable; return at the first satisfying
    assignment."""
    assign = np.zeros(n, dtype=np.uint8)
    if violated == 0:
        return True, assign
    total = np.int64(1) << np.int64(n)
    step = np.int64(1)
    while step < total:
        x = step
        v = 0
        while x & 1 == 0:
            x >>= 1
            v += 1
        newval = np.uint8(1) - assign[v]
        assign[v] = newval
        for j in range(var_ptr[v], var_ptr[v + 1]):
            c = var_cls[j]
            if var_sign[j] == newval:
                counts[c] += 1
                if counts[c] == 1:
                    violated -= 1
            else:
                counts[c] -= 1
                if counts[c] == 0:
                    violated += 1
        if violated == 0:
            return True, assign
        step += 1
    return False, assign


def _occurrence_arrays(
    formula: CnfFormula,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, int]:
    n, m = formula.num_vars, formula.num_clauses
    deg = np.zeros(n + 1, dtype=np.int64)
    for clause in formula.clauses:
        for lit in clause.lits:
            deg[abs(lit)] += 1
    var_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg[1:], out=var_ptr[1:])
    fill = var_ptr[:-1].copy()
    total = int(var_ptr[-1])
    var_cls = np.zeros(total, dtype=np.int64)
    var_sign = np.zeros(total, dtype=np.uint8)
    counts = np.zeros(m, dtype=np.int64)
    for ci, clause in enumerate(formula.clauses):
        for lit in clause.lits:
            v = abs(lit)
            slot = fill[v - 1]
            fill[v - 1] += 1
            var_cls[slot] = ci
            var_sign[slot] = 1 if lit > 0 else 0
            if lit < 0:
                counts[ci] += 1
    violated = int(np.count_nonzero(counts == 0))
    return var_ptr, var_cls, var_sign, counts, violated


def brute_force_label(
    formula: CnfFormula, cap: int = BRUTE_FORCE_CAP
) -> tuple[str, Assignment | None]:
    """Exhaustively label a formula; returns (label, first witness found or None).

    Enumeration runs in Gray-code order starting at the all-zero assignment,
    so each step re-evaluates only the clauses containing the one flipped
    variable. Which witness is returned is a property of that order, not a
    contract; callers should rely on the label only.
    """
    n = formula.num_vars
    if n > cap:
        raise ValueError(f"n={n} exceeds the enumeration cap {cap}")
    if n > 62:
        raise ValueError(f"n={n} exceeds the 2^n step counter range")
    if formula.num_clauses == 0:
        return SAT, Assignment((0,) * n)
    var_ptr, var_cls, var_sign, counts, violated = _occurrence_arrays(formula)
    found, assign = _gray_search(n, var_ptr, var_cls, var_sign, counts, violated)
    if found:
        return SAT, Assignment(tuple(int(b) for b in assign))
    return UNSAT, None


def detect_core(formula: CnfFormula, w_max: int = 12) -> CoreInfo | None:
    """Find a set of 2^w clauses over one w-variable set covering every
    polarity pattern, scanning clauses in order and grouping them by sorted
    variable set; returns the first completed enumeration, or None."""
    groups: dict[tuple[int, ...], dict[tuple[int, ...], int]] = {}
    for i, clause in enumerate(formula.clauses):
        ordered = sorted(clause.lits, key=abs)
        varset = tuple(abs(l) for l in ordered)
        w = len(varset)
        if w > w_max:
            continue
        pattern = tuple(1 if l < 0 else 0 for l in ordered)
        patterns = groups.setdefault(varset, {})
        if pattern not in patterns:
            patterns[pattern] = i
        if len(patterns) == 1 << w:
            return CoreInfo(w, varset, tuple(sorted(patterns.values())))
    return None


def _check_unsat(inst: GeneratedInstance, slacks: np.ndarray, failures: list[str]) -> None:
    f = inst.formula
    core = inst.core_indices
    if not core:
        failures.append("UNSAT instance carries no core indices")
        return
    w = (len(core) - 1).bit_length() if len(core) > 1 else 0
    if len(core) != 1 << w:
        failures.append(f"core size {len(core)} is not a power of two")
        return
    if len(set(core)) != len(core) or min(core) < 0 or max(core) >= f.num_clauses:
        failures.append("core indices must be distinct clause positions")
        return
    varsets = set()
    patterns = set()
    for i in core:
        ordered = sorted(f.clauses[i].lits, key=abs)
        varsets.add(tuple(abs(l) for l in ordered))
        patterns.add(tuple(1 if l < 0 else 0 for l in ordered))
    if len(varsets) != 1:
        failures.append("core clauses do not share one variable set")
        return
    varset = next(iter(varsets))
    if len(varset) != w:
        failures.append(
            f"core of {len(core)} clauses spans {len(varset)} variables, expected {w}"
        )
        return
    if len(patterns) != 1 << w:
        failures.append("core does not enumerate all polarity patterns")
    violated = [int(i) for i in np.nonzero(slacks < 0)[0]]
    if len(violated) != 1:
        failures.append(
            f"witness violates {len(violated)} clauses, expected exactly 1"
        )
    elif violated[0] not in set(core):
        failures.append(f"violated clause {violated[0]} is outside the core")
    core_set = set(core)
    filler = [i for i in range(f.num_clauses) if i not in core_set]
    if len(inst.planted_slacks) != len(filler):
        failures.append(
            f"{len(inst.planted_slacks)} planted slacks for {len(filler)} filler clauses"
        )
        return
    for planted, i in zip(inst.planted_slacks, filler):
        if slacks[i] != planted:
            failures.append(
                f"clause {i}: induced slack {int(slacks[i])} != planted {planted}"
            )


def verify_witness(inst: GeneratedInstance) -> VerifyReport:
    """Check every certificate contract of a generated instance.

    SAT: the witness satisfies all clauses and induces exactly the planted
    slacks. UNSAT: the recorded core indices form a full 2^w polarity
    enumeration over one variable set, the witness violates exactly one
    clause (inside the core), and filler slacks match the plant. Only clause
    evaluation and slack semantics are used, never generator internals.
    """
    failures: list[str] = []
    f = inst.formula
    if inst.label not in (SAT, UNSAT):
        return VerifyReport(inst.label, False, (f"unknown label {inst.label!r}",))
    if len(inst.witness) != f.num_vars:
        return VerifyReport(
            inst.label,
            False,
            (f"witness length {len(inst.witness)} != {f.num_vars} variables",),
        )
    slacks = induced_slack(f, inst.witness).values
    if inst.label == SAT:
        if inst.core_indices:
            failures.append("SAT instance must not carry core indices")
        if len(inst.planted_slacks) != f.num_clauses:
            failures.append(
                f"{len(inst.planted_slacks)} planted slacks for {f.num_clauses} clauses"
            )
        else:
            for i, (s, planted) in enumerate(zip(slacks, inst.planted_slacks)):
                if s < 0:
                    failures.append(f"clause {i}: violated by witness")
                elif s != planted:
                    failures.append(
                        f"clause {i}: induced slack {int(s)} != planted {planted}"
                    )
    else:
        _check_unsat(inst, slacks, failures)
    return VerifyReport(inst.label, not failures, tuple(failures))
