"""CNF types, clause evaluation, and DIMACS round-tripping."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


SAT = "SAT"
UNSAT = "UNSAT"


class DimacsError(ValueError):
    """Raised when DIMACS input violates the format contract."""


@dataclass(frozen=True)
class Clause:
    """Disjunction of literals; a literal is a nonzero signed 1-based variable index."""

    lits: tuple[int, ...]

    def __post_init__(self) -> None:
        lits = tuple(int(l) for l in self.lits)
        object.__setattr__(self, "lits", lits)
        if not lits:
            raise ValueError("clause must contain at least one literal")
        seen: set[int] = set()
        for lit in lits:
            if lit == 0:
                raise ValueError("literal 0 is reserved as the DIMACS terminator")
            v = abs(lit)
            if v in seen:
                raise ValueError(f"variable {v} appears more than once in clause")
            seen.add(v)

    @property
    def width(self) -> int:
        return len(self.lits)

    def variables(self) -> tuple[int, ...]:
        return tuple(abs(l) for l in self.lits)


@dataclass(frozen=True)
class Assignment:
    """Total truth assignment; values[j] holds variable j+1 as 0 or 1."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        for v in values:
            if v not in (0, 1):
                raise ValueError(f"assignment values must be 0 or 1, got {v}")

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_bits(cls, bits: str) -> "Assignment":
        if not set(bits) <= {"0", "1"}:
            raise ValueError(f"bit string may only contain 0 and 1, got {bits!r}")
        return cls(tuple(1 if b == "1" else 0 for b in bits))

    def to_bits(self) -> str:
        return "".join("1" if v else "0" for v in self.values)


@dataclass(frozen=True)
class CnfFormula:
    """CNF formula over variables 1..num_vars."""

    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", tuple(self.clauses))
        if self.num_vars < 0:
            raise ValueError(f"num_vars must be nonnegative, got {self.num_vars}")
        for i, c in enumerate(self.clauses):
            for lit in c.lits:
                if abs(lit) > self.num_vars:
                    raise ValueError(
                        f"clause {i} references variable {abs(lit)} "
                        f"but formula has only {self.num_vars} variables"
                    )

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def widths(self) -> tuple[int, ...]:
        return tuple(c.width for c in self.clauses)


def evaluate_clause(clause: Clause, assignment: Assignment) -> int:
    """Return the number of literals of `clause` satisfied under `assignment`."""
    values = assignment.values
    n = len(values)
    count = 0
    for lit in clause.lits:
        v = lit if lit > 0 else -lit
        if v > n:
            raise ValueError(f"variable {v} out of range for assignment of length {n}")
        if values[v - 1] == (1 if lit > 0 else 0):
            count += 1
    return count


def evaluate_formula(formula: CnfFormula, assignment: Assignment) -> tuple[bool, int]:
    """Return (satisfied, violated_clause_count) for `formula` under `assignment`."""
    if len(assignment) != formula.num_vars:
        raise ValueError(
            f"assignment has {len(assignment)} values, formula has "
            f"{formula.num_vars} variables"
        )
    violated = 0
    for clause in formula.clauses:
        if evaluate_clause(clause, assignment) == 0:
            violated += 1
    return violated == 0, violated


def _close_clause(
    cur: list[int], n: int, lineno: int, strict: bool
) -> Clause:
    if not cur:
        raise DimacsError(f"line {lineno}: empty clause")
    seen: set[int] = set()
    lits: list[int] = []
    for lit in cur:
        v = abs(lit)
        if v > n:
            raise DimacsError(
                f"line {lineno}: variable {v} exceeds header count {n}"
            )
        if v in seen:
            if strict:
                raise DimacsError(
                    f"line {lineno}: variable {v} repeated within a clause"
                )
            warnings.warn(
                f"line {lineno}: dropping repeated variable {v} within a clause",
                stacklevel=3,
            )
            continue
        seen.add(v)
        lits.append(lit)
    return Clause(tuple(lits))


def parse_dimacs(data: str | bytes, strict: bool = True) -> CnfFormula:
    """Parse DIMACS CNF text.

    Strict mode enforces the declared clause count and rejects repeated
    variables within a clause. Lenient mode accepts the actual clause count,
    drops repeated variables with a warning, tolerates an unterminated final
    clause, and treats a lone '%' line as end of stream.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    header: tuple[int, int] | None = None
    clauses: list[Clause] = []
    cur: list[int] = []
    done = False
    for lineno, raw in enumerate(data.splitlines(), start=1):
        if done:
            break
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            if strict:
                raise DimacsError(f"line {lineno}: unexpected token {line.split()[0]!r}")
            done = True
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError(f"line {lineno}: duplicate header")
            if clauses or cur:
                raise DimacsError(f"line {lineno}: header must precede clauses")
            tokens = line.split()
            if len(tokens) != 4 or tokens[0] != "p" or tokens[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                n, m = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if n < 0 or m < 0:
                raise DimacsError(f"line {lineno}: negative counts in header")
            header = (n, m)
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause data before header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: non-integer token {tok!r}") from None
            if lit == 0:
                clauses.append(_close_clause(cur, header[0], lineno, strict))
                cur = []
            else:
                cur.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    n, m = header
    if cur:
        if strict:
            raise DimacsError("unterminated final clause")
        warnings.warn("closing unterminated final clause", stacklevel=2)
        clauses.append(_close_clause(cur, n, 0, strict))
    if len(clauses) != m:
        if strict:
            raise DimacsError(
                f"header declares {m} clauses but {len(clauses)} were parsed"
            )
        warnings.warn(
            f"header declares {m} clauses but {len(clauses)} were parsed",
            stacklevel=2,
        )
    return CnfFormula(n, tuple(clauses))


def write_dimacs(formula: CnfFormula) -> str:
    """Serialize to canonical DIMACS: header line, one clause per line, stored order."""
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(l) for l in clause.lits) + " 0")
    return "\n".join(lines) + "\n"


def read_dimacs(path: str | Path, strict: bool = True) -> CnfFormula:
    """Parse a DIMACS file from disk."""
    return parse_dimacs(Path(path).read_text(), strict=strict)


def formula_from_lists(num_vars: int, clause_lists: Iterable[Sequence[int]]) -> CnfFormula:
    """Build a formula from plain literal lists, e.g. [[1, -2], [3]]."""
    return CnfFormula(num_vars, tuple(Clause(tuple(c)) for c in clause_lists))
