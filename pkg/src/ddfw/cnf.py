"""CNF formulas: DIMACS parsing, occurrence lists, clause neighborhoods.

Literals follow the DIMACS convention: a nonzero signed integer whose absolute
value is the 1-based variable index, positive for the variable and negative
for its negation. Assignments are lists of booleans indexed by variable
(index 0 is unused).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence

Literal = int
Assignment = List[bool]


class DimacsError(ValueError):
    """Malformed DIMACS CNF input."""


class EmptyClauseError(DimacsError):
    """The input contains an empty clause.

    An empty clause makes the formula trivially unsatisfiable, and a local
    search solver has no way to report unsatisfiability, so such inputs are
    rejected outright.
    """


@dataclass(frozen=True)
class Clause:
    """A disjunction of literals.

    Duplicate literals are removed at construction (first occurrence kept).
    A clause containing both v and -v is flagged tautological: it is satisfied
    by every assignment and never enters the falsified set.
    """

    lits: tuple[Literal, ...]
    tautological: bool = False

    @staticmethod
    def from_lits(lits: Iterable[Literal]) -> "Clause":
        seen: set[int] = set()
        kept: list[int] = []
        for lit in lits:
            if lit == 0:
                raise ValueError("literal 0 is reserved as the clause terminator")
            if lit not in seen:
                seen.add(lit)
                kept.append(lit)
        if not kept:
            raise EmptyClauseError("empty clause")
        taut = any(-lit in seen for lit in kept)
        return Clause(tuple(kept), taut)

    def __len__(self) -> int:
        return len(self.lits)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.lits)


class Formula:
    """Immutable CNF over variables 1..num_vars with occurrence lists.

    Clause indices are dense 0..m-1 in input order; duplicate clauses keep
    their own index (and later their own weight). For every literal, occ()
    lists exactly the clauses whose literal set contains it, polarity
    included. The formula is never mutated after construction and can be
    shared freely across concurrent searches.
    """

    def __init__(self, num_vars: int, clauses: Sequence[Clause]):
        if num_vars < 0:
            raise ValueError("negative variable count")
        for idx, clause in enumerate(clauses):
            for lit in clause.lits:
                if abs(lit) > num_vars:
                    raise ValueError(
                        f"clause {idx}: literal {lit} exceeds variable count {num_vars}"
                    )
        self.num_vars = num_vars
        self.clauses: tuple[Clause, ...] = tuple(clauses)
        # Variables per clause, deduplicated, for uvars bookkeeping.
        self.clause_vars: tuple[tuple[int, ...], ...] = tuple(
            tuple(dict.fromkeys(abs(lit) for lit in c.lits)) for c in self.clauses
        )
        pos: list[list[int]] = [[] for _ in range(num_vars + 1)]
        neg: list[list[int]] = [[] for _ in range(num_vars + 1)]
        for idx, clause in enumerate(self.clauses):
            for lit in clause.lits:
                (pos if lit > 0 else neg)[abs(lit)].append(idx)
        self.pos_occ: tuple[tuple[int, ...], ...] = tuple(tuple(l) for l in pos)
        self.neg_occ: tuple[tuple[int, ...], ...] = tuple(tuple(l) for l in neg)

    def __len__(self) -> int:
        return len(self.clauses)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        return self.num_vars == other.num_vars and all(
            a.lits == b.lits for a, b in zip(self.clauses, other.clauses)
        ) and len(self.clauses) == len(other.clauses)

    def occ(self, lit: Literal) -> tuple[int, ...]:
        """Indices of the clauses containing exactly this literal."""
        if lit == 0 or abs(lit) > self.num_vars:
            raise ValueError(f"literal {lit} out of range")
        return self.pos_occ[lit] if lit > 0 else self.neg_occ[-lit]

    def neighbors(self, c: int) -> set[int]:
        """Clauses sharing at least one literal (same polarity) with clause c.

        The clause itself is excluded. Intended for tests and small formulas;
        the search never materializes neighbor sets and instead scans the
        occurrence lists directly.
        """
        out: set[int] = set()
        for lit in self.clauses[c].lits:
            out.update(self.occ(lit))
        out.discard(c)
        return out


def verify_model(formula: Formula, alpha: Assignment) -> bool:
    """True iff every clause has at least one literal satisfied by alpha."""
    if len(alpha) != formula.num_vars + 1:
        raise ValueError(
            f"assignment covers {len(alpha) - 1} variables, formula has {formula.num_vars}"
        )
    for clause in formula.clauses:
        for lit in clause.lits:
            if alpha[lit] if lit > 0 else not alpha[-lit]:
                break
        else:
            return False
    return True


def parse_dimacs(text: str | bytes) -> Formula:
    """Parse DIMACS CNF text into a Formula.

    Accepts comment lines starting with 'c', a single 'p cnf <vars> <clauses>'
    header, and whitespace-separated literals with 0 terminating each clause
    (clauses may span lines). Raises DimacsError on a missing or garbled
    header, out-of-range literals, a clause count mismatch, or an unterminated
    clause, and EmptyClauseError if any clause has no literals.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    num_vars = -1
    num_clauses = -1
    clauses: list[Clause] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_vars >= 0:
                raise DimacsError(f"line {lineno}: duplicate header")
            fields = line.split()
            if len(fields) != 4 or fields[0] != "p" or fields[1] != "cnf":
                raise DimacsError(f"line {lineno}: bad header {line!r}")
            try:
                num_vars, num_clauses = int(fields[2]), int(fields[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: non-integer header counts") from None
            if num_vars < 0 or num_clauses < 0:
                raise DimacsError(f"line {lineno}: negative header counts")
            continue
        if num_vars < 0:
            raise DimacsError(f"line {lineno}: clause data before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: non-integer token {tok!r}") from None
            if lit == 0:
                if not pending:
                    raise EmptyClauseError(f"line {lineno}: empty clause")
                clauses.append(Clause.from_lits(pending))
                pending = []
            else:
                if abs(lit) > num_vars:
                    raise DimacsError(
                        f"line {lineno}: literal {lit} exceeds declared {num_vars} variables"
                    )
                pending.append(lit)
    if num_vars < 0:
        raise DimacsError("missing 'p cnf' header")
    if pending:
        raise DimacsError("unterminated clause at end of input")
    if len(clauses) != num_clauses:
        raise DimacsError(
            f"header declares {num_clauses} clauses, found {len(clauses)}"
        )
    return Formula(num_vars, clauses)


def parse_dimacs_file(path: str) -> Formula:
    with open(path, "rb") as f:
        return parse_dimacs(f.read())


def to_dimacs(formula: Formula) -> str:
    """Canonical DIMACS text; parsing it back yields an equal Formula."""
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause.lits) + " 0")
    return "\n".join(lines) + "\n"
