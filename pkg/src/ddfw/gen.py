"""Random k-SAT instance generators for tests and desk-scale experiments.

Planted instances fix a hidden assignment first and sample only clauses it
satisfies, so satisfiability is guaranteed without running a complete solver.
"""

from __future__ import annotations

import random

from .cnf import Assignment, Clause, Formula


def random_ksat(num_vars: int, num_clauses: int, k: int = 3, seed: int = 0) -> Formula:
    """Uniform random k-SAT: k distinct variables per clause, random signs."""
    rng = random.Random(seed)
    variables = range(1, num_vars + 1)
    clauses = []
    for _ in range(num_clauses):
        chosen = rng.sample(variables, k)
        clauses.append(Clause.from_lits(v if rng.random() < 0.5 else -v for v in chosen))
    return Formula(num_vars, clauses)


def planted_ksat(
    num_vars: int, num_clauses: int, k: int = 3, seed: int = 0
) -> tuple[Formula, Assignment]:
    """Random k-SAT satisfied by a hidden planted assignment.

    Clauses are sampled as in random_ksat but resampled until satisfied by
    the planted assignment (uniform over satisfying clauses). Returns the
    formula and the planted assignment.
    """
    rng = random.Random(seed)
    planted: Assignment = [False] + [rng.random() < 0.5 for _ in range(num_vars)]
    variables = range(1, num_vars + 1)
    clauses = []
    for _ in range(num_clauses):
        while True:
            chosen = rng.sample(variables, k)
            lits = [v if rng.random() < 0.5 else -v for v in chosen]
            if any(planted[l] if l > 0 else not planted[-l] for l in lits):
                clauses.append(Clause.from_lits(lits))
                break
    return Formula(num_vars, clauses), planted
