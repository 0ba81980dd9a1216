"""Incremental search state over a fixed formula.

Tracks the assignment, per-clause satisfied-literal counts, the set of
falsified clauses, their total weight, and the list of variables occurring in
at least one falsified clause (uvars). All of it is maintained in O(occ(v))
per flip; nothing is rescanned from scratch during search.
"""

from __future__ import annotations

import random
from typing import NamedTuple

from .cnf import Assignment, Formula
from .weights import WeightStore

# Flips whose weight delta is within this absolute tolerance count as
# sideways. Floating-point transfers make exact zeros rare, so an exact
# comparison would under-report sideways moves.
SIDEWAYS_TOL = 1e-9


class DeltaReport(NamedTuple):
    """Weight change if var is flipped; positive delta = falsified weight drops."""

    var: int
    delta: float


class SearchState:
    """Mutable search position: single-owner, never shared between searches.

    The falsified set and uvars are kept as dense lists with position maps so
    membership updates are O(1) (swap-remove). uvars additionally carries a
    per-variable counter of containing falsified clauses, so a variable drops
    out exactly when its last falsified clause is satisfied.
    """

    def __init__(self, formula: Formula, weights: WeightStore, alpha: Assignment):
        if len(alpha) != formula.num_vars + 1:
            raise ValueError(
                f"assignment covers {len(alpha) - 1} variables, formula has {formula.num_vars}"
            )
        self.formula = formula
        self.alpha = alpha
        # Local aliases of the immutable formula guts, for the hot loops.
        self.clause_vars = formula.clause_vars
        self.pos_occ = formula.pos_occ
        self.neg_occ = formula.neg_occ

        m = len(formula.clauses)
        n = formula.num_vars
        self.num_true = [0] * m
        self.falsified: list[int] = []
        self.falsified_pos = [-1] * m
        self.falsified_weight = 0.0
        self.uvars: list[int] = []
        self.uvars_pos = [-1] * (n + 1)
        self.uvars_count = [0] * (n + 1)
        self.flips = 0
        self.sideways_count = 0
        self.local_minima_count = 0

        w = weights.w
        for ci, clause in enumerate(formula.clauses):
            nt = 0
            for lit in clause.lits:
                if alpha[lit] if lit > 0 else not alpha[-lit]:
                    nt += 1
            self.num_true[ci] = nt
            if nt == 0:
                self.falsified_pos[ci] = len(self.falsified)
                self.falsified.append(ci)
                self.falsified_weight += w[ci]
                for v in self.clause_vars[ci]:
                    if self.uvars_count[v] == 0:
                        self.uvars_pos[v] = len(self.uvars)
                        self.uvars.append(v)
                    self.uvars_count[v] += 1

    def is_satisfying(self) -> bool:
        return not self.falsified

    def flip(self, weights: WeightStore, v: int) -> None:
        """Toggle v and update every derived field incrementally.

        Only clauses containing v (either polarity) are touched. Flipping the
        same variable twice restores the original state except for counters.
        """
        alpha = self.alpha
        num_true = self.num_true
        clause_vars = self.clause_vars
        uvars_count = self.uvars_count
        uvars_pos = self.uvars_pos
        uvars = self.uvars
        falsified = self.falsified
        falsified_pos = self.falsified_pos
        w = weights.w
        fw = self.falsified_weight

        was_true = alpha[v]
        alpha[v] = not was_true
        if was_true:
            losing, gaining = self.pos_occ[v], self.neg_occ[v]
        else:
            losing, gaining = self.neg_occ[v], self.pos_occ[v]

        for ci in losing:
            nt = num_true[ci] - 1
            num_true[ci] = nt
            if nt == 0:
                falsified_pos[ci] = len(falsified)
                falsified.append(ci)
                fw += w[ci]
                for u in clause_vars[ci]:
                    c = uvars_count[u]
                    if c == 0:
                        uvars_pos[u] = len(uvars)
                        uvars.append(u)
                    uvars_count[u] = c + 1
        for ci in gaining:
            nt = num_true[ci] + 1
            num_true[ci] = nt
            if nt == 1:
                pos = falsified_pos[ci]
                last = falsified[-1]
                falsified[pos] = last
                falsified_pos[last] = pos
                falsified.pop()
                falsified_pos[ci] = -1
                fw -= w[ci]
                for u in clause_vars[ci]:
                    c = uvars_count[u] - 1
                    uvars_count[u] = c
                    if c == 0:
                        pos = uvars_pos[u]
                        last = uvars[-1]
                        uvars[pos] = last
                        uvars_pos[last] = pos
                        uvars.pop()
                        uvars_pos[u] = -1

        self.falsified_weight = fw
        self.flips += 1

    def delta_weight(self, weights: WeightStore, v: int) -> DeltaReport:
        """Falsified-weight reduction if v were flipped.

        Gains the weight of every falsified clause containing v (its literal
        there is currently false and would become true); loses the weight of
        every satisfied clause whose only true literal sits on v.
        """
        num_true = self.num_true
        w = weights.w
        if self.alpha[v]:
            true_occ, false_occ = self.pos_occ[v], self.neg_occ[v]
        else:
            true_occ, false_occ = self.neg_occ[v], self.pos_occ[v]
        delta = 0.0
        for ci in false_occ:
            if num_true[ci] == 0:
                delta += w[ci]
        for ci in true_occ:
            if num_true[ci] == 1:
                delta -= w[ci]
        return DeltaReport(v, delta)

    def classify_uvars(
        self, weights: WeightStore
    ) -> tuple[list[DeltaReport], list[int]]:
        """One pass over uvars: weight-reducing variables and sideways variables.

        Variables outside uvars touch no falsified clause, so their delta is
        never positive; restricting the scan to uvars loses no candidate.
        """
        num_true = self.num_true
        alpha = self.alpha
        pos_occ = self.pos_occ
        neg_occ = self.neg_occ
        w = weights.w
        wrv: list[DeltaReport] = []
        sideways: list[int] = []
        for v in self.uvars:
            if alpha[v]:
                true_occ, false_occ = pos_occ[v], neg_occ[v]
            else:
                true_occ, false_occ = neg_occ[v], pos_occ[v]
            delta = 0.0
            for ci in false_occ:
                if num_true[ci] == 0:
                    delta += w[ci]
            for ci in true_occ:
                if num_true[ci] == 1:
                    delta -= w[ci]
            if delta > SIDEWAYS_TOL:
                wrv.append(DeltaReport(v, delta))
            elif -SIDEWAYS_TOL <= delta:
                sideways.append(v)
        return wrv, sideways

    def wrv_candidates(self, weights: WeightStore) -> list[DeltaReport]:
        """Variables whose flip strictly reduces falsified weight."""
        return self.classify_uvars(weights)[0]

    def sideways_candidates(self, weights: WeightStore) -> list[int]:
        """Variables whose flip leaves falsified weight unchanged (within tolerance)."""
        return self.classify_uvars(weights)[1]


def init_random(formula: Formula, weights: WeightStore, rng: random.Random) -> SearchState:
    """Fresh state from a uniform random assignment (each variable true w.p. 1/2)."""
    alpha: Assignment = [False] + [rng.random() < 0.5 for _ in range(formula.num_vars)]
    return SearchState(formula, weights, alpha)


def init_from(formula: Formula, weights: WeightStore, alpha: Assignment) -> SearchState:
    """Fresh state from a given total assignment (copied, not aliased)."""
    return SearchState(formula, weights, list(alpha))
