"""Restart scheduling with best-assignment caching.

Clause weights always survive a restart; only the assignment is reset. Even
restarts (0-based) resume from the best assignment seen so far, odd restarts
draw a fresh random one, trading exploitation against exploration.

Two interval schedules ship. The "literal" multiplier update (reset x to 1
when x is a power of two, else double it) is degenerate: x starts at 1, which
is a power of two, so x stays 1 and every interval equals the base. The
"luby" schedule is the standard growing alternative for callers who want
intervals that actually lengthen.
"""

from __future__ import annotations

import math
import random

from .cnf import Assignment, Formula
from .state import SearchState, init_from, init_random
from .weights import WeightStore

DEFAULT_BASE = 100_000
SCHEDULES = ("literal", "luby")


def luby(i: int) -> int:
    """i-th term (1-based) of the Luby sequence 1,1,2,1,1,2,4,..."""
    if i < 1:
        raise ValueError("luby index is 1-based")
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while (1 << k) - 1 != i:
        k -= 1
        i -= (1 << k) - 1
    return 1 << (k - 1)


class RestartPolicy:
    """Owns the restart interval state and the cached best assignment.

    The best assignment is the one with the fewest falsified clauses seen
    anywhere in the run; best_falsified only ever decreases.
    """

    def __init__(
        self, enabled: bool = False, sched: str = "literal", base: int = DEFAULT_BASE
    ):
        if sched not in SCHEDULES:
            raise ValueError(f"unknown restart schedule {sched!r}")
        if base < 1:
            raise ValueError("restart base must be at least 1 flip")
        self.enabled = enabled
        self.sched = sched
        self.base = base
        self.x = 1
        self.luby_index = 1
        self.restarts_done = 0
        self.best: Assignment | None = None
        self.best_falsified = math.inf

    def next_interval(self) -> int:
        """Flips until the next restart; advances the schedule."""
        if self.sched == "literal":
            interval = self.base * self.x
            self.x = 1 if self.x & (self.x - 1) == 0 else 2 * self.x
        else:
            interval = self.base * luby(self.luby_index)
            self.luby_index += 1
        return interval

    def observe(self, falsified_count: int, alpha: Assignment) -> None:
        """Cache alpha if it falsifies fewer clauses than anything seen yet."""
        if falsified_count < self.best_falsified:
            self.best_falsified = falsified_count
            self.best = list(alpha)

    def on_restart(
        self, formula: Formula, weights: WeightStore, rng: random.Random
    ) -> SearchState:
        """Build the post-restart state; weights are left untouched."""
        use_best = self.restarts_done % 2 == 0 and self.best is not None
        self.restarts_done += 1
        if use_best:
            return init_from(formula, weights, self.best)
        return init_random(formula, weights, rng)
