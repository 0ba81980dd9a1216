"""Clause weights and the rules for moving them in local minima.

All clauses start at the same weight w0 and every transfer is clamped so the
giver never goes negative, which keeps the total weight constant for the whole
run. Heavy clauses are those strictly above w0; givers selected through the
random branch always hold at least w0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple

if TYPE_CHECKING:
    from .cnf import Formula
    from .state import SearchState

DEFAULT_W0 = 8.0
DEFAULT_SPT = 0.15
DEFAULT_CSPT = 0.01

# Attempts at rejection-sampling a random satisfied clause with weight >= w0
# before falling back to a linear scan.
_SAMPLE_TRIES = 100


class NoGiverError(RuntimeError):
    """No satisfied clause exists to take weight from."""


class WeightStore:
    """Per-clause nonnegative weights with a conserved total.

    `total` is fixed at m * w0; transfers move weight between clauses and
    cannot change the sum, so the cached value is never recomputed. Use
    sum_weights() to audit the invariant.
    """

    def __init__(self, num_clauses: int, w0: float = DEFAULT_W0):
        if w0 <= 0:
            raise ValueError("initial clause weight must be positive")
        self.w = [w0] * num_clauses
        self.w0 = w0
        self.total = num_clauses * w0

    def __len__(self) -> int:
        return len(self.w)

    def is_heavy(self, c: int) -> bool:
        """Strictly above the initial weight."""
        return self.w[c] > self.w0

    def sum_weights(self) -> float:
        return sum(self.w)

    def transfer(self, giver: int, receiver: int, amount: float) -> float:
        """Move up to `amount` weight from giver to receiver.

        The amount is clamped to the giver's current weight so weights stay
        nonnegative. Returns the amount actually moved.
        """
        if amount < 0:
            raise ValueError("transfer amount must be nonnegative")
        w = self.w
        moved = amount if amount <= w[giver] else w[giver]
        w[giver] -= moved
        w[receiver] += moved
        return moved


@dataclass(frozen=True)
class TransferPolicy:
    """How much weight a selected giver clause hands over.

    The amount is a_gt * giver_weight + c_gt for heavy givers and
    a_eq * giver_weight + c_eq otherwise. kind="fixed" is the constant-amount
    rule (both multipliers zero); kind="linear" scales with the giver.
    """

    kind: str
    a_gt: float
    a_eq: float
    c_gt: float
    c_eq: float

    def __post_init__(self) -> None:
        if self.kind not in ("fixed", "linear"):
            raise ValueError(f"unknown transfer kind {self.kind!r}")
        if self.kind == "fixed" and (self.a_gt != 0.0 or self.a_eq != 0.0):
            raise ValueError("fixed transfer policies use zero multipliers")
        for a in (self.a_gt, self.a_eq):
            if not 0.0 <= a <= 1.0:
                raise ValueError(f"multiplier {a} outside [0, 1]")
        for c in (self.c_gt, self.c_eq):
            if c < 0.0:
                raise ValueError(f"additive amount {c} negative")


# Named presets: the original constant rule plus the three linear variants
# that differ in how much weight a clause still at w0 gives away initially
# (low / equal / high relative to heavy clauses).
POLICY_PRESETS: dict[str, TransferPolicy] = {
    "fixed": TransferPolicy("fixed", 0.0, 0.0, 2.0, 1.0),
    "lw-itl": TransferPolicy("linear", 0.1, 0.05, 2.0, 1.0),
    "lw-ite": TransferPolicy("linear", 0.075, 0.075, 1.75, 1.75),
    "lw-ith": TransferPolicy("linear", 0.05, 0.1, 1.0, 2.0),
}


def policy_from_name(name: str) -> TransferPolicy:
    """Resolve a preset name or 'custom:a_gt,a_eq,c_gt,c_eq'."""
    if name in POLICY_PRESETS:
        return POLICY_PRESETS[name]
    if name.startswith("custom:"):
        parts = name[len("custom:") :].split(",")
        if len(parts) != 4:
            raise ValueError(f"custom policy needs 4 comma-separated values: {name!r}")
        a_gt, a_eq, c_gt, c_eq = (float(p) for p in parts)
        kind = "fixed" if a_gt == 0.0 and a_eq == 0.0 else "linear"
        return TransferPolicy(kind, a_gt, a_eq, c_gt, c_eq)
    raise ValueError(f"unknown transfer policy {name!r}")


def transfer_amount(policy: TransferPolicy, giver_weight: float, w0: float) -> float:
    """Weight to take from a giver holding giver_weight.

    Heavy givers (strictly above w0) use the gt coefficients; givers at or
    below w0 use the eq coefficients.
    """
    if giver_weight > w0:
        return policy.a_gt * giver_weight + policy.c_gt
    return policy.a_eq * giver_weight + policy.c_eq


@dataclass(frozen=True)
class CoinThresholds:
    """Probabilities for the two weighted coins in the search loop.

    spt gates sideways flips; cspt gates replacing the max-weight satisfied
    neighbor with a random satisfied clause when giving weight away.
    """

    spt: float = DEFAULT_SPT
    cspt: float = DEFAULT_CSPT

    def __post_init__(self) -> None:
        for p in (self.spt, self.cspt):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"coin threshold {p} outside [0, 1]")


class GiverPick(NamedTuple):
    clause: int
    random_branch: bool


def select_giver(
    formula: Formula,
    state: SearchState,
    weights: WeightStore,
    clause: int,
    cspt: float,
    rng: random.Random,
) -> GiverPick:
    """Pick the satisfied clause that gives weight to falsified `clause`.

    The candidate is the maximum-weight satisfied neighbor (ties to the lowest
    clause index). If there is none, or it holds less than w0, or the cspt
    coin succeeds, a uniformly random satisfied clause with weight >= w0 is
    taken instead. When no such clause exists the fallbacks are, in order: the
    maximum-weight satisfied clause anywhere, then NoGiverError if the whole
    formula is falsified.
    """
    num_true = state.num_true
    w = weights.w
    w0 = weights.w0

    best = -1
    best_w = -1.0
    for lit in formula.clauses[clause].lits:
        for ci in (formula.pos_occ[lit] if lit > 0 else formula.neg_occ[-lit]):
            # `clause` itself is falsified, so num_true screens it out too.
            if num_true[ci] > 0:
                wc = w[ci]
                if wc > best_w or (wc == best_w and ci < best):
                    best = ci
                    best_w = wc

    if best >= 0 and best_w >= w0 and rng.random() > cspt:
        return GiverPick(best, False)

    m = len(w)
    if m:
        for _ in range(_SAMPLE_TRIES):
            ci = rng.randrange(m)
            if num_true[ci] > 0 and w[ci] >= w0:
                return GiverPick(ci, True)
    qualifying = [ci for ci in range(m) if num_true[ci] > 0 and w[ci] >= w0]
    if qualifying:
        return GiverPick(qualifying[rng.randrange(len(qualifying))], True)
    # Nothing satisfied holds w0 anymore: settle for the heaviest satisfied
    # clause of any weight.
    best = -1
    best_w = -1.0
    for ci in range(m):
        if num_true[ci] > 0 and w[ci] > best_w:
            best = ci
            best_w = w[ci]
    if best >= 0:
        return GiverPick(best, True)
    raise NoGiverError("every clause is falsified; no giver available")
