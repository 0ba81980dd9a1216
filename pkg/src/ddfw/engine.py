"""The main search loop: greedy or weighted-random descent on falsified
weight, occasional sideways flips, and weight redistribution in local minima.

A run is deterministic for a fixed (seed, config, thread_id): every random
choice comes from one generator reseeded per try from those values.
Determinism is a promise of this implementation only, not a cross-solver
bit-compatibility contract.
"""

from __future__ import annotations

import math
import random
import threading
import time
from dataclasses import dataclass, field, replace
from typing import Sequence

from .cnf import Assignment, Formula, verify_model
from .restart import DEFAULT_BASE, RestartPolicy
from .state import DeltaReport, SearchState, init_random
from .weights import (
    DEFAULT_W0,
    CoinThresholds,
    GiverPick,
    NoGiverError,
    POLICY_PRESETS,
    TransferPolicy,
    WeightStore,
    policy_from_name,
    select_giver,
    transfer_amount,
)

PICK_METHODS = ("grdy", "wrnd")

# Stop flag / deadline are polled at least once per this many loop steps;
# every step performs at most one flip, so this is also a bound in flips.
_POLL_EVERY = 1024

_MASK64 = (1 << 64) - 1

COUNTER_KEYS = (
    "sideways",
    "local_minima",
    "transfers",
    "random_giver_picks",
    "giver_skips",
    "restarts",
)


def derive_seed(*parts: int) -> int:
    """Mix integers (global seed, try index, thread id) into one 64-bit seed."""
    h = 0x9E3779B97F4A7C15
    for p in parts:
        h = (h ^ (p & _MASK64)) & _MASK64
        # splitmix64 finalizer
        h = (h + 0x9E3779B97F4A7C15) & _MASK64
        z = h
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        h = z ^ (z >> 31)
    return h


@dataclass(frozen=True)
class SolverConfig:
    """Everything that parameterizes a run.

    maxflips may be math.inf for an unbounded try; the no-restart mode of the
    experiments is maxtries=1 with unlimited flips, which is the default.
    """

    policy: TransferPolicy = POLICY_PRESETS["fixed"]
    coins: CoinThresholds = field(default_factory=CoinThresholds)
    pick: str = "grdy"
    w0: float = DEFAULT_W0
    maxflips: float = math.inf
    maxtries: int = 1
    sideways_enabled: bool = True
    seed: int = 0
    restarts: bool = False
    restart_sched: str = "literal"
    restart_base: int = DEFAULT_BASE

    def __post_init__(self) -> None:
        if self.pick not in PICK_METHODS:
            raise ValueError(f"unknown pick method {self.pick!r}")
        if self.maxflips < 1:
            raise ValueError("maxflips must be at least 1")
        if self.maxtries < 1:
            raise ValueError("maxtries must be at least 1")
        if (
            self.policy.a_gt + self.policy.c_gt == 0.0
            and self.policy.a_eq + self.policy.c_eq == 0.0
        ):
            raise ValueError("policy transfers no weight; search cannot escape minima")

    def name(self) -> str:
        return config_name(self)


@dataclass
class RunResult:
    """Outcome of one solve attempt."""

    status: str  # "sat" | "unknown"
    model: Assignment | None
    flips: int
    tries: int
    elapsed: float
    counters: dict[str, int]
    sideways_windows: list[int] | None = None


def _policy_token(policy: TransferPolicy) -> str:
    for name, preset in POLICY_PRESETS.items():
        if policy == preset:
            return "fw" if name == "fixed" else name
    return f"custom:{policy.a_gt:g},{policy.a_eq:g},{policy.c_gt:g},{policy.c_eq:g}"


def config_name(cfg: SolverConfig) -> str:
    """Render the W-cC-P identifier, e.g. fw-c.01-grdy or lw-ith-c.1-wrnd."""
    c = f"{cfg.coins.cspt:g}"
    if c.startswith("0."):
        c = c[1:]
    return f"{_policy_token(cfg.policy)}-c{c}-{cfg.pick}"


def parse_config_name(name: str, **overrides) -> SolverConfig:
    """Build a SolverConfig from a W-cC-P identifier.

    The W token is fw, lw-itl, lw-ite, lw-ith, or custom:a_gt,a_eq,c_gt,c_eq;
    C is the cspt value with the leading zero dropped (c.1 means 0.1); P is
    grdy or wrnd. Remaining fields take their defaults unless overridden.
    """
    parts = name.rsplit("-", 2)
    if len(parts) != 3 or not parts[1].startswith("c"):
        raise ValueError(f"config string {name!r} is not W-cC-P")
    w_token, c_token, pick = parts
    policy = policy_from_name("fixed" if w_token == "fw" else w_token)
    try:
        cspt = float(c_token[1:])
    except ValueError:
        raise ValueError(f"bad cspt token {c_token!r} in {name!r}") from None
    coins = CoinThresholds(spt=overrides.pop("spt", CoinThresholds.spt), cspt=cspt)
    cfg = SolverConfig(policy=policy, coins=coins, pick=pick)
    return replace(cfg, **overrides) if overrides else cfg


def pick_greedy(cands: Sequence[DeltaReport]) -> int:
    """The candidate with the largest delta; ties go to the lowest variable."""
    best_v, best_d = cands[0]
    for v, d in cands:
        if d > best_d or (d == best_d and v < best_v):
            best_v, best_d = v, d
    return best_v


def pick_weighted_random(cands: Sequence[DeltaReport], rng: random.Random) -> int:
    """Sample a candidate with probability proportional to its delta."""
    total = 0.0
    for _, d in cands:
        total += d
    r = rng.random() * total
    acc = 0.0
    for v, d in cands:
        acc += d
        if r < acc:
            return v
    return cands[-1].var  # guard against rounding at the top end


def escape_local_minimum(
    formula: Formula,
    state: SearchState,
    weights: WeightStore,
    cfg: SolverConfig,
    rng: random.Random,
) -> tuple[int, int, int]:
    """Give every falsified clause weight from a selected satisfied giver.

    Falsified clauses are visited in ascending index order over a snapshot
    taken at entry (transfers change no assignment, so the live set cannot
    change mid-loop). Clauses whose giver selection fails are skipped and
    counted. Returns (transfers, random_giver_picks, giver_skips).
    """
    state.local_minima_count += 1
    cspt = cfg.coins.cspt
    policy = cfg.policy
    w = weights.w
    w0 = weights.w0
    transfers = random_picks = skips = 0
    for clause in sorted(state.falsified):
        try:
            pick: GiverPick = select_giver(formula, state, weights, clause, cspt, rng)
        except NoGiverError:
            skips += 1
            continue
        moved = weights.transfer(
            pick.clause, clause, transfer_amount(policy, w[pick.clause], w0)
        )
        # Receiver is falsified and the giver is satisfied, so the falsified
        # weight grows by exactly the amount moved.
        state.falsified_weight += moved
        transfers += 1
        if pick.random_branch:
            random_picks += 1
    return transfers, random_picks, skips


def run(
    formula: Formula,
    cfg: SolverConfig,
    thread_id: int = 0,
    stop: threading.Event | None = None,
    timeout: float | None = None,
    trace_window: int | None = None,
) -> RunResult:
    """Search for a model of formula under cfg.

    Per try the assignment is randomized (restarts, when enabled, re-randomize
    it mid-try on the configured schedule while keeping the clause weights).
    Returns status "sat" with a verified model, or "unknown" once the budget,
    timeout, or stop flag runs out. trace_window, when set, records the number
    of sideways flips in each completed window of that many flips.
    """
    t_start = time.perf_counter()
    deadline = None if timeout is None else t_start + timeout
    weights = WeightStore(len(formula.clauses), cfg.w0)
    rpol = RestartPolicy(cfg.restarts, cfg.restart_sched, cfg.restart_base)
    rng = random.Random()
    counters = dict.fromkeys(COUNTER_KEYS, 0)
    windows: list[int] | None = [] if trace_window else None
    window_mark = 0
    total_flips = 0
    folded_sideways = 0
    status = "unknown"
    model: Assignment | None = None
    tries = 0
    spt = cfg.coins.spt
    wrnd = cfg.pick == "wrnd"

    for t in range(1, cfg.maxtries + 1):
        tries = t
        rng.seed(derive_seed(cfg.seed, t, thread_id))
        state = init_random(formula, weights, rng)
        if rpol.enabled:
            rpol.observe(len(state.falsified), state.alpha)
            next_restart = rpol.next_interval()
        else:
            next_restart = None
        flips_in_try = 0
        steps = 0
        halted = False

        while True:
            if not state.falsified:
                status = "sat"
                model = list(state.alpha)
                break
            if flips_in_try >= cfg.maxflips:
                break
            steps += 1
            if steps % _POLL_EVERY == 0:
                if (stop is not None and stop.is_set()) or (
                    deadline is not None and time.perf_counter() >= deadline
                ):
                    halted = True
                    break
            if next_restart is not None and flips_in_try >= next_restart:
                counters["restarts"] += 1
                folded_sideways += state.sideways_count
                counters["local_minima"] += state.local_minima_count
                total_flips += state.flips
                state = rpol.on_restart(formula, weights, rng)
                rpol.observe(len(state.falsified), state.alpha)
                next_restart = flips_in_try + rpol.next_interval()
                continue

            wrv, svs = state.classify_uvars(weights)
            if wrv:
                v = pick_weighted_random(wrv, rng) if wrnd else pick_greedy(wrv)
                state.flip(weights, v)
            elif cfg.sideways_enabled and svs and rng.random() <= spt:
                state.flip(weights, svs[rng.randrange(len(svs))])
                state.sideways_count += 1
            else:
                tr, rp, sk = escape_local_minimum(formula, state, weights, cfg, rng)
                counters["transfers"] += tr
                counters["random_giver_picks"] += rp
                counters["giver_skips"] += sk
                continue

            flips_in_try += 1
            if rpol.enabled and len(state.falsified) < rpol.best_falsified:
                rpol.observe(len(state.falsified), state.alpha)
            if windows is not None:
                flipped_total = total_flips + state.flips
                if flipped_total % trace_window == 0:
                    windows.append(folded_sideways + state.sideways_count - window_mark)
                    window_mark = folded_sideways + state.sideways_count

        folded_sideways += state.sideways_count
        counters["local_minima"] += state.local_minima_count
        total_flips += state.flips
        if status == "sat" or halted:
            break

    counters["sideways"] = folded_sideways
    if model is not None and not verify_model(formula, model):
        raise RuntimeError("internal error: satisfying state failed verification")
    return RunResult(
        status=status,
        model=model,
        flips=total_flips,
        tries=tries,
        elapsed=time.perf_counter() - t_start,
        counters=counters,
        sideways_windows=windows,
    )
