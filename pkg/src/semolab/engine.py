"""Mutation operators, the one-offspring evolutionary loop, slot-based
parent selection, and trajectory instrumentation.

Two mutation operators (flip exactly one uniform position; flip each
position independently with probability 1/n) crossed with two parent
selection rules give the four algorithm variants:

* ``original`` selection picks a parent uniformly from the population.
* ``modified`` selection draws a slot index uniformly from the full slot
  range and idles (advancing the iteration counter but creating no
  offspring) when that slot is empty. Filtering out idle iterations
  recovers the original process exactly, because per-slot uniqueness makes
  occupied slots a bijection onto members.

The runtime of a run is counted in objective-function evaluations: one for
the initial individual plus one per offspring, so for the original
variants it equals one plus the number of iterations until the population
covers the Pareto front. Idle iterations advance the iteration counter
only; both counters are reported.

``run_until_cover`` is the tuned inner loop (a run spends millions of
iterations here); ``step`` is the readable reference implementation of a
single iteration and the two are held together by an exact equivalence
test in the suite.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Optional

from .benchmarks import BenchmarkSpec, Kind, default_max_iterations
from .core import Individual, Population


class Mutation(Enum):
    ONE_BIT = "one_bit"
    STANDARD = "standard"


class Selection(Enum):
    UNIFORM_PARENT = "uniform"
    SLOT_PARENT = "slot"


@dataclass(frozen=True)
class AlgorithmSpec:
    mutation: Mutation
    selection: Selection
    max_iterations: Optional[int] = None  # None: benchmark default cutoff

    @property
    def algorithm_name(self) -> str:
        return "semo" if self.mutation is Mutation.ONE_BIT else "gsemo"

    @property
    def variant_name(self) -> str:
        return ("original" if self.selection is Selection.UNIFORM_PARENT
                else "modified")

    @classmethod
    def semo(cls, max_iterations: Optional[int] = None,
             modified: bool = False) -> "AlgorithmSpec":
        sel = Selection.SLOT_PARENT if modified else Selection.UNIFORM_PARENT
        return cls(Mutation.ONE_BIT, sel, max_iterations)

    @classmethod
    def gsemo(cls, max_iterations: Optional[int] = None,
              modified: bool = False) -> "AlgorithmSpec":
        sel = Selection.SLOT_PARENT if modified else Selection.UNIFORM_PARENT
        return cls(Mutation.STANDARD, sel, max_iterations)

    @classmethod
    def from_names(cls, algorithm: str, variant: str = "original",
                   max_iterations: Optional[int] = None) -> "AlgorithmSpec":
        try:
            mut = {"semo": Mutation.ONE_BIT,
                   "gsemo": Mutation.STANDARD}[algorithm]
            sel = {"original": Selection.UNIFORM_PARENT,
                   "modified": Selection.SLOT_PARENT}[variant]
        except KeyError as exc:
            raise ValueError(f"unknown algorithm/variant: {exc}") from None
        return cls(mut, sel, max_iterations)


def _randbelow(getrandbits, n: int) -> int:
    """Uniform integer in [0, n) from a ``getrandbits`` source.

    Same rejection scheme the stdlib uses under ``randrange``, inlined
    here because the run loop draws hundreds of millions of indices and
    the stdlib wrapper's argument handling dominates otherwise.
    """
    k = (n - 1).bit_length()
    r = getrandbits(k)
    while r >= n:
        r = getrandbits(k)
    return r


@lru_cache(maxsize=None)
def _flip_count_cdf(n: int) -> tuple[float, ...]:
    """Cumulative distribution of Binomial(n, 1/n) flip counts."""
    if n == 1:
        return (0.0, 1.0)
    probs = [(1.0 - 1.0 / n) ** n]
    for k in range(n):
        probs.append(probs[-1] * (n - k) / ((k + 1) * (n - 1)))
    cdf, acc = [], 0.0
    for p in probs:
        acc = min(acc + p, 1.0)
        cdf.append(acc)
    cdf[-1] = 1.0
    return tuple(cdf)


def standard_flip_mask(n: int, cdf: tuple[float, ...], rng) -> int:
    """Bit mask of positions flipped by standard bit mutation.

    Draws the flip count from Binomial(n, 1/n) and then a uniform set of
    that many distinct positions, which is distributed identically to n
    independent per-bit coin flips.
    """
    u = rng.random()
    k = 0
    while u > cdf[k]:
        k += 1
    if k == 0:
        return 0
    getrandbits = rng.getrandbits
    if k == 1:
        return 1 << _randbelow(getrandbits, n)
    mask = 0
    left = k
    while left:
        b = 1 << _randbelow(getrandbits, n)
        if not mask & b:
            mask |= b
            left -= 1
    return mask


def mutate_one_bit(x: Individual, rng) -> Individual:
    """Copy of x with exactly one uniformly chosen position flipped."""
    return Individual(x.n, x.bits ^ (1 << _randbelow(rng.getrandbits, x.n)))


def mutate_standard(x: Individual, rng) -> Individual:
    """Copy of x with each position flipped independently w.p. 1/n."""
    return Individual(x.n, x.bits ^ standard_flip_mask(x.n, _flip_count_cdf(x.n), rng))


def select_parent_uniform(pop: Population, rng) -> int:
    """Bits of a uniformly chosen member; population must be non-empty."""
    if not len(pop):
        raise ValueError("cannot select from an empty population")
    return pop.xs[_randbelow(rng.getrandbits, len(pop.xs))]


def select_parent_slot(pop: Population, rng,
                       slot_count: Optional[int] = None) -> Optional[int]:
    """Slot-based parent draw: uniform slot index, None if it is empty."""
    if not len(pop):
        raise ValueError("cannot select from an empty population")
    s = _randbelow(rng.getrandbits,
                   pop.slot_count if slot_count is None else slot_count)
    return pop.member_at_slot(s)


@dataclass(frozen=True)
class TrajectoryRecord:
    """State snapshot at iteration t.

    ``max_g1``/``z_count`` (the best cooperative level and how many members
    attain it) are meaningful for cocz only and None otherwise. ``d_pf`` is
    the population's distance to the extremal front points. ``covered`` is
    the number of Pareto-front values present, ``front_covered`` the same
    as a fraction of the front size.
    """

    t: int
    pop_size: int
    max_g1: Optional[int]
    z_count: Optional[int]
    d_pf: int
    covered: int
    front_covered: float
    slot_occupancy: Optional[int] = None


@dataclass(frozen=True)
class TrialResult:
    """Outcome of one run: runtimes, censoring, and sampled trajectory."""

    benchmark: str
    n: int
    k: Optional[int]
    algorithm: str
    variant: str
    seed: int
    runtime_evals: int
    runtime_iters: int
    censored: bool
    final_pop_size: int
    final_covered: int
    final_front_covered: float
    interior_init: bool = False
    trajectory: tuple[TrajectoryRecord, ...] = field(default=())


class RunState:
    """Mutable per-run state; confined to a single thread."""

    __slots__ = ("bspec", "alg", "kernels", "pop", "rng", "n", "t",
                 "evaluations", "flip_cdf", "slot_draw_count")

    def __init__(self, bspec: BenchmarkSpec, alg: AlgorithmSpec, rng,
                 slot_count_offset: int = 0, interior_init: bool = False):
        self.bspec = bspec
        self.alg = alg
        self.kernels = bspec.kernels()
        self.rng = rng
        self.n = bspec.n
        self.t = 0
        # slot_count_offset is a fault-injection hook for the harness'
        # negative control; leave at 0 for a faithful run.
        self.slot_draw_count = self.kernels.slot_count + slot_count_offset
        if self.slot_draw_count < 1:
            raise ValueError("slot draw range must stay positive")
        self.flip_cdf = (_flip_count_cdf(self.n)
                         if alg.mutation is Mutation.STANDARD else None)
        bits = rng.getrandbits(self.n)
        if interior_init:
            if bspec.kind is not Kind.OJZJ:
                raise ValueError("interior initialization is ojzj-specific")
            lo, hi = bspec.k, self.n - bspec.k
            if lo > hi:
                raise ValueError("interior range empty for this gap size")
            while not lo <= bits.bit_count() <= hi:
                bits = rng.getrandbits(self.n)
        self.pop = Population(self.kernels.slot_count,
                              self.kernels.slot_from_pair,
                              self.kernels.is_front_pair)
        f1, f2 = self.kernels.evaluate(bits)
        self.pop.insert(bits, f1, f2)
        self.evaluations = 1

    @property
    def covered(self) -> int:
        return self.pop.front_count

    @property
    def is_covering(self) -> bool:
        return self.pop.front_count == self.kernels.front_size


def init_state(bspec: BenchmarkSpec, alg: AlgorithmSpec, seed: int,
               interior_init: bool = False,
               slot_count_offset: int = 0) -> RunState:
    """Fresh run state: seeded generator plus one evaluated individual."""
    return RunState(bspec, alg, random.Random(seed),
                    slot_count_offset=slot_count_offset,
                    interior_init=interior_init)


def step(state: RunState) -> RunState:
    """One full iteration: select, mutate, evaluate, update, t += 1.

    Under slot selection an empty draw is an idle iteration that leaves
    everything but the iteration counter unchanged. Every created
    offspring is evaluated exactly once, dominated or not.
    """
    rng = state.rng
    pop = state.pop
    getrandbits = rng.getrandbits
    if state.alg.selection is Selection.SLOT_PARENT:
        parent = pop.member_at_slot(_randbelow(getrandbits,
                                               state.slot_draw_count))
        if parent is None:
            state.t += 1
            return state
    else:
        parent = pop.xs[_randbelow(getrandbits, len(pop.xs))]
    if state.alg.mutation is Mutation.ONE_BIT:
        y = parent ^ (1 << _randbelow(getrandbits, state.n))
    else:
        y = parent ^ standard_flip_mask(state.n, state.flip_cdf, rng)
    f1, f2 = state.kernels.evaluate(y)
    state.evaluations += 1
    pop.insert(y, f1, f2)
    state.t += 1
    return state


def measure(state: RunState, record_slots: bool = False) -> TrajectoryRecord:
    """Snapshot of the tracked processes, computed in one population pass."""
    pop = state.pop
    kern = state.kernels
    span = kern.slot_span
    d_pf = min(min(s, span - s) for s in pop.slots)
    if state.bspec.kind is Kind.COCZ:
        half = state.n // 2
        best, z = -1, 0
        for f1, f2 in zip(pop.f1s, pop.f2s):
            g1 = (f1 + f2 - half) >> 1
            if g1 > best:
                best, z = g1, 1
            elif g1 == best:
                z += 1
        max_g1: Optional[int] = best
        z_count: Optional[int] = z
    else:
        max_g1 = None
        z_count = None
    occupancy = None
    if record_slots:
        occupancy = 0
        for s in pop.slots:
            occupancy |= 1 << s
    covered = pop.front_count
    return TrajectoryRecord(t=state.t, pop_size=len(pop), max_g1=max_g1,
                            z_count=z_count, d_pf=d_pf, covered=covered,
                            front_covered=covered / kern.front_size,
                            slot_occupancy=occupancy)


def default_sample_period(n: int) -> int:
    """Trajectory sampling stride: every ceil(n^2/200) iterations."""
    return max(1, math.ceil(n * n / 200))


def run_until_cover(bspec: BenchmarkSpec, alg: AlgorithmSpec, seed: int, *,
                    interior_init: bool = False,
                    record_trajectory: bool = True,
                    sample_every: Optional[int] = None,
                    sample_at: tuple[int, ...] = (),
                    record_slots: bool = False,
                    slot_count_offset: int = 0) -> TrialResult:
    """Run one trial until the population covers the Pareto front or the
    iteration cutoff is reached (a censored trial, flagged, not an error).

    Trajectory records are taken at t=0, every ``sample_every`` iterations
    (default ceil(n^2/200)), whenever the covered-front count changes, at
    every iteration listed in ``sample_at``, and at termination.
    """
    state = init_state(bspec, alg, seed, interior_init=interior_init,
                       slot_count_offset=slot_count_offset)
    max_iters = alg.max_iterations
    if max_iters is None:
        max_iters = default_max_iterations(bspec)
    period = sample_every if sample_every else default_sample_period(bspec.n)
    forced = sorted(set(int(s) for s in sample_at))
    forced_pos = 0
    n_forced = len(forced)
    while forced_pos < n_forced and forced[forced_pos] < 1:
        forced_pos += 1  # t=0 is always recorded
    next_forced = forced[forced_pos] if forced_pos < n_forced else -1

    records: list[TrajectoryRecord] = []
    if record_trajectory:
        records.append(measure(state, record_slots))
    last_recorded = 0

    # hot loop: everything below is bound to locals on purpose, and index
    # draws inline the same getrandbits rejection scheme as _randbelow
    rng = state.rng
    pop = state.pop
    xs = pop.xs
    insert = pop.insert
    member_at_slot = pop._by_slot.get
    evaluate = state.kernels.evaluate
    getrandbits = rng.getrandbits
    random_f = rng.random
    n = state.n
    nbits = (n - 1).bit_length()
    cdf = state.flip_cdf
    one_bit = alg.mutation is Mutation.ONE_BIT
    slot_sel = alg.selection is Selection.SLOT_PARENT
    slot_draw = state.slot_draw_count
    sbits = (slot_draw - 1).bit_length()
    front_size = state.kernels.front_size
    front_count = pop.front_count
    evaluations = state.evaluations
    t = 0
    covered_t = -1
    covered_evals = -1
    if front_count == front_size:
        covered_t, covered_evals = 0, evaluations

    while covered_t < 0 and t < max_iters:
        if slot_sel:
            s = getrandbits(sbits)
            while s >= slot_draw:
                s = getrandbits(sbits)
            parent = member_at_slot(s)
            if parent is None:
                t += 1
                if record_trajectory and (t % period == 0 or t == next_forced):
                    state.t = t
                    records.append(measure(state, record_slots))
                    last_recorded = t
                    if t == next_forced:
                        forced_pos += 1
                        next_forced = (forced[forced_pos]
                                       if forced_pos < n_forced else -1)
                continue
        else:
            m = len(xs)
            r = getrandbits((m - 1).bit_length())
            while r >= m:
                r = getrandbits((m - 1).bit_length())
            parent = xs[r]
        if one_bit:
            pos = getrandbits(nbits)
            while pos >= n:
                pos = getrandbits(nbits)
            y = parent ^ (1 << pos)
        else:
            u = random_f()
            k = 0
            while u > cdf[k]:
                k += 1
            if k == 0:
                y = parent
            elif k == 1:
                pos = getrandbits(nbits)
                while pos >= n:
                    pos = getrandbits(nbits)
                y = parent ^ (1 << pos)
            else:
                mask = 0
                left = k
                while left:
                    pos = getrandbits(nbits)
                    while pos >= n:
                        pos = getrandbits(nbits)
                    b = 1 << pos
                    if not mask & b:
                        mask |= b
                        left -= 1
                y = parent ^ mask
        f1, f2 = evaluate(y)
        evaluations += 1
        insert(y, f1, f2)
        t += 1
        new_front = pop.front_count
        if new_front == front_size:
            covered_t, covered_evals = t, evaluations
        if record_trajectory and (new_front != front_count
                                  or t % period == 0 or t == next_forced):
            state.t = t
            state.evaluations = evaluations
            records.append(measure(state, record_slots))
            last_recorded = t
            if t == next_forced:
                forced_pos += 1
                next_forced = (forced[forced_pos]
                               if forced_pos < n_forced else -1)
        front_count = new_front

    state.t = t
    state.evaluations = evaluations
    censored = covered_t < 0
    if record_trajectory and last_recorded != t:
        records.append(measure(state, record_slots))
    final = measure(state, record_slots)
    return TrialResult(
        benchmark=bspec.kind.value,
        n=bspec.n,
        k=bspec.k,
        algorithm=alg.algorithm_name,
        variant=alg.variant_name,
        seed=seed,
        runtime_evals=evaluations if censored else covered_evals,
        runtime_iters=t if censored else covered_t,
        censored=censored,
        final_pop_size=final.pop_size,
        final_covered=final.covered,
        final_front_covered=final.front_covered,
        interior_init=interior_init,
        trajectory=tuple(records),
    )


def run_offspring_budget(bspec: BenchmarkSpec, alg: AlgorithmSpec, seed: int,
                         offspring_target: int,
                         max_iterations: Optional[int] = None,
                         interior_init: bool = False,
                         slot_count_offset: int = 0) -> RunState:
    """Step until exactly ``offspring_target`` offspring were created.

    Idle iterations do not count toward the target, so for the modified
    variants this runs a variable number of iterations. Used by the
    modified-vs-original equivalence harness.
    """
    state = init_state(bspec, alg, seed, interior_init=interior_init,
                       slot_count_offset=slot_count_offset)
    cap = max_iterations if max_iterations is not None else (
        1000 * (offspring_target + 1) * state.slot_draw_count)
    slot_sel = alg.selection is Selection.SLOT_PARENT
    while state.evaluations - 1 < offspring_target:
        if slot_sel and all(s >= state.slot_draw_count
                            for s in state.pop.slots):
            # possible only under a broken slot_count_offset: no member is
            # reachable by any slot draw, so the run would idle forever
            raise RuntimeError(
                "selection deadlocked: every member sits outside the slot "
                "draw range")
        if state.t >= cap:
            raise RuntimeError(
                f"offspring budget not reached within {cap} iterations")
        step(state)
    return state
