"""Mutation operators, parent selection, the iteration step, and full runs."""

import itertools
import math
import random

import numpy as np
import pytest
from scipy import stats

from semolab.benchmarks import BenchmarkSpec, Kind
from semolab.core import Individual, Population
from semolab.engine import (AlgorithmSpec, Mutation, Selection, _flip_count_cdf,
                            default_sample_period, init_state, measure,
                            mutate_one_bit, mutate_standard,
                            run_offspring_budget, run_until_cover,
                            select_parent_slot, select_parent_uniform, step)


class ScriptedRng:
    """Deterministic stand-in replaying scripted draws."""

    def __init__(self, bits=(), uniforms=()):
        self._bits = list(bits)
        self._uniforms = list(uniforms)

    def getrandbits(self, k):
        value = self._bits.pop(0)
        assert value < (1 << k) if k else value == 0
        return value

    def random(self):
        return self._uniforms.pop(0)


class TestMutateOneBit:
    def test_hamming_distance_exactly_one(self):
        rng = random.Random(3)
        x = Individual.from_string("1100101011")
        for _ in range(200):
            y = mutate_one_bit(x, rng)
            assert (x.bits ^ y.bits).bit_count() == 1

    def test_forced_flip_at_n1(self):
        rng = random.Random(0)
        assert mutate_one_bit(Individual(1, 0), rng).bits == 1
        assert mutate_one_bit(Individual(1, 1), rng).bits == 0

    def test_flip_position_uniform(self):
        rng = random.Random(12345)
        n, trials = 10, 100_000
        x = Individual.all_zeros(n)
        counts = [0] * n
        for _ in range(trials):
            y = mutate_one_bit(x, rng)
            counts[(y.bits).bit_length() - 1] += 1
        _, p = stats.chisquare(counts)
        assert p > 0.01


class TestMutateStandard:
    def test_flip_count_cdf_matches_scipy(self):
        for n in (2, 10, 50):
            ours = _flip_count_cdf(n)
            reference = stats.binom.cdf(np.arange(n + 1), n, 1.0 / n)
            assert np.allclose(ours, reference, atol=1e-12)

    def test_no_change_probability(self):
        rng = random.Random(99)
        n, trials = 10, 100_000
        x = Individual.from_string("1010101010")
        unchanged = 0
        full_flips = 0
        for _ in range(trials):
            y = mutate_standard(x, rng)
            if y.bits == x.bits:
                unchanged += 1
            if (y.bits ^ x.bits).bit_count() == n:
                full_flips += 1
        expected = (1 - 1 / n) ** n
        assert abs(unchanged / trials - expected) < 0.01
        assert full_flips == 0  # probability n^-n, unobservable here

    def test_expected_flip_count(self):
        rng = random.Random(7)
        n, trials = 50, 100_000
        x = Individual.all_zeros(n)
        total = sum((mutate_standard(x, rng).bits ^ x.bits).bit_count()
                    for _ in range(trials))
        assert abs(total / trials - 1.0) < 0.02

    def test_zero_flips_allowed(self):
        rng = random.Random(4)
        x = Individual.from_string("1111")
        seen_same = any(mutate_standard(x, rng).bits == x.bits
                        for _ in range(200))
        assert seen_same


def cocz_pop(n, members):
    """Population for cocz at size n from (bits) ints."""
    kern = BenchmarkSpec(Kind.COCZ, n).kernels()
    pop = Population(kern.slot_count, kern.slot_from_pair, kern.is_front_pair)
    for bits in members:
        f1, f2 = kern.evaluate(bits)
        pop.insert(bits, f1, f2)
    return pop


class TestSelection:
    def test_uniform_singleton(self):
        pop = cocz_pop(8, [0b00001111])
        rng = random.Random(0)
        assert all(select_parent_uniform(pop, rng) == 0b00001111
                   for _ in range(20))

    def test_uniform_frequencies(self):
        # four incomparable members with different objective values;
        # selection must ignore fitness entirely
        pop = cocz_pop(8, [0b00001111, 0b00011111, 0b00111111, 0b01111111])
        assert len(pop) == 4
        rng = random.Random(21)
        counts = {bits: 0 for bits, _, _ in pop.members()}
        trials = 100_000
        for _ in range(trials):
            counts[select_parent_uniform(pop, rng)] += 1
        for c in counts.values():
            assert abs(c / trials - 0.25) < 0.02

    def test_empty_population_rejected(self):
        kern = BenchmarkSpec(Kind.COCZ, 8).kernels()
        pop = Population(kern.slot_count, kern.slot_from_pair)
        with pytest.raises(ValueError):
            select_parent_uniform(pop, random.Random(0))
        with pytest.raises(ValueError):
            select_parent_slot(pop, random.Random(0))

    def test_slot_full_occupancy_never_idles(self):
        # all five g2 slots filled with Pareto-optimal members at n=8
        members = [0b00001111 | (((1 << j) - 1) << 4) for j in range(5)]
        pop = cocz_pop(8, members)
        assert len(pop) == 5
        rng = random.Random(5)
        counts = {}
        trials = 50_000
        for _ in range(trials):
            got = select_parent_slot(pop, rng)
            assert got is not None
            counts[got] = counts.get(got, 0) + 1
        for c in counts.values():
            assert abs(c / trials - 0.2) < 0.02

    def test_slot_idle_probability_single_member(self):
        pop = cocz_pop(8, [0b00001111])
        rng = random.Random(9)
        trials = 20_000
        idles = sum(select_parent_slot(pop, rng) is None for _ in range(trials))
        assert abs(idles / trials - 4 / 5) < 0.02

    def test_slot_conditional_matches_uniform(self):
        # occupied slots biject onto members, so conditioned on selecting
        # anyone the draw is uniform over members
        pop = cocz_pop(8, [0b00001111, 0b00111111, 0b11111111])
        rng = random.Random(31)
        counts = {bits: 0 for bits, _, _ in pop.members()}
        selected = 0
        for _ in range(60_000):
            got = select_parent_slot(pop, rng)
            if got is not None:
                counts[got] += 1
                selected += 1
        for c in counts.values():
            assert abs(c / selected - 1 / 3) < 0.02


class TestStep:
    def setup_state(self, alg, scripted):
        # the scripted source also drives initialization: first draw is
        # the initial individual's bits
        from semolab.engine import RunState
        return RunState(BenchmarkSpec(Kind.COCZ, 8), alg, scripted)

    def test_idle_advances_only_t(self):
        # init individual 0b00001011 sits in slot g2=0; draw empty slot 4
        alg = AlgorithmSpec.gsemo(modified=True)
        state = self.setup_state(alg, ScriptedRng(bits=[0b00001011, 4]))
        before = list(state.pop.members())
        step(state)
        assert state.t == 1
        assert state.evaluations == 1
        assert list(state.pop.members()) == before

    def test_dominated_offspring_rejected_but_evaluated(self):
        # semo: select the only member, flip a first-half one -> dominated
        alg = AlgorithmSpec.semo()
        rng = ScriptedRng(bits=[0b00001011, 0, 0])
        state = self.setup_state(alg, rng)
        step(state)
        assert state.t == 1
        assert state.evaluations == 2
        assert state.pop.xs == [0b00001011]

    def test_equal_value_offspring_replaces_member(self):
        # standard mutation flipping one first-half zero and one first-half
        # one keeps the objective value but changes the bits
        alg = AlgorithmSpec.gsemo()
        rng = ScriptedRng(bits=[0b00001011, 0, 2, 0], uniforms=[0.8])
        state = self.setup_state(alg, rng)
        cdf = _flip_count_cdf(8)
        assert cdf[1] < 0.8 <= cdf[2]  # scripted uniform selects two flips
        step(state)
        assert state.evaluations == 2
        assert state.pop.xs == [0b00001011 ^ 0b101]
        assert len(state.pop) == 1

    def test_incomparable_offspring_joins(self):
        # flip a second-half zero: g2 rises, objective becomes incomparable
        alg = AlgorithmSpec.semo()
        rng = ScriptedRng(bits=[0b00001011, 0, 4])
        state = self.setup_state(alg, rng)
        step(state)
        assert len(state.pop) == 2
        assert state.evaluations == 2


class TestMeasure:
    def test_singleton(self):
        spec = BenchmarkSpec(Kind.COCZ, 8)
        state = init_state(spec, AlgorithmSpec.gsemo(), seed=0)
        kern = spec.kernels()
        state.pop = Population(kern.slot_count, kern.slot_from_pair,
                               kern.is_front_pair)
        bits = 0b01101011  # g1 = 3, g2 = 2
        state.pop.insert(bits, *kern.evaluate(bits))
        rec = measure(state)
        assert rec.pop_size == 1
        assert rec.max_g1 == 3 and rec.z_count == 1
        assert rec.d_pf == 2  # min(g2, n/2 - g2)
        assert rec.covered == 0 and rec.front_covered == 0.0

    def test_two_front_members(self):
        # population {1^4 0^4, 1^8} at n=8: both Pareto-optimal, d_pf = 0,
        # two of the five front values covered
        spec = BenchmarkSpec(Kind.COCZ, 8)
        state = init_state(spec, AlgorithmSpec.gsemo(), seed=0)
        kern = spec.kernels()
        state.pop = Population(kern.slot_count, kern.slot_from_pair,
                               kern.is_front_pair)
        for bits in (0b00001111, 0b11111111):
            state.pop.insert(bits, *kern.evaluate(bits))
        rec = measure(state)
        assert rec.pop_size == 2
        assert rec.max_g1 == 4
        assert rec.z_count == 2
        assert rec.d_pf == 0
        assert rec.covered == 2
        assert rec.front_covered == pytest.approx(2 / 5)

    def test_full_front(self):
        members = [0b00001111 | (((1 << j) - 1) << 4) for j in range(5)]
        spec = BenchmarkSpec(Kind.COCZ, 8)
        state = init_state(spec, AlgorithmSpec.gsemo(), seed=0)
        kern = spec.kernels()
        state.pop = Population(kern.slot_count, kern.slot_from_pair,
                               kern.is_front_pair)
        for bits in members:
            state.pop.insert(bits, *kern.evaluate(bits))
        rec = measure(state, record_slots=True)
        assert rec.d_pf == 0
        assert rec.front_covered == 1.0
        assert rec.slot_occupancy == 0b11111

    def test_non_cocz_has_no_g1_fields(self):
        state = init_state(BenchmarkSpec(Kind.OMM, 8), AlgorithmSpec.gsemo(),
                           seed=1)
        rec = measure(state)
        assert rec.max_g1 is None and rec.z_count is None


class TestRunUntilCover:
    def test_deterministic(self):
        spec = BenchmarkSpec(Kind.COCZ, 16)
        alg = AlgorithmSpec.gsemo()
        a = run_until_cover(spec, alg, seed=42)
        b = run_until_cover(spec, alg, seed=42)
        assert a == b
        assert repr(a) == repr(b)

    def test_runtime_equals_iterations_plus_one_for_original(self):
        for kind, n, k in [(Kind.COCZ, 10, None), (Kind.OMM, 9, None),
                           (Kind.OJZJ, 10, 2)]:
            spec = BenchmarkSpec(kind, n, k)
            for seed in range(5):
                r = run_until_cover(spec, AlgorithmSpec.gsemo(), seed)
                assert not r.censored
                assert r.runtime_evals == r.runtime_iters + 1

    def test_modified_evaluations_bounded_by_iterations(self):
        spec = BenchmarkSpec(Kind.COCZ, 12)
        r = run_until_cover(spec, AlgorithmSpec.gsemo(modified=True), seed=3)
        assert r.runtime_evals <= r.runtime_iters + 1

    def test_omm_n2_needs_three_evaluations(self):
        spec = BenchmarkSpec(Kind.OMM, 2)
        for seed in range(30):
            r = run_until_cover(spec, AlgorithmSpec.semo(), seed)
            assert not r.censored
            assert r.runtime_evals >= 3

    def test_semo_ojzj_interior_never_covers(self):
        spec = BenchmarkSpec(Kind.OJZJ, 12, 2)
        alg = AlgorithmSpec.semo(max_iterations=30_000)
        r = run_until_cover(spec, alg, seed=8, interior_init=True)
        assert r.censored
        assert r.final_covered == spec.front_size - 2
        assert r.runtime_iters == 30_000

    def test_gsemo_ojzj_covers(self):
        spec = BenchmarkSpec(Kind.OJZJ, 12, 2)
        r = run_until_cover(spec, AlgorithmSpec.gsemo(), seed=8,
                            interior_init=True)
        assert not r.censored

    def test_interior_init_rejected_off_ojzj(self):
        with pytest.raises(ValueError):
            run_until_cover(BenchmarkSpec(Kind.COCZ, 8), AlgorithmSpec.gsemo(),
                            seed=0, interior_init=True)

    def test_trajectory_structure(self):
        spec = BenchmarkSpec(Kind.COCZ, 8)
        r = run_until_cover(spec, AlgorithmSpec.gsemo(), seed=5,
                            sample_at=(7,))
        ts = [rec.t for rec in r.trajectory]
        assert ts[0] == 0
        assert ts == sorted(ts)
        assert len(ts) == len(set(ts))
        assert ts[-1] == r.runtime_iters
        assert 7 in ts  # forced checkpoint
        covered_seen = {rec.covered for rec in r.trajectory}
        first = r.trajectory[0].covered
        # coverage increments one front value at a time and each change is
        # sampled, so every level from the initial one up is present
        assert set(range(first, spec.front_size + 1)) <= covered_seen
        assert r.trajectory[-1].front_covered == 1.0

    def test_sampling_period_default(self):
        assert default_sample_period(2) == 1
        assert default_sample_period(256) == math.ceil(256 * 256 / 200)

    def test_censoring_at_cutoff(self):
        spec = BenchmarkSpec(Kind.COCZ, 32)
        r = run_until_cover(spec, AlgorithmSpec.gsemo(max_iterations=10), seed=0)
        assert r.censored and r.runtime_iters == 10

    def test_cover_time_sane_for_tiny_omm(self):
        spec = BenchmarkSpec(Kind.OMM, 6)
        runtimes = [run_until_cover(spec, AlgorithmSpec.gsemo(), seed=s).runtime_evals
                    for s in range(20)]
        assert all(r >= spec.front_size for r in runtimes)


class TestStepLoopEquivalence:
    @pytest.mark.parametrize("kind,n,k", [(Kind.COCZ, 8, None),
                                          (Kind.OMM, 9, None),
                                          (Kind.OJZJ, 10, 2)])
    def test_loop_matches_repeated_step(self, kind, n, k):
        spec = BenchmarkSpec(kind, n, k)
        cutoff = 3000
        for alg_name, variant in itertools.product(("semo", "gsemo"),
                                                   ("original", "modified")):
            if kind is Kind.OJZJ and alg_name == "semo":
                continue  # may never cover; covered separately below
            alg = AlgorithmSpec.from_names(alg_name, variant, cutoff)
            for seed in range(3):
                res = run_until_cover(spec, alg, seed, record_trajectory=False)
                state = init_state(spec, alg, seed)
                while not state.is_covering and state.t < cutoff:
                    step(state)
                assert res.runtime_iters == state.t
                assert res.runtime_evals == state.evaluations
                assert res.censored == (not state.is_covering)
                final = measure(state)
                assert final.pop_size == res.final_pop_size
                assert final.covered == res.final_covered

    def test_loop_matches_step_censored_semo(self):
        spec = BenchmarkSpec(Kind.OJZJ, 10, 2)
        alg = AlgorithmSpec.semo(max_iterations=800)
        for seed in range(3):
            res = run_until_cover(spec, alg, seed, interior_init=True,
                                  record_trajectory=False)
            state = init_state(spec, alg, seed, interior_init=True)
            while not state.is_covering and state.t < 800:
                step(state)
            assert res.runtime_evals == state.evaluations
            assert res.censored


class TestProcessLaws:
    def test_max_g1_monotone_and_z_reset(self):
        spec = BenchmarkSpec(Kind.COCZ, 12)
        for alg in (AlgorithmSpec.gsemo(), AlgorithmSpec.gsemo(modified=True)):
            for seed in range(3):
                state = init_state(spec, alg, seed)
                prev = measure(state)
                for _ in range(1500):
                    step(state)
                    cur = measure(state)
                    assert cur.max_g1 >= prev.max_g1
                    if cur.max_g1 > prev.max_g1:
                        assert cur.z_count == 1
                    else:
                        assert cur.z_count >= prev.z_count
                    prev = cur
                    if state.is_covering:
                        break

    def test_run_offspring_budget(self):
        spec = BenchmarkSpec(Kind.COCZ, 8)
        state = run_offspring_budget(spec, AlgorithmSpec.gsemo(), 3, 25)
        assert state.evaluations == 26
        assert state.t == 25  # uniform selection never idles
        state = run_offspring_budget(spec, AlgorithmSpec.gsemo(modified=True),
                                     3, 25)
        assert state.evaluations == 26
        assert state.t >= 25


class TestAlgorithmSpec:
    def test_names(self):
        assert AlgorithmSpec.semo().algorithm_name == "semo"
        assert AlgorithmSpec.gsemo().variant_name == "original"
        assert AlgorithmSpec.gsemo(modified=True).variant_name == "modified"
        alg = AlgorithmSpec.from_names("semo", "modified", 10)
        assert alg.mutation is Mutation.ONE_BIT
        assert alg.selection is Selection.SLOT_PARENT
        assert alg.max_iterations == 10

    def test_unknown_names(self):
        with pytest.raises(ValueError):
            AlgorithmSpec.from_names("nsga2", "original")
        with pytest.raises(ValueError):
            AlgorithmSpec.from_names("semo", "fancy")
