import numpy as np
import pytest

from ommatch import (
    CombinerMatcher,
    GreedyMatcher,
    Instance,
    MetricSpace,
    NetCostMatcher,
    ParsimoniousMatcher,
    PerfectOracle,
    SkipInstance,
    ratio,
    rescale_for_combination,
    run,
)

from conftest import random_instance


def scaled_random(rng, n_servers=6, kind=None):
    """Random instance rescaled to offline optimum exactly 1."""
    while True:
        inst = random_instance(rng, n_servers=n_servers, kind=kind)
        if inst.opt_ref.cost > 0:
            scaled, _ = rescale_for_combination(inst)
            return scaled


class TestRescale:
    def test_factor_is_reciprocal_opt(self):
        space = MetricSpace(kind="line", points=(0.0, 10.0, 1.0, 7.0))
        inst = Instance(space=space, servers=(0, 1), requests=(2, 3))
        assert inst.opt_ref.cost == pytest.approx(4.0)
        scaled, factor = rescale_for_combination(inst)
        assert factor == pytest.approx(0.25)
        assert scaled.opt_ref.cost == pytest.approx(1.0)
        assert scaled.servers == inst.servers

    def test_unit_opt_unchanged(self):
        space = MetricSpace(kind="line", points=(0.0, 5.0, 1.0, 5.0))
        inst = Instance(space=space, servers=(0, 1), requests=(2, 3))
        scaled, factor = rescale_for_combination(inst)
        assert factor == 1.0
        assert scaled.space.distance(0, 2) == inst.space.distance(0, 2)

    def test_zero_opt_skipped(self):
        space = MetricSpace(kind="line", points=(0.0, 1.0))
        inst = Instance(space=space, servers=(0, 1), requests=(0, 1))
        with pytest.raises(SkipInstance):
            rescale_for_combination(inst)

    def test_ratio_invariant_under_rescale(self):
        rng = np.random.default_rng(227)
        for _ in range(20):
            inst = random_instance(rng, n_servers=6)
            if inst.opt_ref.cost <= 0:
                continue
            scaled, _ = rescale_for_combination(inst)
            r0 = ratio(run(GreedyMatcher(), inst))
            r1 = ratio(run(GreedyMatcher(), scaled))
            assert r0 == pytest.approx(r1, rel=1e-9)


class TestCombiner:
    def test_identical_subalgorithms_copy_through(self):
        rng = np.random.default_rng(229)
        for _ in range(20):
            inst = scaled_random(rng)
            comb = CombinerMatcher(GreedyMatcher, GreedyMatcher)
            got = run(comb, inst)
            want = run(GreedyMatcher(), inst)
            assert got.assignments == want.assignments

    def test_single_phase_follows_a_exactly(self):
        space = MetricSpace(kind="line", points=(0.0, 10.0, 0.5, 9.5))
        inst = Instance(space=space, servers=(0, 1), requests=(2, 3))
        scaled, _ = rescale_for_combination(inst)
        comb = CombinerMatcher(GreedyMatcher, lambda: NetCostMatcher(gamma=1.0))
        got = run(comb, scaled)
        want = run(GreedyMatcher(), scaled)
        assert comb.cost_a <= 2.0
        assert comb.phase == 1
        assert got.assignments == want.assignments

    def test_all_slots_used_once(self):
        rng = np.random.default_rng(233)
        for _ in range(10):
            inst = scaled_random(rng, n_servers=8)
            comb = CombinerMatcher(GreedyMatcher, lambda: NetCostMatcher(gamma=1.0))
            transcript = run(comb, inst)
            assert sorted(s for _, s, _ in transcript.assignments) == list(range(8))

    def test_exchange_identity(self):
        # each round's exchange edge equals the drop in set distance between
        # the combiner's matched servers and the followed algorithm's
        rng = np.random.default_rng(239)
        for _ in range(15):
            inst = scaled_random(rng, n_servers=int(rng.integers(3, 9)))
            comb = CombinerMatcher(
                GreedyMatcher, lambda: NetCostMatcher(gamma=1.0), record_exchange=True
            )
            run(comb, inst)
            for entry in comb.exchange_log:
                drop = entry["dist_before"] - entry["dist_after"]
                assert entry["edge"] == pytest.approx(drop, abs=1e-9)

    def test_exchange_identity_with_predictions(self):
        rng = np.random.default_rng(241)
        for _ in range(10):
            inst = scaled_random(rng, n_servers=int(rng.integers(3, 8)))
            comb = CombinerMatcher(
                lambda: ParsimoniousMatcher(k=2, oracle=PerfectOracle(inst)),
                lambda: NetCostMatcher(gamma=1.0),
                record_exchange=True,
            )
            run(comb, inst)
            for entry in comb.exchange_log:
                drop = entry["dist_before"] - entry["dist_after"]
                assert entry["edge"] == pytest.approx(drop, abs=1e-9)

    @pytest.mark.parametrize(
        "pair",
        [
            ("ours", "comp"),
            ("ours", "greedy"),
            ("greedy", "comp"),
        ],
    )
    def test_nine_times_minimum_bound(self, pair):
        rng = np.random.default_rng(251)
        for _ in range(25):
            inst = scaled_random(rng, n_servers=int(rng.integers(2, 9)))

            def make(which):
                if which == "ours":
                    return lambda: ParsimoniousMatcher(k=3, oracle=PerfectOracle(inst))
                if which == "comp":
                    return lambda: NetCostMatcher(gamma=1.0)
                return GreedyMatcher

            comb = CombinerMatcher(make(pair[0]), make(pair[1]))
            transcript = run(comb, inst)
            best = min(comb.cost_a, comb.cost_b)
            assert best >= 1.0 - 1e-9  # opt is 1 after rescaling
            assert transcript.total_cost <= 9.0 * best + 1e-9

    def test_follows_cheaper_algorithm_eventually(self):
        # chase sequence: greedy is pulled to the wrong server, the
        # prediction follower pays the optimum
        space = MetricSpace(kind="line", points=(0.0, 1.0, 0.6, 1.0))
        inst = Instance(space=space, servers=(0, 1), requests=(2, 3))
        scaled, _ = rescale_for_combination(inst)
        comb = CombinerMatcher(
            GreedyMatcher,
            lambda: ParsimoniousMatcher(k=1, oracle=PerfectOracle(scaled)),
        )
        transcript = run(comb, scaled)
        best = min(comb.cost_a, comb.cost_b)
        assert comb.cost_a > comb.cost_b  # greedy loses here
        assert comb.cost_b == pytest.approx(1.0)
        assert transcript.total_cost <= 9.0 * best + 1e-9
