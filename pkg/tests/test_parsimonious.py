import numpy as np
import pytest

from ommatch import (
    FtpMatcher,
    Instance,
    MetricSpace,
    NoisyOracle,
    ParsimoniousMatcher,
    PerfectOracle,
    UsageError,
    hst_space,
    preset,
    run,
    star_hst,
)

from conftest import random_instance


def four_server_instance() -> Instance:
    space = MetricSpace(
        kind="line", points=(0.0, 4.0, 10.0, 14.0, 1.0, 5.0, 11.0, 13.0)
    )
    return Instance(space=space, servers=(0, 1, 2, 3), requests=(4, 5, 6, 7))


class TestConstruction:
    def test_k_must_be_positive(self):
        inst = four_server_instance()
        with pytest.raises(UsageError):
            ParsimoniousMatcher(k=0, oracle=PerfectOracle(inst))

    def test_unknown_preset(self):
        inst = four_server_instance()
        with pytest.raises(UsageError):
            ParsimoniousMatcher(k=1, oracle=PerfectOracle(inst), preset_name="nope")

    def test_preset_names(self):
        inst = four_server_instance()
        assert preset("det-general", 2, PerfectOracle(inst)).name == "ours"
        assert preset("line", 2, PerfectOracle(inst)).name == "ours[line]"


class TestQuerySchedule:
    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_query_rounds(self, k):
        inst = four_server_instance()
        transcript = run(ParsimoniousMatcher(k=k, oracle=PerfectOracle(inst)), inst)
        assert transcript.query_rounds == tuple(range(k, 5, k))

    def test_k_above_n_never_queries(self):
        inst = four_server_instance()
        transcript = run(ParsimoniousMatcher(k=9, oracle=PerfectOracle(inst)), inst)
        assert transcript.query_rounds == ()
        assert transcript.eta() == 0.0

    def test_k_one_equals_follow_the_prediction(self):
        rng = np.random.default_rng(163)
        for _ in range(20):
            inst = random_instance(rng, n_servers=int(rng.integers(2, 9)))
            ours = run(ParsimoniousMatcher(k=1, oracle=PerfectOracle(inst)), inst)
            ftp = run(FtpMatcher(PerfectOracle(inst)), inst)
            assert ours.assignments == ftp.assignments

    def test_k_one_equals_ftp_with_noise(self):
        rng = np.random.default_rng(167)
        for _ in range(10):
            inst = random_instance(rng, n_servers=6)
            radius = float(np.median(inst.space.pairwise()))
            seed = int(rng.integers(1 << 20))
            ours = run(
                ParsimoniousMatcher(k=1, oracle=NoisyOracle(inst, radius, seed=seed)),
                inst,
            )
            ftp = run(FtpMatcher(NoisyOracle(inst, radius, seed=seed)), inst)
            assert ours.assignments == ftp.assignments


class TestVirtualPredictions:
    def test_example_cost(self):
        inst = four_server_instance()
        transcript = run(ParsimoniousMatcher(k=2, oracle=PerfectOracle(inst)), inst)
        assert transcript.total_cost == pytest.approx(4.0)
        assert transcript.opt_cost == pytest.approx(4.0)

    def test_prediction_sizes_and_nesting_within_phase(self):
        rng = np.random.default_rng(173)
        for k in (2, 3, 5):
            inst = random_instance(rng, n_servers=10)
            matcher = ParsimoniousMatcher(k=k, oracle=PerfectOracle(inst))
            transcript = run(matcher, inst)
            assert len(matcher.predictions) == 10
            for t, pred in enumerate(matcher.predictions, start=1):
                assert len(pred) == t
            # between queries each prediction extends the previous one
            for t in range(2, 11):
                if t % k != 0:
                    assert matcher.predictions[t - 2] <= matcher.predictions[t - 1]
            assert transcript.total_cost <= sum(matcher.mu1_costs) + 1e-9

    def test_virtual_prediction_rejected_on_query_round(self):
        inst = four_server_instance()
        matcher = ParsimoniousMatcher(k=2, oracle=PerfectOracle(inst))
        matcher.init(inst.space, inst.servers, np.random.SeedSequence(0))
        matcher.serve(inst.requests[0])
        matcher.serve(inst.requests[1])
        with pytest.raises(UsageError):
            matcher.virtual_prediction(2)

    def test_perfect_oracle_k1_reaches_opt(self):
        rng = np.random.default_rng(179)
        for _ in range(20):
            inst = random_instance(rng, n_servers=int(rng.integers(2, 9)))
            transcript = run(ParsimoniousMatcher(k=1, oracle=PerfectOracle(inst)), inst)
            assert transcript.total_cost == pytest.approx(transcript.opt_cost, abs=1e-9)

    def test_cost_bound_with_perfect_oracle(self):
        # cost <= (2k - 1) * opt when the oracle is exact
        rng = np.random.default_rng(181)
        for _ in range(25):
            n = int(rng.integers(2, 11))
            inst = random_instance(rng, n_servers=n)
            k = int(rng.integers(1, n + 1))
            transcript = run(ParsimoniousMatcher(k=k, oracle=PerfectOracle(inst)), inst)
            bound = (2 * k - 1) * transcript.opt_cost
            assert transcript.total_cost <= bound + 1e-9

    def test_cost_bound_with_noisy_oracle(self):
        # cost <= (2k - 1) * opt + 2k * eta(queried rounds)
        rng = np.random.default_rng(191)
        for _ in range(25):
            n = int(rng.integers(2, 10))
            inst = random_instance(rng, n_servers=n)
            k = int(rng.integers(1, n + 1))
            radius = float(np.median(inst.space.pairwise()))
            oracle = NoisyOracle(inst, radius, seed=int(rng.integers(1 << 20)))
            transcript = run(ParsimoniousMatcher(k=k, oracle=oracle), inst)
            bound = (2 * k - 1) * transcript.opt_cost + 2 * k * transcript.eta()
            assert transcript.total_cost <= bound + 1e-9


class TestPresets:
    def test_line_preset_requires_line(self):
        rng = np.random.default_rng(193)
        inst = random_instance(rng, n_servers=4, kind="plane")
        matcher = preset("line", 2, PerfectOracle(inst))
        with pytest.raises(UsageError):
            run(matcher, inst)

    def test_line_preset_runs_on_line(self):
        rng = np.random.default_rng(197)
        inst = random_instance(rng, n_servers=6, kind="line")
        transcript = run(preset("line", 2, PerfectOracle(inst)), inst)
        assert transcript.total_cost <= 3 * transcript.opt_cost + 1e-9

    def test_hst_preset_requires_hst(self):
        rng = np.random.default_rng(199)
        inst = random_instance(rng, n_servers=4, kind="line")
        with pytest.raises(UsageError):
            run(preset("hst-2", 2, PerfectOracle(inst)), inst)

    def test_hst_preset_runs_on_tree(self):
        space = hst_space(star_hst(6))
        inst = Instance(space=space, servers=(0, 1, 2, 3, 4, 5), requests=(0, 0, 1, 1, 2, 2))
        transcript = run(preset("hst-2", 2, PerfectOracle(inst)), inst)
        assert len(transcript.assignments) == 6

    def test_randomized_preset_runs_anywhere(self):
        rng = np.random.default_rng(211)
        for kind in ("line", "plane", "explicit"):
            inst = random_instance(rng, n_servers=6, kind=kind)
            transcript = run(preset("general-randomized", 3, PerfectOracle(inst)), inst, seed=4)
            assert len(transcript.assignments) == 6

    def test_det_general_3_runs(self):
        rng = np.random.default_rng(223)
        inst = random_instance(rng, n_servers=6)
        transcript = run(preset("det-general-3", 2, PerfectOracle(inst)), inst)
        assert len(transcript.assignments) == 6
