import numpy as np
import pytest

from ommatch import (
    ContractViolationError,
    GreedyMatcher,
    NetCostMatcher,
    ParsimoniousMatcher,
    UsageError,
    budget_schedule_k,
    harmonic,
    run_det_budget,
    run_det_wellsep,
    run_rand_star,
    star_servers,
    star_space,
)


def greedy_factory(oracle):
    return GreedyMatcher()


def comp_factory(oracle):
    return NetCostMatcher(gamma=1.0)


def ours_factory(k):
    return lambda oracle: ParsimoniousMatcher(k=k, oracle=oracle)


class TestStarSpace:
    def test_distances(self):
        space = star_space(4)
        assert space.n_points == 5
        for leaf in range(1, 5):
            assert space.distance(0, leaf) == 1.0
        assert space.distance(1, 2) == 2.0
        assert space.distance(3, 3) == 0.0

    def test_servers_sit_on_leaves(self):
        assert star_servers(3) == (1, 2, 3)

    def test_harmonic(self):
        assert harmonic(1) == 1.0
        assert harmonic(4) == pytest.approx(25.0 / 12.0)

    def test_budget_schedule(self):
        assert budget_schedule_k(8, 0) == 9
        assert budget_schedule_k(8, 1) == 5
        assert budget_schedule_k(8, 3) == 3
        assert budget_schedule_k(8, 8) == 1


class TestDetBudget:
    def test_no_budget_forces_full_chase(self):
        report = run_det_budget(comp_factory, n=8, budget=0)
        assert report.mean_opt == 1.0
        assert report.mean_ratio >= report.theory_bound - 1e-9
        assert report.theory_bound == pytest.approx(15.0)
        assert len(report.requests) == 8

    def test_budgeted_queries_help_but_bound_holds(self):
        n, budget = 8, 1
        k = budget_schedule_k(n, budget)
        report = run_det_budget(ours_factory(k), n=n, budget=budget)
        assert report.mean_ratio >= report.theory_bound - 1e-9
        assert report.theory_bound == pytest.approx(2.0 * n / (budget + 1) - 1.0)
        assert len(report.predictions) <= budget
        assert report.mean_opt == len(report.predictions) + 1

    def test_opt_equals_center_requests(self):
        report = run_det_budget(ours_factory(3), n=9, budget=3)
        centers = sum(1 for r in report.requests if r == 0)
        assert report.mean_opt == float(centers)

    def test_budget_enforced(self):
        # a schedule that queries more often than the budget allows must trip
        with pytest.raises(ContractViolationError):
            run_det_budget(ours_factory(1), n=8, budget=1)

    def test_prediction_sizes(self):
        report = run_det_budget(ours_factory(4), n=8, budget=2)
        for t, pred in report.predictions:
            assert len(pred) == t


class TestDetWellsep:
    @pytest.mark.parametrize("factory", [comp_factory, ours_factory(4)])
    def test_ratio_at_least_two_k_minus_one(self, factory):
        report = run_det_wellsep(factory, n=16, k=4)
        assert report.mean_opt == 1.0
        assert report.theory_bound == 7.0
        assert report.mean_ratio >= 7.0 - 1e-9

    def test_larger_k(self):
        report = run_det_wellsep(ours_factory(5), n=20, k=5)
        assert report.mean_ratio >= 9.0 - 1e-9

    def test_k_range_validated(self):
        with pytest.raises(UsageError):
            run_det_wellsep(comp_factory, n=4, k=5)


class TestRandStar:
    def test_unknown_variant(self):
        with pytest.raises(UsageError):
            run_rand_star(greedy_factory, 4, "rand-zigzag", trials=1)

    def test_trials_validated(self):
        with pytest.raises(UsageError):
            run_rand_star(greedy_factory, 4, "rand-plain", trials=0)

    def test_wellsep_needs_param(self):
        with pytest.raises(UsageError):
            run_rand_star(greedy_factory, 4, "rand-wellsep", trials=1)

    def test_plain_matches_harmonic_law(self):
        # greedy realizes the harmonic-law expectation exactly, so a modest
        # sample pins the mean near 2 H_n - 1
        report = run_rand_star(greedy_factory, 4, "rand-plain", trials=3000, seed=1)
        assert report.theory_bound == pytest.approx(2.0 * harmonic(4) - 1.0)
        slack = max(3.0 * report.ci95, 0.05 * report.theory_bound)
        assert abs(report.mean_ratio - report.theory_bound) <= slack
        assert report.mean_opt == 1.0

    def test_budget_opt_counts_queries(self):
        n, budget = 8, 1
        k = budget_schedule_k(n, budget)
        report = run_rand_star(
            ours_factory(k), n, "rand-budget", trials=50, seed=2, param=budget
        )
        # one query in the schedule, so each trial restarts the center once
        assert report.mean_opt == 2.0
        assert report.mean_ratio > 1.0

    def test_wellsep_with_k_equal_n_is_plain(self):
        a = run_rand_star(greedy_factory, 4, "rand-plain", trials=200, seed=5)
        b = run_rand_star(greedy_factory, 4, "rand-wellsep", trials=200, seed=5, param=4)
        assert b.mean_ratio == a.mean_ratio
        assert b.mean_cost == a.mean_cost
        assert b.theory_bound == a.theory_bound

    def test_wellsep_rounds_n_up(self):
        report = run_rand_star(greedy_factory, 6, "rand-wellsep", trials=5, seed=3, param=4)
        assert report.n == 8
        assert len(report.requests) == 8

    def test_wellsep_bound_drops_with_k(self):
        report = run_rand_star(
            ours_factory(4), 8, "rand-wellsep", trials=100, seed=7, param=4
        )
        assert report.theory_bound == pytest.approx(2.0 * harmonic(4) - 1.0)
        assert report.mean_opt == 1.0
