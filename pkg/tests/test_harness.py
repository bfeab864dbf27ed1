import math
from fractions import Fraction

import pytest

from hypercuts.analysis import gen_random_instance
from hypercuts.harness import (TrialReport, default_trials, estimate,
                               instance_digest, pipeline_equivalence)
from hypercuts.hypergraph import Cut, Hypergraph, InstanceError
from hypercuts.oracle import build_catalog, oracle_bmulti


def small_instance():
    return gen_random_instance(6, 9, 2, 2, 0, max_cost=8, seed=16)


def budgets_for(G):
    cat = build_catalog(G)
    c1 = sorted(cost[0] for cost in cat.costs.values())
    return (c1[len(c1) // 2],)


def test_default_trials():
    assert default_trials(Fraction(1, 240)) == 7200
    assert default_trials(Fraction(1, 2)) == 1000
    with pytest.raises(InstanceError):
        default_trials(Fraction(0))


def test_estimate_bmulti_report_fields():
    G = small_instance()
    rep = estimate(G, "bmulti", budgets=budgets_for(G), trials=2000, seed=3)
    assert rep.trials == 2000
    assert 0 <= rep.successes <= rep.trials
    assert rep.frequency == rep.successes / 2000
    assert rep.floor == Fraction(1, 240)
    assert rep.passed
    d = rep.to_dict()
    assert d["floor"] == "1/240"
    assert d["instance"] == instance_digest(G)


def test_estimate_reproducible():
    G = small_instance()
    a = estimate(G, "bmulti", budgets=budgets_for(G), trials=1500, seed=9)
    b = estimate(G, "bmulti", budgets=budgets_for(G), trials=1500, seed=9)
    assert a.to_dict() == b.to_dict()
    c = estimate(G, "bmulti", budgets=budgets_for(G), trials=1500, seed=10)
    assert c.successes != a.successes or c.seed != a.seed


def test_estimate_jobs_matches_serial():
    G = small_instance()
    serial = estimate(G, "bmulti", budgets=budgets_for(G), trials=800, seed=4)
    parallel = estimate(G, "bmulti", budgets=budgets_for(G), trials=800,
                        seed=4, jobs=2)
    assert serial.successes == parallel.successes


def test_estimate_fixed_target():
    G = small_instance()
    cat = build_catalog(G)
    optima = oracle_bmulti(cat, budgets_for(G))
    target = sorted(optima, key=lambda c: c.edge_ids)[0]
    rep = estimate(G, "bmulti", budgets=budgets_for(G), trials=1500, seed=6,
                   fixed_target=target)
    assert rep.passed
    with pytest.raises(InstanceError):
        estimate(G, "bmulti", budgets=budgets_for(G), trials=100, seed=6,
                 fixed_target=Cut.of([0]) if Cut.of([0]) not in optima
                 else Cut.of([0, 1]))


def test_estimate_infeasible_agreement():
    G = Hypergraph(3, [(0, 1), (1, 2)], [(1,), (1,)], [(9,), (9,), (9,)])
    rep = estimate(G, "nb-bmulti-arbitrary", budgets=(3,), trials=50, seed=0)
    assert rep.successes == rep.trials
    assert "infeasible" in rep.note


def test_estimate_rejects_empty_budget_set():
    G = small_instance()
    with pytest.raises(InstanceError):
        estimate(G, "bmulti", budgets=(0,), trials=10, seed=0)


def test_estimate_zero_trials():
    G = small_instance()
    with pytest.raises(InstanceError):
        estimate(G, "bmulti", budgets=budgets_for(G), trials=0, seed=0)


def test_estimate_unknown_algorithm():
    with pytest.raises(InstanceError):
        estimate(small_instance(), "nope", trials=10, seed=0)


def test_estimate_hmincut_and_kcut_quick():
    G = gen_random_instance(6, 9, 4, 1, 1, max_weight=4, seed=30,
                            positive_weights=True)
    rep = estimate(G, "hmincut", trials=1500, seed=2)
    assert rep.passed
    rep2 = estimate(G, "kcut", k=2, sizes=(1, 1), trials=3000, seed=2)
    assert rep2.passed


def test_trial_report_z_slack_degenerate_sigma():
    rep = TrialReport("x", "d", 10, 10, Fraction(1), 0)
    assert rep.z_slack == math.inf and rep.passed
    rep2 = TrialReport("x", "d", 10, 0, Fraction(1), 0)
    assert rep2.z_slack == -math.inf and not rep2.passed


def test_pipeline_equivalence_small():
    G = small_instance()
    report = pipeline_equivalence(G, seed=7, runs=3, repetitions=4000,
                                  verify_repetitions=2000)
    assert report["runs"] == 3
    assert report["multi_exact_runs"] == 3
    assert report["pareto_exact_runs"] == 3
    assert len(report["per_run"]) == 3


def test_pipeline_reports_misses_with_tiny_repetitions():
    G = small_instance()
    report = pipeline_equivalence(G, seed=7, runs=2, repetitions=1,
                                  verify_repetitions=1)
    # informational: misses appear in the report, nothing raises
    assert report["runs"] == 2
    assert all("multi_exact" in row for row in report["per_run"])


def test_pipeline_reproducible():
    G = small_instance()
    a = pipeline_equivalence(G, seed=8, runs=2, repetitions=500,
                             verify_repetitions=200)
    b = pipeline_equivalence(G, seed=8, runs=2, repetitions=500,
                             verify_repetitions=200)
    assert a == b
