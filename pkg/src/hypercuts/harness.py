"""Monte-Carlo estimation harness.

``estimate`` runs a randomized solver many times against the exhaustive
oracle for the same instance and reports the empirical hit frequency of the
oracle-optimal set next to the algorithm's proven probability floor.  The
pass policy is one-sided: the floors are lower bounds, so a run passes when
the empirical frequency is no more than three binomial standard deviations
below the floor.

Reports are reproducible: trial i uses a generator derived from
(master seed, i), so results are independent of execution order and of the
number of worker processes.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from multiprocessing import get_context

from .hypergraph import Cut, Hypergraph, InstanceError, INFEASIBLE, save_instance
from .multiobjective import (_BMultiWalker, _criterion_costs,
                             enumerate_multiobjective, success_floor_edge,
                             verify_pareto_optimality)
from .node_budgeted import (_NBArbitraryWalker, _NBConstantWalker,
                            _HyperMinCutWalker, _cost_column, _weight_columns,
                            _check_node_budgets, success_floor_node,
                            success_floor_node_arbitrary)
from .size_constrained import _KCutWalker, _check_sizes, success_floor_size
from .oracle import (build_catalog, oracle_bmulti, oracle_kcut, oracle_min_cut,
                     oracle_multiobjective, oracle_nb_bmulti, oracle_pareto)
from .sampling import derive_rng
from ._engine import initial_comps

__all__ = ["TrialReport", "estimate", "default_trials", "pipeline_equivalence",
           "instance_digest"]


def instance_digest(G: Hypergraph) -> str:
    return hashlib.sha256(save_instance(G)).hexdigest()[:16]


@dataclass
class TrialReport:
    """Outcome of a Monte-Carlo floor check for one (algorithm, instance)."""

    algorithm: str
    instance_digest: str
    trials: int
    successes: int
    floor: Fraction
    seed: int
    note: str = ""
    optima: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def frequency(self) -> float:
        return self.successes / self.trials

    @property
    def sigma(self) -> float:
        q = float(self.floor)
        return math.sqrt(q * (1.0 - q) / self.trials)

    @property
    def z_slack(self) -> float:
        s = self.sigma
        if s == 0.0:
            return math.inf if self.frequency >= float(self.floor) else -math.inf
        return (self.frequency - float(self.floor)) / s

    @property
    def passed(self) -> bool:
        return self.z_slack >= -3.0

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "instance": self.instance_digest,
            "trials": self.trials,
            "successes": self.successes,
            "frequency": self.frequency,
            "floor": f"{self.floor.numerator}/{self.floor.denominator}",
            "floor_float": float(self.floor),
            "z_slack": self.z_slack,
            "passed": self.passed,
            "seed": self.seed,
            "optima": self.optima,
            **({"note": self.note} if self.note else {}),
            **self.extra,
        }


def default_trials(floor: Fraction) -> int:
    """max(1000, ceil(30/floor)): at least 30 successes expected at the floor."""
    if floor <= 0:
        raise InstanceError("floor must be positive")
    return max(1000, math.ceil(30 / floor))


def _build_problem(G: Hypergraph, algorithm: str, budgets=None, k=None,
                   sizes=None, weighted_costs=False):
    """Returns (walker factory, oracle cut set or INFEASIBLE, floor)."""
    if algorithm == "bmulti":
        costs = _criterion_costs(G, None)
        t = len(costs)
        if budgets is None:
            raise InstanceError("bmulti needs budgets")
        budgets = tuple(budgets)
        catalog = build_catalog(G)
        optima = oracle_bmulti(catalog, budgets)
        if not optima:
            raise InstanceError("no cut satisfies the budgets; no optimum to track")
        floor = success_floor_edge(G.n, G.rank, t)
        walker = _BMultiWalker(G, costs, budgets)
        return (lambda rng: walker.run(rng)[0]), optima, floor
    if algorithm == "nb-bmulti-constant":
        weights = _weight_columns(G, None)
        budgets = _check_node_budgets(len(weights), budgets or ())
        cost = _cost_column(G, None)
        result = oracle_nb_bmulti(G, budgets)
        optima = result if result is INFEASIBLE else result[1]
        floor = success_floor_node(G.n, G.rank)
        walker = _NBConstantWalker(G, cost, weights, budgets)
        return (lambda rng: walker.run(rng)[0]), optima, floor
    if algorithm == "nb-bmulti-arbitrary":
        weights = _weight_columns(G, None)
        budgets = _check_node_budgets(len(weights), budgets or ())
        cost = _cost_column(G, None)
        result = oracle_nb_bmulti(G, budgets)
        optima = result if result is INFEASIBLE else result[1]
        floor = success_floor_node_arbitrary(G.n)
        walker = _NBArbitraryWalker(G, cost, weights, budgets)
        return walker.run, optima, floor
    if algorithm == "hmincut":
        if G.n < 2:
            raise InstanceError("hmincut needs at least 2 vertices")
        cost = _cost_column(G, None)
        catalog = build_catalog(G)
        _, optima = oracle_min_cut(catalog)
        floor = Fraction(1, comb(G.n, 2))
        walker = _HyperMinCutWalker(G, cost)
        start = initial_comps(G.n)
        return (lambda rng: walker.run_from(start, rng)), optima, floor
    if algorithm == "kcut":
        sizes = _check_sizes(k, sizes)
        result = oracle_kcut(G, k, sizes, weighted_costs=weighted_costs)
        optima = result if result is INFEASIBLE else result[1]
        floor = success_floor_size(G.n, k, sizes) if G.n >= k else Fraction(1)
        walker = _KCutWalker(G, k, sizes, weighted_costs)
        if G.n < k:
            return (lambda rng: INFEASIBLE), optima, floor
        return (lambda rng: walker.run(rng)[0]), optima, floor
    raise InstanceError(f"unknown algorithm {algorithm!r}")


def _run_chunk(doc: bytes, algorithm: str, budgets, k, sizes, weighted_costs,
               target_masks, seed: int, start: int, count: int) -> int:
    """Worker: number of successes among trials [start, start+count)."""
    import warnings

    from .hypergraph import load_instance

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        G = load_instance(doc)
    solver, _, _ = _build_problem(G, algorithm, budgets, k, sizes, weighted_costs)
    successes = 0
    for idx in range(start, start + count):
        out = solver(derive_rng(seed, idx))
        if out is INFEASIBLE:
            continue
        if out in target_masks:
            successes += 1
    return successes


def estimate(G: Hypergraph, algorithm: str, *, budgets=None, k=None, sizes=None,
             weighted_costs: bool = False, trials: int | None = None,
             seed: int = 0, fixed_target: Cut | None = None,
             jobs: int = 1) -> TrialReport:
    """Monte-Carlo floor check of one algorithm against the oracle optimum.

    Success means the returned cut lies in the oracle-optimal set (or equals
    ``fixed_target``, which must be oracle-optimal).  When the instance is
    infeasible and the algorithm reports INFEASIBLE, trials count as
    agreement and the report notes the special case.
    """
    solver, optima, floor = _build_problem(G, algorithm, budgets, k, sizes,
                                           weighted_costs)
    if trials is None:
        trials = default_trials(floor)
    if trials < 1:
        raise InstanceError("trials must be >= 1")
    digest = instance_digest(G)

    if optima is INFEASIBLE:
        successes = 0
        for idx in range(trials):
            if solver(derive_rng(seed, idx)) is INFEASIBLE:
                successes += 1
        return TrialReport(algorithm, digest, trials, successes, Fraction(1),
                           seed, note="instance infeasible; counting INFEASIBLE agreement")

    if fixed_target is not None:
        if fixed_target not in optima:
            raise InstanceError("fixed target is not oracle-optimal")
        targets = {fixed_target}
    else:
        targets = optima
    target_masks = {cut.mask() for cut in targets}

    if jobs > 1:
        doc = save_instance(G)
        chunk = -(-trials // jobs)
        spans = [(s, min(chunk, trials - s)) for s in range(0, trials, chunk)]
        ctx = get_context("fork")
        with ctx.Pool(min(jobs, len(spans))) as pool:
            parts = pool.starmap(
                _run_chunk,
                [(doc, algorithm, budgets, k, sizes, weighted_costs,
                  target_masks, seed, s, c) for s, c in spans])
        successes = sum(parts)
    else:
        successes = 0
        for idx in range(trials):
            out = solver(derive_rng(seed, idx))
            if out is INFEASIBLE:
                continue
            if out in target_masks:
                successes += 1

    return TrialReport(algorithm, digest, trials, successes, floor, seed,
                       optima=len(optima),
                       extra={"fixed_target": sorted(fixed_target.edge_ids)}
                       if fixed_target else {})


def pipeline_equivalence(G: Hypergraph, seed: int, runs: int,
                         repetitions: int | None = None,
                         verify_repetitions: int | None = None) -> dict:
    """Repeatedly run the enumeration pipelines and compare with the oracle.

    Each run enumerates the budget-optimal collection once and derives the
    pareto set by the randomized dominance filter; the report carries per-run
    exact-match flags against the oracle sets plus aggregate hit counts.
    Misses are reported, never masked.
    """
    if runs < 1:
        raise InstanceError("runs must be >= 1")
    catalog = build_catalog(G)
    true_multi = oracle_multiobjective(catalog)
    true_pareto = oracle_pareto(catalog)
    per_run = []
    multi_hits = pareto_hits = 0
    for idx in range(runs):
        rng = derive_rng(seed, idx)
        collection = enumerate_multiobjective(G, rng, repetitions)
        pareto = {cut for cut in sorted(collection, key=lambda c: c.edge_ids)
                  if verify_pareto_optimality(G, cut, rng, verify_repetitions)}
        m_ok = collection == true_multi
        p_ok = pareto == true_pareto
        multi_hits += m_ok
        pareto_hits += p_ok
        per_run.append({"run": idx, "multi_exact": m_ok, "pareto_exact": p_ok,
                        "enumerated": len(collection), "pareto": len(pareto)})
    return {
        "instance": instance_digest(G),
        "seed": seed,
        "runs": runs,
        "multi_exact_runs": multi_hits,
        "pareto_exact_runs": pareto_hits,
        "oracle_multi": len(true_multi),
        "oracle_pareto": len(true_pareto),
        "per_run": per_run,
    }
