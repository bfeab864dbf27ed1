"""Node-weighted budget variants of random-contraction min-cut.

The constant-rank solver interleaves cost-proportional uniform contractions
with a deterministic step merging all budget-violating vertices into one.
The arbitrary-rank solver replaces uniform contraction with the non-uniform
weights alpha_e = |U \\ e|/|U| * c(e) over the set U of feasible vertices and
delegates to the plain non-uniform min-cut solver (beta_e weights) once U as
a whole fits the budgets.  The enumeration variant moves all randomness into
a single cost-weighted permutation plus a sweep over contraction stopping
points and weight thresholds.

INFEASIBLE is a distinguished outcome (no vertex satisfies the budgets),
not an error.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from fractions import Fraction
from itertools import product
from math import comb

from ._engine import (contract_comps, delta_mask, initial_comps,
                      merge_comp_subset, present_edge_ids)
from .hypergraph import (ContractionState, Cut, Hypergraph, InstanceError,
                         INFEASIBLE)
from .sampling import LazyWeightedOrder

__all__ = [
    "contract_infeasible",
    "nb_bmulti_constant_rank",
    "nb_bmulti_arbitrary_rank",
    "nb_multi_enum_constant_rank",
    "hypergraph_min_cut",
    "success_floor_node",
    "success_floor_node_arbitrary",
]


def _weight_columns(G: Hypergraph, weights):
    if weights is None:
        weights = [[w[i] for w in G.vertex_weights] for i in range(G.t_weights)]
    return weights


def _cost_column(G: Hypergraph, costs):
    if costs is None:
        if G.t_costs < 1:
            raise InstanceError("instance carries no edge costs")
        return [c[0] for c in G.edge_costs]
    return list(costs)


def _check_node_budgets(t: int, budgets) -> tuple[int, ...]:
    budgets = tuple(budgets)
    if len(budgets) != t:
        raise InstanceError(f"expected {t} node budgets, got {len(budgets)}")
    if any(b < 0 for b in budgets):
        raise InstanceError("budgets must be non-negative")
    return budgets


def contract_infeasible(state: ContractionState, budgets, weights=None) -> ContractionState:
    """Merge all supervertices violating some budget into one (in place).

    No-op when at most one supervertex is infeasible.  Afterwards at most one
    infeasible supervertex remains.
    """
    G = state.base
    weights = _weight_columns(G, weights)
    budgets = _check_node_budgets(len(weights), budgets)
    bad = []
    for root in state.roots():
        mask = state.comp_mask[root]
        for wcol, b in zip(weights, budgets):
            total = 0
            bits = mask
            v = 0
            while bits:
                if bits & 1:
                    total += wcol[v]
                bits >>= 1
                v += 1
            if total > b:
                bad.append(root)
                break
    if len(bad) > 1:
        state.merge(bad)
    return state


def _comp_weight(wcol, mask: int) -> int:
    total = 0
    v = 0
    while mask:
        if mask & 1:
            total += wcol[v]
        mask >>= 1
        v += 1
    return total


class _HyperMinCutWalker:
    """Non-uniform contraction sampler: weights (|V|-|e|)/|V| * c(e).

    When every weight is zero each remaining edge spans all supervertices,
    so the full alive edge set is the unique cut and is returned.
    """

    def __init__(self, G: Hypergraph, cost):
        self.G = G
        self.cost = cost
        self.masks = G.edge_masks
        self._cache: dict[tuple, tuple] = {}

    def run_from(self, comps, rng: random.Random) -> int:
        cache = self._cache
        while True:
            info = cache.get(comps)
            if info is None:
                info = self._expand(comps)
                cache[comps] = info
            if info[0] is None:
                return info[1]
            cum, total, eids, nexts = info
            idx = bisect_right(cum, rng.randrange(total))
            nk = nexts[idx]
            if nk is None:
                nk = contract_comps(comps, self.masks[eids[idx]])
                nexts[idx] = nk
            comps = nk

    def _expand(self, comps):
        present = present_edge_ids(self.masks, comps)
        live = len(comps)
        cum, total = [], 0
        for eid in present:
            em = self.masks[eid]
            spans = sum(1 for c in comps if c & em)
            total += (live - spans) * self.cost[eid]
            cum.append(total)
        if total == 0:
            out = 0
            for eid in present:
                out |= 1 << eid
            return (None, out)
        return (cum, total, present, [None] * len(present))


def hypergraph_min_cut(G: Hypergraph, rng: random.Random, costs=None) -> Cut:
    """One run of the non-uniform contraction min-cut algorithm.

    Any fixed min-cut (under the single cost function) is returned with
    probability at least 1/C(n,2).
    """
    if G.n < 2:
        raise InstanceError("need at least 2 vertices")
    cost = _cost_column(G, costs)
    walker = _HyperMinCutWalker(G, cost)
    return Cut.from_mask(walker.run_from(initial_comps(G.n), rng))


class _NBConstantWalker:
    """Constant-rank node-budgeted walk with per-state caching.

    ``run`` returns (cut mask, witness side mask); the side is the sampled
    vertex subset behind the final cut, letting callers that keep a best of
    many runs discard draws whose witness satisfies no budget.
    """

    def __init__(self, G: Hypergraph, cost, weights, budgets):
        self.G = G
        self.cost = cost
        self.weights = weights
        self.budgets = budgets
        self.masks = G.edge_masks
        self.full = G.full_mask
        self.base_limit = G.rank + 1
        self.start = initial_comps(G.n)
        self._cache: dict[tuple, tuple] = {}

    def run(self, rng: random.Random):
        key = self.start
        cache = self._cache
        while True:
            info = cache.get(key)
            if info is None:
                info = self._expand(key)
                cache[key] = info
            tag = info[0]
            if tag == "merge":
                key = info[1]
            elif tag == "base":
                table = info[1]
                bits = rng.getrandbits(len(key))
                ent = table.get(bits)
                if ent is None:
                    side = 0
                    for i, c in enumerate(key):
                        if (bits >> i) & 1:
                            side |= c
                    ent = (delta_mask(self.masks, side, self.full), side)
                    table[bits] = ent
                return ent
            else:
                cum, total, eids, nexts = info[1]
                idx = bisect_right(cum, rng.randrange(total))
                nk = nexts[idx]
                if nk is None:
                    nk = contract_comps(key, self.masks[eids[idx]])
                    nexts[idx] = nk
                key = nk

    def _infeasible_mask(self, comps) -> tuple[int, int]:
        bad_mask = 0
        bad_count = 0
        for c in comps:
            for wcol, b in zip(self.weights, self.budgets):
                if _comp_weight(wcol, c) > b:
                    bad_mask |= c
                    bad_count += 1
                    break
        return bad_mask, bad_count

    def _expand(self, comps):
        bad_mask, bad_count = self._infeasible_mask(comps)
        if bad_count > 1:
            return ("merge", merge_comp_subset(comps, bad_mask))
        if len(comps) <= self.base_limit:
            return ("base", {})
        present = present_edge_ids(self.masks, comps)
        cum, total = [], 0
        for eid in present:
            total += self.cost[eid]
            cum.append(total)
        if total == 0:
            # degenerate zero-cost state: terminate via the base case
            return ("base", {})
        return ("sample", (cum, total, present, [None] * len(present)))


def nb_bmulti_constant_rank(G: Hypergraph, budgets, rng: random.Random,
                            costs=None, weights=None) -> Cut:
    """One run of the constant-rank node-budgeted algorithm.

    Any fixed node-budgeted budget-optimal cut is returned with probability
    at least 1/(2^(r+1) C(n,2)).
    """
    weights = _weight_columns(G, weights)
    budgets = _check_node_budgets(len(weights), budgets)
    cost = _cost_column(G, costs)
    walker = _NBConstantWalker(G, cost, weights, budgets)
    mask, _ = walker.run(rng)
    return Cut.from_mask(mask)


class _NBArbitraryWalker:
    """Arbitrary-rank node-budgeted walk with per-state caching."""

    def __init__(self, G: Hypergraph, cost, weights, budgets):
        self.G = G
        self.cost = cost
        self.weights = weights
        self.budgets = budgets
        self.masks = G.edge_masks
        self.start = initial_comps(G.n)
        self.mincut = _HyperMinCutWalker(G, cost)
        self._cache: dict[tuple, tuple] = {}

    def run(self, rng: random.Random):
        key = self.start
        cache = self._cache
        while True:
            info = cache.get(key)
            if info is None:
                info = self._expand(key)
                cache[key] = info
            tag = info[0]
            if tag == "infeasible":
                return INFEASIBLE
            if tag == "terminal":
                return info[1]
            if tag == "merge":
                key = info[1]
            elif tag == "delegate":
                return self.mincut.run_from(key, rng)
            else:
                cum, total, eids, nexts = info[1]
                idx = bisect_right(cum, rng.randrange(total))
                nk = nexts[idx]
                if nk is None:
                    nk = contract_comps(key, self.masks[eids[idx]])
                    nexts[idx] = nk
                key = nk

    def _expand(self, comps):
        feas_mask = 0
        bad_mask = 0
        bad_count = 0
        n_feas = 0
        for c in comps:
            ok = True
            for wcol, b in zip(self.weights, self.budgets):
                if _comp_weight(wcol, c) > b:
                    ok = False
                    break
            if ok:
                feas_mask |= c
                n_feas += 1
            else:
                bad_mask |= c
                bad_count += 1
        if n_feas == 0:
            return ("infeasible",)
        if bad_count > 1:
            return ("merge", merge_comp_subset(comps, bad_mask))

        present = present_edge_ids(self.masks, comps)
        cum, total = [], 0
        for eid in present:
            em = self.masks[eid]
            outside = n_feas - sum(1 for c in comps if (c & feas_mask) and (c & em))
            total += outside * self.cost[eid]
            cum.append(total)
        if total == 0:
            # every edge covers all feasible supervertices
            set_ok = all(_comp_weight(wcol, feas_mask) <= b
                         for wcol, b in zip(self.weights, self.budgets))
            if set_ok and bad_count >= 1:
                return ("terminal", delta_mask(self.masks, feas_mask, self.G.full_mask))
            out = 0
            for eid in present:
                out |= 1 << eid
            return ("terminal", out)
        set_ok = all(_comp_weight(wcol, feas_mask) <= b
                     for wcol, b in zip(self.weights, self.budgets))
        if set_ok:
            return ("delegate",)
        return ("sample", (cum, total, present, [None] * len(present)))


def nb_bmulti_arbitrary_rank(G: Hypergraph, budgets, rng: random.Random,
                             costs=None, weights=None):
    """One run of the arbitrary-rank node-budgeted algorithm.

    Returns INFEASIBLE when no vertex satisfies the budgets.  Any fixed
    node-budgeted budget-optimal cut is returned with probability at least
    1 (n=2) or (1/3)/C(n-1,2) (n>=3).
    """
    weights = _weight_columns(G, weights)
    budgets = _check_node_budgets(len(weights), budgets)
    cost = _cost_column(G, costs)
    walker = _NBArbitraryWalker(G, cost, weights, budgets)
    out = walker.run(rng)
    if out is INFEASIBLE:
        return INFEASIBLE
    return Cut.from_mask(out)


def nb_multi_enum_constant_rank(G: Hypergraph, rng: random.Random,
                                costs=None, weights=None) -> set[Cut]:
    """Budget-free node-budgeted enumeration (at most r*n^t cuts).

    Draws one cost-weighted permutation of the positive-cost edges, sweeps
    every contraction stopping point n' and every tuple of realized weight
    thresholds, merges the supervertices exceeding some threshold, and emits
    a random cut whenever the merged hypergraph is new and has between 2 and
    rank+1 supervertices.
    """
    weights = _weight_columns(G, weights)
    cost = _cost_column(G, costs)
    masks = G.edge_masks
    full = G.full_mask
    r = G.rank
    n = G.n

    support = [e for e in range(G.m) if cost[e] > 0]
    order = LazyWeightedOrder(support, [cost[e] for e in support], rng)
    order.ensure(len(support))

    # States after each effective contraction along the permutation; the
    # walk for threshold n' stops at the first state with <= n' vertices.
    snapshots = [initial_comps(n)]
    comps = snapshots[0]
    for eid in order.prefix:
        em = masks[eid]
        low = em & -em
        for c in comps:
            if c & low:
                if em & ~c:
                    comps = contract_comps(comps, em)
                    snapshots.append(comps)
                break

    def state_for(limit: int):
        for comps in snapshots:
            if len(comps) <= limit:
                return comps
        return snapshots[-1]

    seen: set[tuple] = set()
    out: set[Cut] = set()
    for n_prime in range(2, n + 1):
        comps = state_for(n_prime)
        comp_w = [[_comp_weight(wcol, c) for c in comps] for wcol in weights]
        value_sets = [sorted(set(col)) for col in comp_w]
        for thresholds in product(*value_sets):
            victim = 0
            for idx, c in enumerate(comps):
                if any(comp_w[i][idx] > thresholds[i]
                       for i in range(len(weights))):
                    victim |= c
            merged = merge_comp_subset(comps, victim)
            if 1 < len(merged) < r + 2 and merged not in seen:
                seen.add(merged)
                nlive = len(merged)
                while True:
                    bits = rng.getrandbits(nlive)
                    if bits != 0 and bits != (1 << nlive) - 1:
                        break
                side = 0
                for idx, c in enumerate(merged):
                    if (bits >> idx) & 1:
                        side |= c
                out.add(Cut.from_mask(delta_mask(masks, side, full)))
    return out


def success_floor_node(n: int, r: int) -> Fraction:
    """Floor 1/(2^(r+1) C(n,2)) for the constant-rank node-budgeted walk."""
    if n < 2:
        raise InstanceError("need n >= 2")
    return Fraction(1, (2 ** (r + 1)) * comb(n, 2))


def success_floor_node_arbitrary(n: int) -> Fraction:
    """Floor for the arbitrary-rank walk: 1 at n=2, else (1/3)/C(n-1,2)."""
    if n < 2:
        raise InstanceError("need n >= 2")
    if n == 2:
        return Fraction(1)
    return Fraction(1, 3) / comb(n - 1, 2)
