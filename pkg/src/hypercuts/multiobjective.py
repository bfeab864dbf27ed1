"""Edge-cost multicriteria cut algorithms.

Four entry points:

* ``b_multiobjective_min_cut`` - budget-constrained random contraction.  At
  each step the remaining vertices are classified per criterion (those whose
  single-vertex cut already busts the budget), the criterion with the largest
  class drives a cost-proportional edge contraction, and a uniform random
  subset cut is returned once at most rank*t vertices remain.
* ``multiobjective_min_cut_enum`` - the budget-free variant: all randomness
  moves upfront into one cost-weighted permutation per criterion, and every
  interleaving schedule of per-criterion contraction phases is replayed,
  yielding at most n^(t-1) cuts per invocation.
* ``enumerate_multiobjective`` / ``enumerate_pareto`` - repeat the
  enumeration until every budget-optimal cut appears with high probability,
  prune by the final criterion, and (for the pareto set) keep the cuts that
  survive the randomized dominance search.
* ``verify_pareto_optimality`` - one-sided dominance test: TRUE is always
  correct for a pareto-optimal input, FALSE is only returned on an explicit
  dominating witness.

Repeated runs on one instance share a per-state cache (see _BMultiWalker),
which changes nothing about the sampled distribution - state expansion is
deterministic - but makes a single trial a few dictionary hops.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

from ._engine import contract_comps, delta_mask, initial_comps, present_edge_ids
from .hypergraph import (ContractionState, Cut, Hypergraph, InstanceError)
from .sampling import LazyWeightedOrder

__all__ = [
    "infeasible_classes",
    "b_multiobjective_min_cut",
    "success_floor_edge",
    "multiobjective_min_cut_enum",
    "enumerate_multiobjective",
    "enumerate_pareto",
    "verify_pareto_optimality",
    "default_enum_repetitions",
    "default_verify_repetitions",
    "interleaving_schedules",
]


def _criterion_costs(G: Hypergraph, costs):
    if costs is None:
        costs = G.costs_by_criterion()
    if not costs:
        raise InstanceError("need at least one cost criterion")
    return costs


def _check_budgets(t: int, budgets) -> tuple[int, ...]:
    budgets = tuple(budgets)
    if len(budgets) != t - 1:
        raise InstanceError(f"expected {t - 1} budgets for t={t}, got {len(budgets)}")
    if any(b < 0 for b in budgets):
        raise InstanceError("budgets must be non-negative")
    return budgets


def infeasible_classes(state: ContractionState, budgets, costs=None):
    """Partition the live supervertices into the per-criterion classes.

    Class i < t collects the not-yet-classified supervertices whose vertex
    cut exceeds budget i; the final class is the residue.  Returns a tuple of
    t lists of supervertex representatives.
    """
    G = state.base
    costs = _criterion_costs(G, costs)
    t = len(costs)
    budgets = _check_budgets(t, budgets)
    alive = state.alive_edges()
    roots = state.roots()
    classes = []
    remaining = list(roots)
    for i in range(t - 1):
        deg = {r: 0 for r in remaining}
        for eid in alive:
            ci = costs[i][eid]
            if ci:
                for r in state.edge_roots(eid):
                    if r in deg:
                        deg[r] += ci
        chosen = [r for r in remaining if deg[r] > budgets[i]]
        classes.append(chosen)
        remaining = [r for r in remaining if deg[r] <= budgets[i]]
    classes.append(remaining)
    return tuple(classes)


class _BMultiWalker:
    """Repeat-friendly sampler for the budget-constrained contraction walk.

    Per contraction state (keyed by the component-mask tuple) the walker
    caches the chosen criterion's sampling distribution and the contraction
    transitions; base states cache their subset->cut tables.  Every run
    consumes randomness in the same way as a direct recursive implementation.
    """

    def __init__(self, G: Hypergraph, costs, budgets):
        self.G = G
        self.masks = G.edge_masks
        self.costs = costs
        self.budgets = tuple(budgets)
        self.t = len(costs)
        self.base_limit = G.rank * self.t
        self.full = G.full_mask
        self.start = initial_comps(G.n)
        self._cache: dict[tuple, tuple] = {}

    def run(self, rng: random.Random):
        """One walk; returns (cut edge-bitmask, proper-witness flag)."""
        key = self.start
        cache = self._cache
        masks = self.masks
        while True:
            info = cache.get(key)
            if info is None:
                info = self._expand(key)
                cache[key] = info
            if info[0] is None:
                table = info[1]
                bits = rng.getrandbits(len(key))
                ent = table.get(bits)
                if ent is None:
                    ent = self._subset_cut(key, bits)
                    table[bits] = ent
                return ent
            cum, total, eids, nexts = info
            idx = bisect_right(cum, rng.randrange(total))
            nk = nexts[idx]
            if nk is None:
                nk = contract_comps(key, masks[eids[idx]])
                nexts[idx] = nk
            key = nk

    def _subset_cut(self, comps, bits):
        side = 0
        for i, c in enumerate(comps):
            if (bits >> i) & 1:
                side |= c
        proper = side != 0 and side != self.full
        return delta_mask(self.masks, side, self.full), proper

    def _expand(self, comps):
        if len(comps) <= self.base_limit:
            return (None, {})
        present = present_edge_ids(self.masks, comps)
        t = self.t
        # classes of supervertices whose vertex-cut cost busts each budget
        nlive = len(comps)
        remaining = list(range(nlive))
        sizes = []
        for i in range(t - 1):
            ci = self.costs[i]
            deg = [0] * nlive
            for eid in present:
                c = ci[eid]
                if c:
                    em = self.masks[eid]
                    for idx in remaining:
                        if em & comps[idx]:
                            deg[idx] += c
            over = [idx for idx in remaining if deg[idx] > self.budgets[i]]
            sizes.append(len(over))
            remaining = [idx for idx in remaining if deg[idx] <= self.budgets[i]]
        sizes.append(len(remaining))
        # largest class drives the contraction; ties break to the lowest
        # criterion, zero-mass criteria fall through to the next largest
        order = sorted(range(t), key=lambda j: (-sizes[j], j))
        for i in order:
            ci = self.costs[i]
            cum, total = [], 0
            for eid in present:
                total += ci[eid]
                cum.append(total)
            if total > 0:
                nexts = [None] * len(present)
                return (cum, total, present, nexts)
        # no criterion has alive mass: terminate via the base case
        return (None, {})


def b_multiobjective_min_cut(G: Hypergraph, budgets, rng: random.Random,
                             costs=None) -> Cut:
    """One run of the budget-constrained random contraction algorithm.

    Any fixed budget-optimal cut is returned with probability at least
    ``success_floor_edge(n, r, t)``.  The result can be the empty cut when
    the base-case subset draw lands on the empty or full vertex set.
    """
    costs = _criterion_costs(G, costs)
    _check_budgets(len(costs), budgets)
    walker = _BMultiWalker(G, costs, budgets)
    mask, _ = walker.run(rng)
    return Cut.from_mask(mask)


def success_floor_edge(n: int, r: int, t: int) -> Fraction:
    """Per-cut success probability floor of the budgeted contraction walk.

    1/2^(rt) when n <= rt, else (2t+1) / (2^(rt) (rt+1) C(n-t(r-2), 2t)).
    Exact rational.
    """
    if n < 1 or t < 1 or r < 2:
        raise InstanceError("need n >= 1, t >= 1, r >= 2")
    if n <= r * t:
        return Fraction(1, 2 ** (r * t))
    top = n - t * (r - 2)
    if top < 2 * t:
        raise InstanceError(f"(n={n}, r={r}, t={t}) outside the floor's regime")
    return Fraction(2 * t + 1, 2 ** (r * t) * (r * t + 1)) / comb(top, 2 * t)


def interleaving_schedules(n: int, r: int, t: int) -> list[tuple[int, ...]]:
    """All phase-target sequences n_1 >= ... >= n_{t-1} >= n_t = r*t, n_1 <= n."""
    last = r * t
    if n <= last:
        return []
    schedules = []
    for combo in combinations_with_replacement(range(last, n + 1), t - 1):
        schedules.append(tuple(reversed(combo)) + (last,))
    return schedules


class _EnumContext:
    """Precomputed data for repeated runs of the enumeration algorithm."""

    def __init__(self, G: Hypergraph, costs):
        self.G = G
        self.costs = costs
        self.t = len(costs)
        self.r = G.rank
        self.n = G.n
        self.base_limit = self.r * self.t
        self.masks = G.edge_masks
        self.edges = G.edges
        self.full = G.full_mask
        self.supports = []
        self.support_weights = []
        for ci in costs:
            ids = [e for e in range(G.m) if ci[e] > 0]
            self.supports.append(ids)
            self.support_weights.append([ci[e] for e in ids])
        self.schedules = interleaving_schedules(self.n, self.r, self.t)

    def run(self, rng: random.Random, out: set[int]) -> None:
        """One invocation; adds the produced cut bitmasks to ``out``.

        Subset draws landing on the empty or full vertex set induce no
        bipartition and hence no cut; those draws contribute nothing.
        """
        n, edges, masks = self.n, self.edges, self.masks
        full_bits = (1 << n) - 1
        if n <= self.base_limit:
            bits = rng.getrandbits(n)
            if bits != 0 and bits != full_bits:
                out.add(delta_mask(masks, bits, self.full))
            return
        orders = [LazyWeightedOrder(ids, ws, rng)
                  for ids, ws in zip(self.supports, self.support_weights)]
        for schedule in self.schedules:
            labels = list(range(n))
            live = n
            for i, target in enumerate(schedule):
                order = orders[i]
                prefix = order.prefix
                pos = 0
                while live > target:
                    eid = None
                    while True:
                        if pos >= len(prefix):
                            order.ensure(pos + 1)
                            if pos >= len(prefix):
                                break
                        cand = prefix[pos]
                        pos += 1
                        vs = edges[cand]
                        l0 = labels[vs[0]]
                        for v in vs[1:]:
                            if labels[v] != l0:
                                eid = cand
                                break
                        if eid is not None:
                            break
                    if eid is None:
                        break  # permutation exhausted: phase ends early
                    hit = {labels[v] for v in edges[eid]}
                    tgt = min(hit)
                    for v in range(n):
                        if labels[v] in hit:
                            labels[v] = tgt
                    live -= len(hit) - 1
            comp = {}
            for v in range(n):
                comp[labels[v]] = comp.get(labels[v], 0) | (1 << v)
            comps = [comp[root] for root in sorted(comp)]
            bits = rng.getrandbits(len(comps))
            if bits == 0 or bits == (1 << len(comps)) - 1:
                continue
            side = 0
            for idx, cmask in enumerate(comps):
                if (bits >> idx) & 1:
                    side |= cmask
            out.add(delta_mask(masks, side, self.full))


def multiobjective_min_cut_enum(G: Hypergraph, rng: random.Random,
                                costs=None) -> set[Cut]:
    """One invocation of the budget-free enumeration (at most n^(t-1) cuts)."""
    costs = _criterion_costs(G, costs)
    ctx = _EnumContext(G, costs)
    masks: set[int] = set()
    ctx.run(rng, masks)
    return {Cut.from_mask(m) for m in masks}


def default_enum_repetitions(n: int, r: int, t: int) -> int:
    """Repetition count making the collection a superset of the budget-optimal
    cuts with high probability (asymptotic bound instantiated with constant 1)."""
    return max(1, math.ceil(r * r * t * (2 ** (r * t)) * (n ** (2 * t)) * math.log(max(n, 2))))


def default_verify_repetitions(n: int, r: int, t: int) -> int:
    """Per-criterion repetition count for the dominance search."""
    return max(1, math.ceil(r * (2 ** (r * t)) * (n ** (2 * t)) * math.log(max(n, 2))))


def _mask_costs(G: Hypergraph, costs, mask: int) -> tuple[int, ...]:
    totals = [0] * len(costs)
    eid = 0
    while mask:
        if mask & 1:
            for i, ci in enumerate(costs):
                totals[i] += ci[eid]
        mask >>= 1
        eid += 1
    return tuple(totals)


def _prune_final_criterion(masks: set[int], G: Hypergraph, costs) -> set[int]:
    """Drop F when some F' in the collection is <= on the leading criteria and
    strictly cheaper on the last; idempotent and order-independent."""
    vectors = {m: _mask_costs(G, costs, m) for m in masks}
    t = len(costs)
    survivors = set()
    for m, vec in vectors.items():
        beaten = any(
            other[-1] < vec[-1] and all(other[i] <= vec[i] for i in range(t - 1))
            for other in vectors.values())
        if not beaten:
            survivors.add(m)
    return survivors


def enumerate_multiobjective(G: Hypergraph, rng: random.Random,
                             repetitions: int | None = None,
                             costs=None) -> set[Cut]:
    """Union of repeated enumeration runs, pruned by the final criterion.

    With the default repetition count the result equals the set of all
    budget-optimal cuts with high probability.  On an unlucky sample the
    pruned set can retain non-optimal cuts; callers comparing against ground
    truth should report such misses rather than mask them.
    """
    costs = _criterion_costs(G, costs)
    if repetitions is None:
        repetitions = default_enum_repetitions(G.n, G.rank, len(costs))
    if repetitions < 1:
        raise InstanceError("repetitions must be >= 1")
    ctx = _EnumContext(G, costs)
    masks: set[int] = set()
    for _ in range(repetitions):
        ctx.run(rng, masks)
    return {Cut.from_mask(m) for m in _prune_final_criterion(masks, G, costs)}


def verify_pareto_optimality(G: Hypergraph, cut: Cut, rng: random.Random,
                             repetitions_per_criterion: int | None = None,
                             costs=None) -> bool:
    """Randomized dominance check for a cut of G.

    For each criterion i the costs are rotated so that i is minimized
    subject to budgets equal to the cut's costs under the other criteria;
    finding a budget-respecting cut strictly cheaper on i proves domination.
    TRUE is deterministic for pareto-optimal cuts; FALSE is correct whenever
    returned and is found with high probability for dominated cuts.
    """
    costs = _criterion_costs(G, costs)
    t = len(costs)
    if repetitions_per_criterion is None:
        repetitions_per_criterion = default_verify_repetitions(G.n, G.rank, t)
    cut_vec = [sum(ci[e] for e in cut.edge_ids) for ci in costs]
    for i in range(t):
        rotated = [costs[j] for j in range(t) if j != i] + [costs[i]]
        budgets = tuple(cut_vec[j] for j in range(t) if j != i)
        walker = _BMultiWalker(G, rotated, budgets)
        target = cut_vec[i]
        verdict: dict[int, bool] = {}
        for _ in range(repetitions_per_criterion):
            mask, proper = walker.run(rng)
            if not proper:
                continue
            hit = verdict.get(mask)
            if hit is None:
                vec = _mask_costs(G, rotated, mask)
                hit = (vec[-1] < target
                       and all(vec[j] <= budgets[j] for j in range(t - 1)))
                verdict[mask] = hit
            if hit:
                return False
    return True


def enumerate_pareto(G: Hypergraph, rng: random.Random,
                     repetitions: int | None = None,
                     verify_repetitions: int | None = None,
                     costs=None) -> set[Cut]:
    """Pareto-optimal cuts: the enumerated collection filtered by the
    randomized dominance check.  Always a subset of the collection."""
    costs = _criterion_costs(G, costs)
    collection = enumerate_multiobjective(G, rng, repetitions, costs)
    result = set()
    for cut in sorted(collection, key=lambda c: c.edge_ids):
        if verify_pareto_optimality(G, cut, rng, verify_repetitions, costs):
            result.add(cut)
    return result
