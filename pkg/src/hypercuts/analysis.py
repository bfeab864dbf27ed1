"""Closed-form analysis artifacts and test-instance generators.

Covers the linear program whose optimum has a closed form (checked against
an independent extreme-point/grid brute force), the exact binomial ratio
inequality used by the size-constrained analysis, the pareto lower-bound
family (hub-to-hub parallel paths), and a seeded random instance generator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

from .hypergraph import Hypergraph, InstanceError

LP_RANK_GUARD = 8


@dataclass(frozen=True)
class LpInstance:
    """Parameters of the contraction-analysis LP.

    Variables x_2..x_r, y_2..y_r are implicit; `f` maps each argument in
    {n-r+1, ..., n-1} to a positive value (kept as a finite table so equality
    checks stay exact).
    """

    r: int
    gamma: int
    n: int
    f: dict[int, Fraction]

    def __post_init__(self):
        if not (self.n >= self.gamma >= self.r + 1 > 2):
            raise InstanceError(
                f"need n >= gamma >= r+1 > 2, got n={self.n} gamma={self.gamma} r={self.r}")
        table = {k: Fraction(v) for k, v in self.f.items()}
        for j in range(2, self.r + 1):
            arg = self.n - j + 1
            if arg not in table:
                raise InstanceError(f"f is missing the value at {arg}")
            if table[arg] <= 0:
                raise InstanceError("f must be strictly positive on the queried range")
        object.__setattr__(self, "f", table)


def lp_closed_form(inst: LpInstance) -> Fraction:
    """min over j in 2..r of (1 - j/(gamma-r+j)) * f(n-j+1), exactly."""
    return min(
        (1 - Fraction(j, inst.gamma - inst.r + j)) * inst.f[inst.n - j + 1]
        for j in range(2, inst.r + 1))


def _best_objective_given_x(inst: LpInstance, x: list[Fraction]) -> Fraction:
    """Minimize the LP objective over y for a fixed feasible x.

    With x fixed, maximizing sum y_j f(n-j+1) subject to 0 <= y_j <= x_j and
    gamma*sum(y) <= sum(j*x_j) is a fractional knapsack: fill the y_j with the
    largest f first.
    """
    r, gamma = inst.r, inst.gamma
    budget = sum(Fraction(j) * x[j - 2] for j in range(2, r + 1)) / gamma
    order = sorted(range(2, r + 1), key=lambda j: inst.f[inst.n - j + 1], reverse=True)
    obj = sum(x[j - 2] * inst.f[inst.n - j + 1] for j in range(2, r + 1))
    for j in order:
        take = min(x[j - 2], budget)
        obj -= take * inst.f[inst.n - j + 1]
        budget -= take
        if budget == 0:
            break
    return obj


def lp_bruteforce(inst: LpInstance, grid_step: int | None = None) -> Fraction:
    """Minimum objective over the candidate extreme points, plus a grid floor.

    The two candidate families come from the extreme-point case analysis
    (either one slack pair at the same index j, giving y_j = j/gamma, or two
    indices j1 != j2 with x_j1 = j2/(gamma-j1+j2)); a dense feasibility grid
    over the x-simplex is evaluated as an independent sanity floor.  Must
    equal lp_closed_form exactly.
    """
    if inst.r > LP_RANK_GUARD:
        raise InstanceError(f"rank {inst.r} exceeds the brute-force guard ({LP_RANK_GUARD})")
    r, gamma = inst.r, inst.gamma
    candidates = []
    for j in range(2, r + 1):
        # single index: x_j = 1, y_j = j/gamma
        candidates.append((1 - Fraction(j, gamma)) * inst.f[inst.n - j + 1])
    for j1 in range(2, r + 1):
        for j2 in range(2, r + 1):
            if j1 == j2:
                continue
            # x_j1 = y_j1 = j2/(gamma-j1+j2), x_j2 = 1 - x_j1, y_j2 = 0
            candidates.append(
                (1 - Fraction(j2, gamma - j1 + j2)) * inst.f[inst.n - j2 + 1])
    best = min(candidates)

    if grid_step is None:
        # Redundant floor below the extreme-point candidates; coarsened for
        # larger r where the simplex grid explodes combinatorially.
        grid_step = 256 if r <= 3 else (64 if r == 4 else 16)
    nvars = r - 1
    for split in combinations_with_replacement(range(nvars), grid_step):
        counts = [0] * nvars
        for idx in split:
            counts[idx] += 1
        x = [Fraction(c, grid_step) for c in counts]
        val = _best_objective_given_x(inst, x)
        if val < best:
            best = val
    return best


def ratio_inequality_check(n: int, e: int, sigma: int) -> bool:
    """Exact check of C(n-e,s)/C(n,s) * 1/C(n-e+1,2s) >= 1/C(n,2s).

    Requires positive integers with e >= 2 and n - e + 1 > 2*sigma.
    """
    if n < 1 or e < 2 or sigma < 1:
        raise InstanceError("need n >= 1, e >= 2, sigma >= 1")
    if n - e + 1 <= 2 * sigma:
        raise InstanceError("hypothesis requires n - e + 1 > 2*sigma")
    lhs = comb(n - e, sigma) * comb(n, 2 * sigma)
    rhs = comb(n, sigma) * comb(n - e + 1, 2 * sigma)
    return lhs >= rhs


def gen_lower_bound_instance(n: int, t: int) -> Hypergraph:
    """Rank-2 instance with two hubs joined by t internally-disjoint paths.

    Edges on path i cost t+1 under criterion i and 1 under every other
    criterion (the rational construction cleared by a common denominator, so
    all costs are exact integers).  Every cut picking exactly one edge per
    path has the equal cost vector (2t, ..., 2t); there are at least
    ((n-2)/t)^t such cuts and all of them are pareto-optimal.
    """
    if t < 1:
        raise InstanceError("need at least one criterion")
    if n < t + 2:
        raise InstanceError(f"need n >= t+2, got n={n} t={t}")
    u, v = 0, 1
    internal = n - 2
    base, extra = divmod(internal, t)
    edges, costs = [], []
    next_vertex = 2
    for i in range(t):
        path_internal = base + (1 if i < extra else 0)
        chain = [u] + [next_vertex + j for j in range(path_internal)] + [v]
        next_vertex += path_internal
        for a, b in zip(chain, chain[1:]):
            edges.append((a, b))
            costs.append(tuple(t + 1 if j == i else 1 for j in range(t)))
    return Hypergraph(n, edges, costs, t_weights=0)


def gen_random_instance(n: int, m: int, rank: int, t_costs: int, t_weights: int,
                        max_cost: int = 8, max_weight: int = 8, seed: int = 0,
                        positive_weights: bool = False) -> Hypergraph:
    """Seeded random hypergraph: m edges with sizes uniform in [2, rank].

    Vertices within an edge are distinct; costs are uniform in [0, max_cost]
    and weights in [0, max_weight] (or [1, max_weight] with positive_weights,
    as the size-constrained problems require).  Connectivity is not
    guaranteed; disconnected instances have empty min-cuts and are valid.
    """
    if rank < 2 or n < rank:
        raise InstanceError("need rank >= 2 and n >= rank")
    if positive_weights and (t_weights < 1 or max_weight < 1):
        raise InstanceError("positive weights need t_weights >= 1 and max_weight >= 1")
    rng = random.Random(seed)
    edges, costs = [], []
    for _ in range(m):
        size = rng.randrange(2, rank + 1)
        edges.append(tuple(sorted(rng.sample(range(n), size))))
        costs.append(tuple(rng.randrange(max_cost + 1) for _ in range(t_costs)))
    low = 1 if positive_weights else 0
    weights = [tuple(rng.randrange(low, max_weight + 1) for _ in range(t_weights))
               for _ in range(n)]
    return Hypergraph(n, edges, costs, weights, t_costs=t_costs, t_weights=t_weights)


def gen_pareto_not_parametric_instance() -> Hypergraph:
    """Triangle whose third cut is pareto-optimal but sits strictly above the
    lower convex envelope of the other two, hence is not a parametric min-cut.

    Cut cost vectors: (1,4), (4,1) and (3,3).
    """
    edges = [(0, 1), (0, 2), (1, 2)]
    costs = [(1, 1), (0, 3), (3, 0)]
    return Hypergraph(3, edges, costs, t_weights=0)


def gen_multiobjective_not_pareto_instance() -> Hypergraph:
    """Triangle with a budget-optimal cut that is dominated.

    Cut cost vectors: (2,4), (6,2) and (4,4); the (4,4) cut ties the budget
    optimum at b=(4,) yet is dominated by (2,4).
    """
    edges = [(0, 1), (0, 2), (1, 2)]
    costs = [(2, 1), (0, 3), (4, 1)]
    return Hypergraph(3, edges, costs, t_weights=0)
