"""Size-constrained min-k-cut via weight-oblivious non-uniform contraction.

The solver never reads vertex weights: it contracts hyperedges with
probability proportional to alpha_e = C(n-|e|, sigma_{k-1}) / C(n, sigma_{k-1})
(optionally scaled by edge cost), keeps a candidate cut R built from a random
partial labelling at every level, and on the way back up returns the level's
candidate with probability 1/n.  The same seed therefore produces identical
output for every choice of vertex-weight annotation.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from fractions import Fraction
from math import comb

from ._engine import contract_comps, initial_comps, present_edge_ids
from .hypergraph import Cut, Hypergraph, InstanceError, INFEASIBLE

__all__ = [
    "alpha_size",
    "size_constrained_min_k_cut",
    "success_floor_size",
    "multi_weight_reduction",
]


def _check_sizes(k: int, sizes) -> tuple[int, ...]:
    if k < 2:
        raise InstanceError("k must be at least 2")
    sizes = tuple(sizes)
    if len(sizes) != k:
        raise InstanceError(f"expected {k} part sizes, got {len(sizes)}")
    if any(s < 1 for s in sizes):
        raise InstanceError("part size bounds must be positive")
    return tuple(sorted(sizes))


def alpha_size(n: int, edge_size: int, sigma: int) -> Fraction:
    """Contraction weight C(n-|e|, sigma) / C(n, sigma), exactly.

    Zero iff fewer than sigma vertices remain outside the edge.
    """
    if n < 2 or not 2 <= edge_size <= n or sigma < 1:
        raise InstanceError("need n >= 2, 2 <= edge_size <= n, sigma >= 1")
    return Fraction(comb(n - edge_size, sigma), comb(n, sigma))


class _KCutWalker:
    """Repeat-friendly sampler for the size-constrained contraction walk.

    ``run`` returns (cut mask, witnessed) where ``witnessed`` records whether
    the returned value came from a proper k-partition whose part weights meet
    the size bounds.  The flag is derived after the fact and never influences
    a random draw, so outputs stay weight-oblivious; callers picking a best
    of many runs use it to ignore artifacts of improper label draws.
    """

    def __init__(self, G: Hypergraph, k: int, sizes, weighted_costs: bool):
        self.G = G
        self.k = k
        self.sizes = sizes
        self.sigma_lead = sum(sizes[:-1])
        self.sigma_all = sum(sizes)
        self.base_limit = max(2 * self.sigma_lead, self.sigma_all)
        self.masks = G.edge_masks
        if weighted_costs:
            self.cost = [c[0] for c in G.edge_costs]
        else:
            self.cost = [1] * G.m
        if G.t_weights:
            self.vertex_w = [w[0] for w in G.vertex_weights]
        else:
            self.vertex_w = [1] * G.n
        self.start = initial_comps(G.n)
        self._cache: dict[tuple, tuple] = {}

    def run(self, rng: random.Random) -> tuple[int, bool]:
        key = self.start
        cache = self._cache
        pending: list[tuple[tuple[int, bool], int]] = []  # (candidate, live)
        while True:
            info = cache.get(key)
            if info is None:
                info = self._expand(key)
                cache[key] = info
            tag = info[0]
            if tag == "base":
                result = self._base_cut(key, rng)
                break
            present = info[1]
            candidate = self._level_candidate(key, present, rng)
            if tag == "allzero":
                result = candidate
                break
            cum, total, nexts = info[3], info[4], info[5]
            idx = bisect_right(cum, rng.randrange(total))
            nk = nexts[idx]
            if nk is None:
                nk = contract_comps(key, self.masks[present[idx]])
                nexts[idx] = nk
            pending.append((candidate, len(key)))
            key = nk
        for candidate, live in reversed(pending):
            if rng.randrange(live) == 0:
                result = candidate
        return result

    def _witnessed(self, label_masks) -> bool:
        """Proper k-partition whose sorted part weights meet the sorted bounds."""
        if any(m == 0 for m in label_masks):
            return False
        part_w = []
        for lm in label_masks:
            total = 0
            v = 0
            while lm:
                if lm & 1:
                    total += self.vertex_w[v]
                lm >>= 1
                v += 1
            part_w.append(total)
        part_w.sort()
        return all(w >= s for w, s in zip(part_w, self.sizes))

    def _expand(self, comps):
        live = len(comps)
        present = present_edge_ids(self.masks, comps)
        spans = []
        for eid in present:
            em = self.masks[eid]
            spans.append(sum(1 for c in comps if c & em))
        if live <= self.base_limit:
            return ("base", present, spans)
        # alpha numerators over the common denominator C(live, sigma)
        sigma = self.sigma_lead
        total = 0
        cum = []
        for sz, eid in zip(spans, present):
            total += comb(live - sz, sigma) * self.cost[eid]
            cum.append(total)
        if total == 0:
            return ("allzero", present, spans)
        return ("sample", present, spans, cum, total, [None] * len(present))

    def _base_cut(self, comps, rng) -> tuple[int, bool]:
        # uniform independent label per supervertex (k^|V| outcomes)
        k = self.k
        label_masks = [0] * k
        for c in comps:
            label_masks[rng.randrange(k)] |= c
        return self._crossing(comps, label_masks), self._witnessed(label_masks)

    def _level_candidate(self, comps, present, rng) -> tuple[int, bool]:
        """delta of the random partial labelling, or the alive edge set."""
        k = self.k
        live = len(comps)
        chosen = sorted(rng.sample(range(live), 2 * self.sigma_lead))
        label_masks = [0] * k
        picked = 0
        for idx in chosen:
            lab = rng.randrange(k)
            label_masks[lab] |= comps[idx]
            picked |= comps[idx]
        # everything outside the sample joins the last part
        rest = 0
        for c in comps:
            if not (c & picked):
                rest |= c
        label_masks[k - 1] |= rest
        if any(m == 0 for m in label_masks):
            out = 0
            for eid in present:
                out |= 1 << eid
            return out, False
        return self._crossing(comps, label_masks), self._witnessed(label_masks)

    def _crossing(self, comps, label_masks) -> int:
        """Edges meeting at least two label classes (only alive ones can)."""
        out = 0
        for eid, em in enumerate(self.masks):
            inside = False
            for lm in label_masks:
                if em & lm == em:
                    inside = True
                    break
            if not inside:
                out |= 1 << eid
        return out


def size_constrained_min_k_cut(G: Hypergraph, k: int, sizes,
                               rng: random.Random,
                               weighted_costs: bool = False):
    """One run of the size-constrained min-k-cut algorithm.

    Vertex weights are deliberately not an input: for any positive integer
    weighting, any fixed size-constrained min-k-cut is returned with
    probability at least ``success_floor_size(n, k, sizes)``.  Returns
    INFEASIBLE when n < k (no k-partition exists).
    """
    sizes = _check_sizes(k, sizes)
    if G.n < k:
        return INFEASIBLE
    walker = _KCutWalker(G, k, sizes, weighted_costs)
    mask, _ = walker.run(rng)
    return Cut.from_mask(mask)


def success_floor_size(n: int, k: int, sizes) -> Fraction:
    """Per-cut success floor: k^-M at or below the base threshold
    M = max(2*sigma_{k-1}, sigma_k), else 1/(k^M * n * C(n, 2*sigma_{k-1}))."""
    sizes = _check_sizes(k, sizes)
    if n < k:
        raise InstanceError("need n >= k")
    sigma_lead = sum(sizes[:-1])
    exponent = max(2 * sigma_lead, sum(sizes))
    if n <= exponent:
        return Fraction(1, k ** exponent)
    return Fraction(1, (k ** exponent) * n * comb(n, 2 * sigma_lead))


def multi_weight_reduction(size_matrix) -> tuple[int, ...]:
    """Collapse per-weight-function size bounds to their column-wise maximum.

    Running the solver with the reduced vector satisfies every row's lower
    bounds simultaneously.  Returns the maxima sorted non-decreasing.
    """
    rows = [tuple(row) for row in size_matrix]
    if not rows:
        raise InstanceError("need at least one row of size bounds")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InstanceError("all rows must have the same length")
    if any(s < 1 for r in rows for s in r):
        raise InstanceError("size bounds must be positive")
    return tuple(sorted(max(col) for col in zip(*rows)))
