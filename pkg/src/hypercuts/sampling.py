"""Reproducible randomness helpers.

All algorithms draw from a ``random.Random`` instance so that every run is
replayable from a seed.  Monte-Carlo trials use per-trial generators derived
from (master seed, trial index) via a splitmix64-style jump, which makes
trials independent and safe to execute in any order or in parallel.
"""

from __future__ import annotations

import random

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 finalizer step (64-bit avalanche mix)."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """Seed for trial ``index``: splitmix64 state jumped ``index + 1`` steps."""
    if index < 0:
        raise ValueError("trial index must be non-negative")
    state = (master_seed + (index + 1) * _GAMMA) & _MASK64
    return splitmix64(state)


def derive_rng(master_seed: int, index: int) -> random.Random:
    return random.Random(derive_seed(master_seed, index))


def weighted_index(rng: random.Random, cumulative, total: int) -> int:
    """Index drawn with probability weight[i]/total, exactly.

    ``cumulative`` are the inclusive prefix sums of non-negative integer
    weights; ``total`` is the last prefix sum and must be positive.  Uses an
    exact uniform integer draw (cumulative-sum inversion), so there is no
    floating-point or modulo bias.
    """
    target = rng.randrange(total)
    lo, hi = 0, len(cumulative) - 1
    while lo < hi:
        mid = (lo + hi) >> 1
        if cumulative[mid] > target:
            hi = mid
        else:
            lo = mid + 1
    return lo


class LazyWeightedOrder:
    """Weighted-without-replacement ordering of items, materialized on demand.

    Equivalent to drawing the full permutation upfront by repeatedly picking a
    not-yet-chosen item with probability proportional to its weight, but only
    the consumed prefix is actually drawn.  Weights must be positive integers.
    """

    def __init__(self, items, weights, rng: random.Random):
        self._items = list(items)
        self._weights = list(weights)
        self._total = sum(self._weights)
        self._rng = rng
        self.prefix: list = []

    def ensure(self, length: int) -> None:
        """Materialize the first ``length`` entries (or all, if fewer remain)."""
        while len(self.prefix) < length and self._total > 0:
            target = self._rng.randrange(self._total)
            acc = 0
            for pos, w in enumerate(self._weights):
                acc += w
                if acc > target:
                    break
            self.prefix.append(self._items.pop(pos))
            self._total -= self._weights.pop(pos)

    @property
    def exhausted_at(self) -> int | None:
        """Length at which the order runs out, or None while items remain."""
        return len(self.prefix) if self._total == 0 else None


def draw_weighted_order(items, weights, rng: random.Random) -> list:
    """Full weighted-without-replacement ordering (eager variant)."""
    order = LazyWeightedOrder(items, weights, rng)
    order.ensure(len(order._items) + len(order.prefix))
    return order.prefix
