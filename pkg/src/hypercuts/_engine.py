"""Shared plumbing for the contraction-walk engines.

States are partitions of the vertex set, represented as tuples of disjoint
vertex bitmasks sorted by lowest set bit.  The tuple form is hashable, which
lets the repeated-trial solvers memoize per-state data (present edges,
sampling tables) across Monte-Carlo runs on the same instance.
"""

from __future__ import annotations


def initial_comps(n: int) -> tuple[int, ...]:
    return tuple(1 << v for v in range(n))


def contract_comps(comps, edge_mask: int) -> tuple[int, ...]:
    """Merge every component hit by ``edge_mask`` into one."""
    merged = 0
    rest = []
    for c in comps:
        if c & edge_mask:
            merged |= c
        else:
            rest.append(c)
    rest.append(merged)
    rest.sort(key=lambda c: c & -c)
    return tuple(rest)


def merge_comp_subset(comps, victim_mask: int) -> tuple[int, ...]:
    """Merge all components contained in ``victim_mask`` into one."""
    merged = 0
    rest = []
    for c in comps:
        if c & victim_mask:
            merged |= c
        else:
            rest.append(c)
    if merged:
        rest.append(merged)
        rest.sort(key=lambda c: c & -c)
    return tuple(rest)


def present_edge_ids(edge_masks, comps) -> list[int]:
    """Ids of edges whose endpoints span at least two components."""
    out = []
    for eid, em in enumerate(edge_masks):
        low = em & -em
        for c in comps:
            if c & low:
                if em & ~c:
                    out.append(eid)
                break
    return out


def delta_mask(edge_masks, side: int, full: int) -> int:
    """Bitmask of edge ids crossing (side, complement)."""
    other = full & ~side
    out = 0
    bit = 1
    for em in edge_masks:
        if (em & side) and (em & other):
            out |= bit
        bit <<= 1
    return out
