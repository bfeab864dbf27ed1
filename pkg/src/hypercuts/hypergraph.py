"""Vertex-weighted, multi-cost hypergraphs and the contraction primitive.

A hypergraph holds n vertices (ids 0..n-1), an ordered list of hyperedges
with stable ids 0..m-1 (duplicates allowed, each with its own id), a vector
of non-negative integer costs per edge (one entry per cost criterion) and a
vector of non-negative integer weights per vertex (one entry per weight
criterion).  Costs and weights are exact integers throughout: dominance and
budget comparisons never involve floating point.

Contraction is performed on a ContractionState (a union-find image over an
immutable base hypergraph); algorithms clone states, never the hypergraph.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

__all__ = [
    "Cut",
    "KPartition",
    "Hypergraph",
    "ContractionState",
    "InstanceError",
    "INFEASIBLE",
    "contract",
    "contract_edge",
    "delta",
    "delta_partition",
    "cut_cost",
    "load_instance",
    "save_instance",
]


class InstanceError(ValueError):
    """Raised for malformed instance documents or invalid constructions."""


class _Infeasible:
    """Distinguished 'no feasible solution' outcome (not an error)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFEASIBLE"

    def __bool__(self):
        return False


INFEASIBLE = _Infeasible()


@dataclass(frozen=True)
class Cut:
    """A cut as a canonical (sorted, deduplicated) tuple of original edge ids."""

    edge_ids: tuple[int, ...]

    @staticmethod
    def of(ids) -> "Cut":
        return Cut(tuple(sorted(set(ids))))

    @staticmethod
    def from_mask(mask: int) -> "Cut":
        ids = []
        i = 0
        while mask:
            if mask & 1:
                ids.append(i)
            mask >>= 1
            i += 1
        return Cut(tuple(ids))

    def mask(self) -> int:
        m = 0
        for i in self.edge_ids:
            m |= 1 << i
        return m

    def __iter__(self):
        return iter(self.edge_ids)

    def __len__(self):
        return len(self.edge_ids)

    def __contains__(self, eid):
        return eid in self.edge_ids


@dataclass(frozen=True)
class KPartition:
    """Vertex labelling into parts 0..k-1.  Proper iff every label is used."""

    labels: tuple[int, ...]
    k: int

    def is_proper(self) -> bool:
        return set(self.labels) == set(range(self.k))


class Hypergraph:
    """Immutable hypergraph with per-edge cost vectors and per-vertex weights."""

    def __init__(self, n, edges, edge_costs=None, vertex_weights=None,
                 t_costs=None, t_weights=None):
        if n < 1:
            raise InstanceError("vertex count must be positive")
        self.n = n
        self.edges = []
        for e in edges:
            vs = tuple(sorted(set(e)))
            if len(vs) < 2:
                raise InstanceError(f"hyperedge {e!r} has fewer than 2 distinct vertices")
            if vs[0] < 0 or vs[-1] >= n:
                raise InstanceError(f"hyperedge {e!r} mentions an unknown vertex")
            self.edges.append(vs)
        self.m = len(self.edges)

        if edge_costs is None:
            edge_costs = [(1,) * (t_costs if t_costs is not None else 1)] * self.m
        if len(edge_costs) != self.m:
            raise InstanceError("edge_costs must have one row per edge")
        if t_costs is not None:
            self.t_costs = t_costs
        else:
            self.t_costs = len(edge_costs[0]) if self.m else 0
        self.edge_costs = []
        for row in edge_costs:
            row = tuple(int(c) for c in row)
            if len(row) != self.t_costs:
                raise InstanceError("cost rows must all have the same length")
            if any(c < 0 for c in row):
                raise InstanceError("edge costs must be non-negative")
            self.edge_costs.append(row)

        if vertex_weights is None:
            vertex_weights = [(() if t_weights is None else (0,) * t_weights)] * n
        if len(vertex_weights) != n:
            raise InstanceError("vertex_weights must have one row per vertex")
        if t_weights is not None:
            self.t_weights = t_weights
        else:
            self.t_weights = len(vertex_weights[0]) if n else 0
        self.vertex_weights = []
        for row in vertex_weights:
            row = tuple(int(w) for w in row)
            if len(row) != self.t_weights:
                raise InstanceError("weight rows must all have the same length")
            if any(w < 0 for w in row):
                raise InstanceError("vertex weights must be non-negative")
            self.vertex_weights.append(row)

        # Bitmask per edge over vertex ids; used by every algorithm hot path.
        self.edge_masks = []
        for vs in self.edges:
            m = 0
            for v in vs:
                m |= 1 << v
            self.edge_masks.append(m)
        self.full_mask = (1 << n) - 1

    @property
    def rank(self) -> int:
        """Size of the largest hyperedge (2 for an edgeless hypergraph)."""
        return max((len(e) for e in self.edges), default=2)

    def costs_by_criterion(self):
        """Transpose of edge_costs: one integer list per criterion."""
        return [[row[i] for row in self.edge_costs] for i in range(self.t_costs)]

    def cut_costs(self, cut: Cut) -> tuple[int, ...]:
        totals = [0] * self.t_costs
        for eid in cut.edge_ids:
            row = self.edge_costs[eid]
            for i in range(self.t_costs):
                totals[i] += row[i]
        return tuple(totals)

    def __repr__(self):
        return (f"Hypergraph(n={self.n}, m={self.m}, rank={self.rank}, "
                f"t_costs={self.t_costs}, t_weights={self.t_weights})")


class ContractionState:
    """Union-find image of a hypergraph under a sequence of contractions.

    The representative of a supervertex is the minimum original vertex id it
    contains, which gives a canonical, contraction-order-independent naming.
    Merged weights are maintained additively per supervertex.
    """

    def __init__(self, base: Hypergraph):
        self.base = base
        self.parent = list(range(base.n))
        self.comp_mask = {v: 1 << v for v in range(base.n)}
        self.weight = {v: list(base.vertex_weights[v]) for v in range(base.n)}

    def clone(self) -> "ContractionState":
        other = ContractionState.__new__(ContractionState)
        other.base = self.base
        other.parent = list(self.parent)
        other.comp_mask = dict(self.comp_mask)
        other.weight = {r: list(w) for r, w in self.weight.items()}
        return other

    def find(self, v: int) -> int:
        parent = self.parent
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    @property
    def live_count(self) -> int:
        return len(self.comp_mask)

    def roots(self) -> list[int]:
        return sorted(self.comp_mask)

    def merged_weight(self, root: int) -> tuple[int, ...]:
        return tuple(self.weight[self.find(root)])

    def merge(self, roots) -> int:
        """Merge the given supervertices; returns the surviving root."""
        roots = sorted({self.find(r) for r in roots})
        target = roots[0]
        for r in roots[1:]:
            self.parent[r] = target
            self.comp_mask[target] |= self.comp_mask.pop(r)
            wt = self.weight.pop(r)
            tw = self.weight[target]
            for i, w in enumerate(wt):
                tw[i] += w
        return target

    def edge_alive(self, eid: int) -> bool:
        """An edge is alive iff its endpoints map to >= 2 supervertices."""
        em = self.base.edge_masks[eid]
        root = self.find(self.base.edges[eid][0])
        return bool(em & ~self.comp_mask[root])

    def alive_edges(self) -> list[int]:
        return [eid for eid in range(self.base.m) if self.edge_alive(eid)]

    def edge_roots(self, eid: int) -> set[int]:
        return {self.find(v) for v in self.base.edges[eid]}


def contract(state: ContractionState, vertices) -> ContractionState:
    """Contract the supervertices met by ``vertices`` into one (in place).

    Edges that end up inside the merged supervertex die; merged weights add.
    A singleton (or empty) set is a no-op.  Returns the same state.
    """
    vs = list(vertices)
    for v in vs:
        if not 0 <= v < state.base.n:
            raise InstanceError(f"unknown vertex id {v}")
    if vs:
        state.merge(vs)
    return state


def contract_edge(state: ContractionState, eid: int) -> ContractionState:
    if not 0 <= eid < state.base.m:
        raise InstanceError(f"unknown edge id {eid}")
    return contract(state, state.base.edges[eid])


def delta(state: ContractionState, roots, lenient: bool = False) -> Cut:
    """Cut of alive original edges crossing (roots, complement).

    ``roots`` is a set of supervertex representatives.  The strict variant
    rejects the empty set and the full set (no cut is induced); algorithms
    whose base case samples arbitrary subsets pass ``lenient=True`` and get
    the empty cut for those degenerate inputs.
    """
    side = 0
    for r in roots:
        rr = state.find(r)
        if rr not in state.comp_mask:
            raise InstanceError(f"{r} is not a live supervertex")
        side |= state.comp_mask[rr]
    if not lenient and (side == 0 or side == state.base.full_mask):
        raise InstanceError("delta needs a nonempty proper supervertex set")
    other = state.base.full_mask & ~side
    ids = [eid for eid, em in enumerate(state.base.edge_masks)
           if (em & side) and (em & other)]
    return Cut(tuple(ids))


def delta_partition(G: Hypergraph, partition: KPartition) -> Cut:
    """Cut of edges whose vertex labels are non-constant under the partition."""
    labels = partition.labels
    if len(labels) != G.n:
        raise InstanceError("partition must label every vertex")
    ids = []
    for eid, vs in enumerate(G.edges):
        first = labels[vs[0]]
        if any(labels[v] != first for v in vs[1:]):
            ids.append(eid)
    return Cut(tuple(ids))


def cut_cost(G: Hypergraph, cut: Cut, criterion: int) -> int:
    if not 0 <= criterion < max(G.t_costs, 1):
        raise InstanceError(f"criterion {criterion} out of range")
    total = 0
    for eid in cut.edge_ids:
        if not 0 <= eid < G.m:
            raise InstanceError(f"edge id {eid} out of range")
        total += G.edge_costs[eid][criterion]
    return total


_FIELDS = ("n", "t_costs", "t_weights", "edges", "edge_costs", "vertex_weights")


def load_instance(data) -> Hypergraph:
    """Parse an instance document (JSON bytes/str or an already-parsed dict).

    Size-1 hyperedges are dropped with a warning (they cross no cut); edge
    ids are re-numbered 0..m-1 over the surviving edges.
    """
    if isinstance(data, (bytes, bytearray, str)):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"malformed instance document: {exc}") from exc
    else:
        doc = data
    if not isinstance(doc, dict):
        raise InstanceError("instance document must be a JSON object")
    missing = [f for f in _FIELDS if f not in doc]
    if missing:
        raise InstanceError(f"instance document missing fields: {missing}")

    n = doc["n"]
    if len(doc["edge_costs"]) != len(doc["edges"]):
        raise InstanceError("edge_costs must have one row per edge")
    edges, costs = [], []
    for idx, e in enumerate(doc["edges"]):
        if len(e) == 0:
            raise InstanceError(f"edge {idx} is empty")
        if len(set(e)) == 1:
            warnings.warn(f"dropping size-1 hyperedge {idx} (crosses no cut)",
                          stacklevel=2)
            continue
        edges.append(e)
        costs.append(doc["edge_costs"][idx])

    G = Hypergraph(n, edges, costs, doc["vertex_weights"],
                   t_costs=doc["t_costs"], t_weights=doc["t_weights"])
    return G


def save_instance(G: Hypergraph) -> bytes:
    doc = {
        "n": G.n,
        "t_costs": G.t_costs,
        "t_weights": G.t_weights,
        "edges": [list(e) for e in G.edges],
        "edge_costs": [list(c) for c in G.edge_costs],
        "vertex_weights": [list(w) for w in G.vertex_weights],
    }
    return json.dumps(doc, sort_keys=True).encode()
