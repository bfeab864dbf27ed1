"""Random-contraction algorithms for multicriteria hypergraph cuts.

Library layout:

* ``hypergraph``      core types (Hypergraph, ContractionState, Cut) and the
                      contraction/cut primitives plus instance (de)serialization
* ``multiobjective``  edge-cost budgeted min-cut, enumeration and pareto pipelines
* ``node_budgeted``   node-weight budgeted variants and plain hypergraph min-cut
* ``size_constrained`` size-constrained min-k-cut
* ``oracle``          exhaustive ground truth for small instances
* ``analysis``        closed-form checks and instance generators
* ``harness``         Monte-Carlo floor estimation against the oracles
* ``cli``             the ``hypercuts`` command-line front end
"""

from .hypergraph import (Cut, KPartition, Hypergraph, ContractionState,
                         InstanceError, INFEASIBLE, contract, delta,
                         delta_partition, cut_cost, load_instance, save_instance)

__version__ = "0.1.0"

__all__ = [
    "Cut", "KPartition", "Hypergraph", "ContractionState", "InstanceError",
    "INFEASIBLE", "contract", "delta", "delta_partition", "cut_cost",
    "load_instance", "save_instance", "__version__",
]
