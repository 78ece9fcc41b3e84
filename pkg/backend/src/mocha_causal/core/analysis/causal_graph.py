"""
Thresholded causal graphs using NetworkX.

Turns structural weights into binary adjacency snapshots with cycle
diagnostics. Thresholding is for interpretation only and never enters the
training loss.
"""

import logging
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from ..graph_learner import StructuralWeights, edge_activation
from ..hyperparameters import HyperParameters

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CausalGraph:
    """
    Binary adjacency between event types at time ``t``.

    Attributes:
        t: Query time of the snapshot.
        A: (K, K) integer adjacency, ``A[u, v] = 1`` for an edge ``u -> v``.
        activation: (K, K) edge activations the threshold was applied to.
        is_dag: True when ``A`` has no directed cycle.
        cycle_edges: Edges lying on at least one directed cycle.
    """

    t: float
    A: np.ndarray
    activation: np.ndarray
    is_dag: bool
    cycle_edges: list[tuple[int, int]] = field(default_factory=list)

    @property
    def num_types(self) -> int:
        return int(self.A.shape[0])

    def edges(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in zip(*np.nonzero(self.A))]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.A[u, v])

    def to_networkx(self) -> nx.DiGraph:
        """Directed graph with an ``activation`` attribute on every edge."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.num_types))
        for u, v in self.edges():
            graph.add_edge(u, v, activation=float(self.activation[u, v]))
        return graph


def find_cycle_edges(adjacency: np.ndarray) -> list[tuple[int, int]]:
    """Edges on directed cycles: self-loops plus edges inside a non-trivial SCC."""
    graph = nx.from_numpy_array(np.asarray(adjacency), create_using=nx.DiGraph)
    component_of: dict[int, int] = {}
    for index, component in enumerate(nx.strongly_connected_components(graph)):
        for node in component:
            component_of[node] = index if len(component) > 1 else -1 - node
    cycle_edges = [
        (int(u), int(v))
        for u, v in graph.edges()
        if u == v or component_of[u] == component_of[v]
    ]
    return sorted(cycle_edges)


def threshold_graph(
    Wt: StructuralWeights,
    hp: HyperParameters,
    theta: float | None = None,
    beta: float | None = None,
) -> CausalGraph:
    """
    Keep the edges whose activation exceeds the threshold.

    ``theta`` and ``beta`` default to the values in ``hp``.
    """
    theta = hp.theta if theta is None else theta
    beta = hp.beta if beta is None else beta
    activation = edge_activation(Wt.numpy(), beta)
    adjacency = (activation > theta).astype(np.int64)
    cycle_edges = find_cycle_edges(adjacency)
    if cycle_edges:
        logger.debug(f"Graph at t={Wt.t} has {len(cycle_edges)} edges on cycles")
    return CausalGraph(
        t=Wt.t,
        A=adjacency,
        activation=activation,
        is_dag=not cycle_edges,
        cycle_edges=cycle_edges,
    )


def path_count_matrix(A: np.ndarray, order: int) -> np.ndarray:
    """Number of directed walks of length ``order`` between every pair (``A^order``)."""
    return np.linalg.matrix_power(np.asarray(A, dtype=np.int64), order)
