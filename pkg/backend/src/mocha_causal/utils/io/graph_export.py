"""Graph snapshot export: JSONL records and DOT text via pydot."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import networkx as nx
import numpy as np

from ...core.analysis.causal_graph import CausalGraph, threshold_graph
from ...core.graph_learner import StructuralWeights
from ...core.hyperparameters import HyperParameters
from .records import write_records

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraphSnapshot:
    """Weights and thresholded graph at one time, with the threshold used."""

    t: float
    W: np.ndarray
    graph: CausalGraph
    beta: float
    theta: float
    seq_id: str = ""

    @classmethod
    def build(
        cls,
        Wt: StructuralWeights,
        hp: HyperParameters,
        theta: float | None = None,
        seq_id: str = "",
    ) -> "GraphSnapshot":
        theta = hp.theta if theta is None else theta
        return cls(
            t=Wt.t,
            W=Wt.numpy(),
            graph=threshold_graph(Wt, hp, theta),
            beta=hp.beta,
            theta=theta,
            seq_id=seq_id,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "seq_id": self.seq_id,
            "t": self.t,
            "W": self.W.tolist(),
            "A": self.graph.A.tolist(),
            "is_dag": self.graph.is_dag,
            "cycle_edges": [list(e) for e in self.graph.cycle_edges],
            "beta": self.beta,
            "theta": self.theta,
        }


def write_snapshots(path: Path, snapshots: list[GraphSnapshot]) -> None:
    write_records(path, (s.to_dict() for s in snapshots))
    logger.info(f"Wrote {len(snapshots)} graph snapshots to {path}")


def _dot_graph(graph: CausalGraph, type_names: list[str] | None = None) -> nx.DiGraph:
    names = type_names or [f"type_{k}" for k in range(graph.num_types)]
    dot = nx.DiGraph(name=f"causal_graph_t_{graph.t:.4f}")
    dot.add_nodes_from(names)
    for u, v in graph.edges():
        dot.add_edge(names[u], names[v], label=f"{graph.activation[u, v]:.4f}")
    return dot


def snapshot_dot_source(graph: CausalGraph, type_names: list[str] | None = None) -> str:
    """DOT text with only the edges present in ``A``, labelled with their activation."""
    return nx.drawing.nx_pydot.to_pydot(_dot_graph(graph, type_names)).to_string()


def snapshot_to_dot(
    graph: CausalGraph, output_path: Path, type_names: list[str] | None = None
) -> None:
    """Write one snapshot as a DOT file."""
    output_path.parent.mkdir(parents=True, exist_ok=True)
    try:
        nx.drawing.nx_pydot.write_dot(_dot_graph(graph, type_names), str(output_path))
        logger.info(f"Exported causal graph to {output_path}")
    except Exception as e:
        logger.error(f"Error exporting graph to {output_path}: {e!s}")
        raise
