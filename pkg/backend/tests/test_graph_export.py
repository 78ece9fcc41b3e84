"""Tests for graph snapshot export."""

from pathlib import Path

import torch
from mocha_causal.core.graph_learner import StructuralWeights
from mocha_causal.core.hyperparameters import HyperParameters
from mocha_causal.utils.io.graph_export import (
    GraphSnapshot,
    snapshot_dot_source,
    snapshot_to_dot,
    write_snapshots,
)
from mocha_causal.utils.io.records import read_records

CHAIN = [[0.0, 2.0, 0.0], [0.0, 0.0, 2.0], [0.1, 0.0, 0.0]]


def _snapshot(theta: float | None = None) -> GraphSnapshot:
    hp = HyperParameters(num_types=3, beta=1.0, theta=0.5)
    Wt = StructuralWeights(t=1.5, W=torch.tensor(CHAIN, dtype=torch.float64))
    return GraphSnapshot.build(Wt, hp, theta=theta, seq_id="s1")


def test_snapshot_record():
    """Test the JSON record of one snapshot."""
    record = _snapshot().to_dict()
    assert record["seq_id"] == "s1"
    assert record["t"] == 1.5
    assert record["W"] == CHAIN
    assert record["A"] == [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    assert record["is_dag"] is True
    assert record["cycle_edges"] == []
    assert record["theta"] == 0.5


def test_theta_override_in_record():
    """Test that a lower threshold admits the weak back edge and its cycle."""
    record = _snapshot(theta=0.05).to_dict()
    assert record["theta"] == 0.05
    assert record["is_dag"] is False
    assert record["cycle_edges"] == [[0, 1], [1, 2], [2, 0]]


def test_write_snapshots(temp_dir: Path):
    """Test writing snapshots as JSON lines."""
    path = temp_dir / "graphs.jsonl"
    write_snapshots(path, [_snapshot(), _snapshot(theta=0.05)])
    records = read_records(path)
    assert len(records) == 2
    assert records[1]["theta"] == 0.05


def test_dot_source_has_only_present_edges():
    """Test DOT text for the thresholded chain."""
    source = snapshot_dot_source(_snapshot().graph)
    assert "type_0 -> type_1" in source
    assert "type_1 -> type_2" in source
    assert "type_2 -> type_0" not in source
    assert "0.8647" in source


def test_snapshot_to_dot(temp_dir: Path):
    """Test writing a DOT file with custom names."""
    path = temp_dir / "dot" / "s1.dot"
    snapshot_to_dot(_snapshot().graph, path, type_names=["A", "B", "C"])
    text = path.read_text()
    assert "A -> B" in text
    assert "B -> C" in text
