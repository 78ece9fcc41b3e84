"""
End-to-end tests of the mocha command line.

A small planted chain corpus is generated once per module and carried
through training, evaluation, graph export, path matching and simulation.
"""

import json
from pathlib import Path

import pytest
from mocha_causal.interfaces.cli import run
from mocha_causal.services.evaluation_service import read_paths
from mocha_causal.services.simulation_service import read_generator
from mocha_causal.utils.errors import EXIT_DATA, EXIT_OK, EXIT_USAGE
from mocha_causal.utils.io.corpus_io import read_corpus
from mocha_causal.utils.io.records import read_records

pytestmark = pytest.mark.integration

TINY_MODEL = ["--K", "3", "--d", "2", "--d-attn", "3", "--hidden", "4", "--L", "2", "--M", "4"]


@pytest.fixture(scope="module")
def workdir(tmp_path_factory) -> Path:
    return tmp_path_factory.mktemp("cli")


@pytest.fixture(scope="module")
def config_args(workdir: Path) -> list[str]:
    """Keep test runs from writing to the user's log file."""
    path = workdir / "test_config.yaml"
    path.write_text("logging: null\nevaluation:\n  max_workers: 1\n", encoding="utf-8")
    return ["-c", str(path)]


def mocha(config_args: list[str], *args: str) -> int:
    return run([*config_args, *args])


@pytest.fixture(scope="module")
def corpus(workdir: Path, config_args: list[str]) -> Path:
    out = workdir / "corpus.jsonl"
    code = mocha(
        config_args,
        "gen-synthetic",
        "--out", str(out),
        "--chain", "3",
        "--n", "6",
        "--horizon", "8",
        "--seed", "5",
        "--edges-out", str(workdir / "edges.jsonl"),
        "--paths-out", str(workdir / "paths.jsonl"),
        "--generator-out", str(workdir / "generator.yaml"),
    )  # fmt: skip
    assert code == EXIT_OK
    return out


@pytest.fixture(scope="module")
def checkpoint(workdir: Path, config_args: list[str], corpus: Path) -> Path:
    out = workdir / "model.ckpt"
    code = mocha(
        config_args,
        "train",
        "--corpus", str(corpus),
        "--out", str(out),
        "--epochs", "2",
        "--batch-size", "3",
        *TINY_MODEL,
    )  # fmt: skip
    assert code == EXIT_OK
    return out


def test_gen_synthetic_outputs(workdir: Path, corpus: Path):
    """Test the corpus and the planted ground truth files."""
    sequences = read_corpus(corpus)
    assert len(sequences) == 6
    assert all(seq.horizon == 8.0 for seq in sequences)
    assert read_records(workdir / "edges.jsonl") == [
        {"u": 0, "v": 1, "weight": 0.8},
        {"u": 1, "v": 2, "weight": 0.8},
    ]
    assert [p.types for p in read_paths(workdir / "paths.jsonl")] == [(0, 1, 2)]
    assert read_generator(workdir / "generator.yaml").num_types == 3


def test_train_writes_log(checkpoint: Path):
    """Test the training log beside the checkpoint."""
    records = read_records(checkpoint.with_name("model.ckpt.log.jsonl"))
    splits = {r["split"] for r in records}
    assert {"train", "final"} <= splits
    assert records[-1]["split"] == "final"


def test_eval_matches_training_loss(workdir: Path, config_args, corpus: Path, checkpoint: Path):
    """Test that the evaluated NLL equals the final training record."""
    summary_path = workdir / "eval.json"
    records_path = workdir / "eval.jsonl"
    code = mocha(
        config_args,
        "eval",
        "--checkpoint", str(checkpoint),
        "--corpus", str(corpus),
        "--out", str(summary_path),
        "--records", str(records_path),
        "--grid-points", "50",
    )  # fmt: skip
    assert code == EXIT_OK
    summary = json.loads(summary_path.read_text())
    final = read_records(checkpoint.with_name("model.ckpt.log.jsonl"))[-1]
    assert summary["nll"] == pytest.approx(final["nll"], rel=1e-12)
    assert summary["num_sequences"] == 6
    assert len(read_records(records_path)) == 6


def test_graphs_export(workdir: Path, config_args, corpus: Path, checkpoint: Path):
    """Test snapshot records and DOT files for two times."""
    out = workdir / "graphs.jsonl"
    dot_dir = workdir / "dot"
    code = mocha(
        config_args,
        "graphs",
        "--checkpoint", str(checkpoint),
        "--corpus", str(corpus),
        "--time", "1", "--time", "4",
        "--out", str(out),
        "--dot-dir", str(dot_dir),
    )  # fmt: skip
    assert code == EXIT_OK
    snapshots = read_records(out)
    assert len(snapshots) == 12
    assert {s["t"] for s in snapshots} == {1.0, 4.0}
    assert all(len(s["W"]) == 3 for s in snapshots)
    assert len(list(dot_dir.glob("*.dot"))) == 12


def test_match_paths(workdir: Path, config_args, corpus: Path, checkpoint: Path):
    """Test the path matching summary for the planted chain."""
    out = workdir / "paths.json"
    code = mocha(
        config_args,
        "match-paths",
        "--checkpoint", str(checkpoint),
        "--corpus", str(corpus),
        "--paths", str(workdir / "paths.jsonl"),
        "--terminal-type", "2",
        "--out", str(out),
    )  # fmt: skip
    assert code == EXIT_OK
    summary = json.loads(out.read_text())
    assert summary["terminal_type"] == 2
    (match,) = summary["paths"]
    assert match["path"] == [0, 1, 2]
    assert 0.0 <= match["rate"] <= 1.0


def test_match_paths_rejects_wrong_terminal(workdir: Path, config_args, corpus, checkpoint):
    """Test a declared path that does not end in the terminal type."""
    code = mocha(
        config_args,
        "match-paths",
        "--checkpoint", str(checkpoint),
        "--corpus", str(corpus),
        "--paths", str(workdir / "paths.jsonl"),
        "--terminal-type", "1",
    )  # fmt: skip
    assert code == EXIT_DATA


def test_simulate_from_checkpoint(workdir: Path, config_args, checkpoint: Path):
    """Test simulating a corpus from the trained model."""
    out = workdir / "simulated.jsonl"
    code = mocha(
        config_args,
        "simulate",
        "--checkpoint", str(checkpoint),
        "--out", str(out),
        "--horizon", "3",
        "--n", "2",
        "--max-events", "50",
        "--seed", "1",
    )  # fmt: skip
    assert code == EXIT_OK
    simulated = read_corpus(out, num_types=3)
    assert len(simulated) == 2
    assert all(len(seq) <= 50 for seq in simulated)


def test_simulate_from_generator(workdir: Path, config_args, corpus: Path):
    """Test simulating from the written generator file."""
    out = workdir / "from_generator.jsonl"
    code = mocha(
        config_args,
        "simulate",
        "--generator", str(workdir / "generator.yaml"),
        "--out", str(out),
        "--horizon", "5",
        "--n", "3",
    )  # fmt: skip
    assert code == EXIT_OK
    assert len(read_corpus(out)) == 3


@pytest.mark.parametrize("sources", ["both", "neither"])
def test_simulate_needs_one_source(workdir: Path, config_args, checkpoint: Path, sources):
    """Test that exactly one simulation source is required."""
    args = ["simulate", "--out", str(workdir / "x.jsonl"), "--horizon", "2"]
    if sources == "both":
        args += ["--checkpoint", str(checkpoint), "--generator", str(workdir / "generator.yaml")]
    assert mocha(config_args, *args) == EXIT_USAGE


def test_missing_corpus_is_usage_error(workdir: Path, config_args):
    """Test a corpus path that does not exist."""
    code = mocha(
        config_args, "train", "--corpus", str(workdir / "absent.jsonl"), "--out", "x.ckpt"
    )
    assert code == EXIT_USAGE


def test_malformed_corpus_is_data_error(workdir: Path, config_args):
    """Test a corpus file that cannot be parsed."""
    bad = workdir / "bad.jsonl"
    bad.write_text('{"T": 2.0, "events": [{"t": 1.0, "k": 0}]}\n{broken\n', encoding="utf-8")
    code = mocha(config_args, "train", "--corpus", str(bad), "--out", str(workdir / "b.ckpt"))
    assert code == EXIT_DATA


def test_corrupt_checkpoint_is_data_error(workdir: Path, config_args, corpus: Path):
    """Test evaluating with a damaged checkpoint."""
    bad = workdir / "bad.ckpt"
    bad.write_bytes(b"MOCHACKP" + b"\x00" * 64)
    code = mocha(config_args, "eval", "--checkpoint", str(bad), "--corpus", str(corpus))
    assert code == EXIT_DATA


def test_version(config_args):
    """Test the version flag."""
    assert mocha(config_args, "--version") == EXIT_OK


def test_gradcheck_sampled(config_args):
    """Test a sampled gradient check on a toy problem."""
    assert mocha(config_args, "gradcheck", "--seed", "7", "--K", "3", "--max-entries", "3") == EXIT_OK


@pytest.mark.slow
def test_gradcheck_full(config_args):
    """Test the full gradient check over every parameter entry."""
    assert mocha(config_args, "gradcheck", "--seed", "7", "--K", "3") == EXIT_OK
