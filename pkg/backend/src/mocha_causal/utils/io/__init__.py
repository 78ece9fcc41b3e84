"""File formats: corpora, checkpoints, graph snapshots and records."""
