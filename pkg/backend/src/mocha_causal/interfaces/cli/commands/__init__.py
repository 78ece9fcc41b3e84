"""Command modules; each registers itself on ``cli_app`` when imported."""
