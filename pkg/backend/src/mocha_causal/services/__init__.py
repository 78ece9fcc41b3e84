"""Workflows built on the core model: training, simulation, evaluation and experiments."""
