"""
Core domain logic: event data, parameters, the dynamic graph learner,
the decay kernel, the multi-order intensity and the training objective.
"""

from .analysis import CausalGraph, path_count_matrix, threshold_graph
from .decay import decay, kernel_profile
from .encoding import TypeStateAtTime, build_embeddings, positional_encoding, type_state
from .events import Event, EventSequence, validate_corpus, validate_sequence
from .graph_learner import (
    StructuralWeights,
    acyclicity_value,
    attention_scores,
    edge_activation,
    sparsity_value,
    structural_weights,
)
from .hyperparameters import HyperParameters, ModelVariant
from .intensity import (
    IntensityBreakdown,
    chain_influence,
    first_order_influence,
    order_intensity_bruteforce,
    order_intensity_dp,
    total_intensity,
)
from .likelihood import (
    GradientTape,
    LossBreakdown,
    gradient_check,
    integration_grid,
    loss_and_gradient,
    nll,
    regularizers,
)
from .model import MochaModel, QueryPoints
from .parameters import ModelParameters, init_parameters

__all__ = [
    "CausalGraph",
    "Event",
    "EventSequence",
    "GradientTape",
    "HyperParameters",
    "IntensityBreakdown",
    "LossBreakdown",
    "MochaModel",
    "ModelParameters",
    "ModelVariant",
    "QueryPoints",
    "StructuralWeights",
    "TypeStateAtTime",
    "acyclicity_value",
    "attention_scores",
    "build_embeddings",
    "chain_influence",
    "decay",
    "edge_activation",
    "first_order_influence",
    "gradient_check",
    "init_parameters",
    "integration_grid",
    "kernel_profile",
    "loss_and_gradient",
    "nll",
    "order_intensity_bruteforce",
    "order_intensity_dp",
    "path_count_matrix",
    "positional_encoding",
    "regularizers",
    "sparsity_value",
    "structural_weights",
    "threshold_graph",
    "total_intensity",
    "type_state",
    "validate_corpus",
    "validate_sequence",
]
