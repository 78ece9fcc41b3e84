"""
Training objective: negative log-likelihood plus acyclicity and sparsity terms.

The compensator is integrated with the trapezoidal rule on a grid whose knots
are ``0``, every event time and the horizon, with ``M`` uniform sub-points per
interval. Each interval is evaluated from its right limit at the left knot to
its left limit at the right knot, so the jumps of the intensity at events fall
on interval boundaries.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import torch

from ..utils.errors import EmptyCorpusError, GradientCheckError, NonFiniteLossError
from .events import EventSequence, validate_sequence
from .graph_learner import acyclicity_value, sparsity_value
from .hyperparameters import HyperParameters
from .model import MochaModel, QueryPoints
from .parameters import TENSOR_NAMES, DTYPE, ModelParameters

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntegrationGrid:
    """
    Quadrature grid over [0, T].

    Attributes:
        queries: All grid points, ``points_per_interval`` per interval.
        num_intervals: Number of non-empty intervals between knots.
        points_per_interval: ``M + 2``.
        kept: (N + 1,) marks which knot intervals have positive length.
    """

    queries: QueryPoints
    num_intervals: int
    points_per_interval: int
    kept: np.ndarray

    def interval_times(self) -> np.ndarray:
        return self.queries.times.reshape(self.num_intervals, self.points_per_interval)


def integration_grid(seq: EventSequence, substeps: int) -> IntegrationGrid:
    """Build the trapezoidal grid for ``seq`` with ``substeps`` interior points per interval."""
    knots = np.concatenate([[0.0], seq.times, [seq.horizon]])
    left, right = knots[:-1], knots[1:]
    keep = right > left
    left, right = left[keep], right[keep]
    fractions = np.linspace(0.0, 1.0, substeps + 2)
    times = left[:, None] + (right - left)[:, None] * fractions[None, :]
    # endpoints must equal the knots exactly for the one-sided limits
    times[:, 0] = left
    times[:, -1] = right
    inclusive = np.zeros_like(times, dtype=bool)
    inclusive[:, 0] = True
    return IntegrationGrid(
        queries=QueryPoints(times.reshape(-1), inclusive.reshape(-1)),
        num_intervals=int(keep.sum()),
        points_per_interval=substeps + 2,
        kept=keep,
    )


@dataclass(frozen=True)
class LossBreakdown:
    """Loss components; ``total`` is composed as ``(nll + acyclic) + sparse``."""

    nll: float
    acyclic: float
    sparse: float
    total: float

    @classmethod
    def compose(cls, nll: float, acyclic: float, sparse: float) -> "LossBreakdown":
        return cls(nll=nll, acyclic=acyclic, sparse=sparse, total=nll + acyclic + sparse)

    def is_finite(self) -> bool:
        return bool(np.isfinite([self.nll, self.acyclic, self.sparse, self.total]).all())

    def to_dict(self) -> dict[str, float]:
        return {
            "nll": self.nll,
            "acyclic": self.acyclic,
            "sparse": self.sparse,
            "total": self.total,
        }


@dataclass(frozen=True)
class SequenceLoss:
    """Differentiable loss terms of one sequence."""

    nll: torch.Tensor
    acyclic: torch.Tensor
    sparse: torch.Tensor
    integral: torch.Tensor
    log_likelihood_events: torch.Tensor


def sequence_loss(
    seq: EventSequence, params: ModelParameters, hp: HyperParameters
) -> SequenceLoss:
    """
    Differentiable NLL and regularizers of one sequence.

    Raises:
        EmptySequenceError: if ``seq`` has no events and is not flagged empty.
    """
    validate_sequence(seq, hp.num_types)
    model = MochaModel(params, hp)
    grid = integration_grid(seq, hp.integration_substeps)
    events = QueryPoints.exclusive(seq.times)
    result = model.evaluate(seq, QueryPoints.concat(grid.queries, events))

    num_grid = len(grid.queries)
    rate = result.lam[:num_grid].sum(dim=-1)
    shape = (grid.num_intervals, grid.points_per_interval)
    x = torch.as_tensor(grid.queries.times, dtype=DTYPE).reshape(shape)
    integral = torch.trapezoid(rate.reshape(shape), x, dim=-1).sum()

    event_lam = result.lam[num_grid:]
    types = torch.as_tensor(seq.types, dtype=torch.long)
    log_terms = torch.log(event_lam[torch.arange(len(seq)), types]).sum()

    event_weights = result.weights[num_grid:]
    acyclic = hp.gamma_acyclic * acyclicity_value(event_weights).sum()
    sparse = hp.gamma_sparse * sparsity_value(event_weights).sum()
    return SequenceLoss(
        nll=integral - log_terms,
        acyclic=acyclic,
        sparse=sparse,
        integral=integral,
        log_likelihood_events=log_terms,
    )


def nll(seq: EventSequence, params: ModelParameters, hp: HyperParameters) -> float:
    """Negative log-likelihood of ``seq``, without regularizers."""
    with torch.no_grad():
        return float(sequence_loss(seq, params, hp).nll)


def regularizers(
    seq: EventSequence, params: ModelParameters, hp: HyperParameters
) -> tuple[float, float]:
    """Weighted acyclicity and sparsity terms summed over the event times of ``seq``."""
    with torch.no_grad():
        loss = sequence_loss(seq, params, hp)
    return float(loss.acyclic), float(loss.sparse)


def batch_objective(
    batch: Sequence[EventSequence], params: ModelParameters, hp: HyperParameters
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]:
    """Mean NLL, acyclic, sparse and total over ``batch``, summed in input order."""
    if not batch:
        raise EmptyCorpusError("batch must contain at least one sequence")
    nll_sum = acyclic_sum = sparse_sum = torch.zeros((), dtype=DTYPE)
    for seq in batch:
        loss = sequence_loss(seq, params, hp)
        nll_sum = nll_sum + loss.nll
        acyclic_sum = acyclic_sum + loss.acyclic
        sparse_sum = sparse_sum + loss.sparse
    n = len(batch)
    mean_nll, mean_acyclic, mean_sparse = nll_sum / n, acyclic_sum / n, sparse_sum / n
    total = mean_nll + mean_acyclic + mean_sparse
    return mean_nll, mean_acyclic, mean_sparse, total


def evaluate_loss(
    batch: Sequence[EventSequence], params: ModelParameters, hp: HyperParameters
) -> LossBreakdown:
    """Loss breakdown without gradients."""
    with torch.no_grad():
        parts = batch_objective(batch, params, hp)
    return LossBreakdown.compose(*(float(p) for p in parts[:3]))


class GradientTape:
    """
    Records a forward evaluation over leaf copies of the parameters.

    Usage::

        tape = GradientTape(params)
        loss = some_function(tape.watched)
        grads = tape.gradient(loss)
    """

    def __init__(self, params: ModelParameters) -> None:
        self.watched = params.with_grad()

    def gradient(self, target: torch.Tensor) -> ModelParameters:
        """Gradients of the scalar ``target``; tensors it does not depend on get zeros."""
        leaves = [getattr(self.watched, name) for name in TENSOR_NAMES]
        grads = torch.autograd.grad(target, leaves, allow_unused=True)
        return ModelParameters.from_tensors(
            {
                name: torch.zeros_like(leaf) if grad is None else grad.detach()
                for name, leaf, grad in zip(TENSOR_NAMES, leaves, grads, strict=True)
            }
        )


def loss_and_gradient(
    batch: Sequence[EventSequence], params: ModelParameters, hp: HyperParameters
) -> tuple[LossBreakdown, ModelParameters]:
    """
    Mean loss over ``batch`` and its exact gradient.

    Raises:
        NonFiniteLossError: if any loss component is not finite.
    """
    tape = GradientTape(params)
    nll_value, acyclic, sparse, total = batch_objective(batch, tape.watched, hp)
    breakdown = LossBreakdown.compose(float(nll_value), float(acyclic), float(sparse))
    if not breakdown.is_finite():
        raise NonFiniteLossError(f"Loss is not finite: {breakdown.to_dict()}")
    return breakdown, tape.gradient(total)


@dataclass(frozen=True)
class TensorCheck:
    """Finite-difference comparison of one parameter tensor."""

    name: str
    relative_error: float
    entries_checked: int
    passed: bool


@dataclass(frozen=True)
class GradientCheckReport:
    """Per-tensor results of :func:`gradient_check`."""

    checks: list[TensorCheck] = field(default_factory=list)
    tolerance: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def worst(self) -> TensorCheck:
        return max(self.checks, key=lambda c: c.relative_error)

    def raise_for_failure(self) -> None:
        if not self.passed:
            failing = [c.name for c in self.checks if not c.passed]
            raise GradientCheckError(
                f"Analytic gradients disagree with finite differences for {failing} "
                f"(worst relative error {self.worst().relative_error:.3e}, "
                f"tolerance {self.tolerance:.1e})"
            )


def gradient_check(
    batch: Sequence[EventSequence],
    params: ModelParameters,
    hp: HyperParameters,
    step: float,
    tolerance: float,
    max_entries: int | None = None,
    seed: int = 0,
) -> GradientCheckReport:
    """
    Compare analytic gradients of the total loss with central differences.

    The relative error of a tensor is ``|g - g_fd| / max(|g|, |g_fd|)`` over
    the checked entries. ``max_entries`` caps how many entries per tensor are
    perturbed; the subset is drawn with ``seed``.
    """
    _, analytic = loss_and_gradient(batch, params, hp)
    rng = np.random.default_rng(seed)
    base = params.detach()
    checks = []
    for name in TENSOR_NAMES:
        tensor = getattr(base, name)
        flat_count = tensor.numel()
        indices = np.arange(flat_count)
        if max_entries is not None and flat_count > max_entries:
            indices = np.sort(rng.choice(flat_count, size=max_entries, replace=False))
        numeric = np.empty(len(indices))
        for slot, index in enumerate(indices):
            values = []
            for sign in (1.0, -1.0):
                perturbed = tensor.clone()
                perturbed.view(-1)[index] += sign * step
                trial = ModelParameters.from_tensors({**base.tensors(), name: perturbed})
                values.append(evaluate_loss(batch, trial, hp).total)
            numeric[slot] = (values[0] - values[1]) / (2 * step)
        exact = getattr(analytic, name).reshape(-1).numpy()[indices]
        scale = max(np.linalg.norm(exact), np.linalg.norm(numeric))
        error = float(np.linalg.norm(exact - numeric) / scale) if scale > 0 else 0.0
        checks.append(
            TensorCheck(
                name=name,
                relative_error=error,
                entries_checked=len(indices),
                passed=error < tolerance,
            )
        )
        logger.debug(f"gradcheck {name}: relative error {error:.3e}")
    return GradientCheckReport(checks=checks, tolerance=tolerance)


def compensator_increments(
    seq: EventSequence, params: ModelParameters, hp: HyperParameters
) -> np.ndarray:
    """Integrated total intensity over each knot interval, shape (N + 1,)."""
    grid = integration_grid(seq, hp.integration_substeps)
    increments = np.zeros(len(grid.kept))
    if grid.num_intervals == 0:
        return increments
    shape = (grid.num_intervals, grid.points_per_interval)
    with torch.no_grad():
        rate = MochaModel(params, hp).evaluate(seq, grid.queries).lam.sum(dim=-1)
        x = torch.as_tensor(grid.queries.times, dtype=DTYPE).reshape(shape)
        integrals = torch.trapezoid(rate.reshape(shape), x, dim=-1).numpy()
    increments[grid.kept] = integrals
    return increments
