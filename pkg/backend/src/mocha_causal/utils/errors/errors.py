"""Custom exceptions for MOCHA causal point processes.

Every exception carries a stable ``code`` and the process ``exit_code`` the
CLI reports for it: 1 for usage problems, 2 for bad data, 3 for numerical
failures.
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class MochaError(Exception):
    """Base exception for project-related errors."""

    code = "MOCHA_ERROR"
    exit_code = EXIT_USAGE


class ConfigurationError(MochaError):
    """Raised when a configuration file cannot be used."""

    code = "CONFIGURATION"


class HyperParameterError(MochaError):
    """Raised when hyper-parameters fall outside their domains."""

    code = "INVALID_HYPERPARAMETER"


# --- Data errors -----------------------------------------------------------


class DataError(MochaError):
    """Base class for malformed input data."""

    code = "DATA_ERROR"
    exit_code = EXIT_DATA


class SequenceValidationError(DataError):
    """Raised when an event sequence violates its invariants."""

    code = "INVALID_SEQUENCE"

    def __init__(self, message: str, seq_id: str = "") -> None:
        prefix = f"[{seq_id}] " if seq_id else ""
        super().__init__(f"{prefix}{message}")
        self.seq_id = seq_id


class NonMonotonicTimeError(SequenceValidationError):
    """Raised when timestamps are not strictly increasing."""

    code = "NON_MONOTONIC_TIME"


class TypeOutOfRangeError(SequenceValidationError):
    """Raised when an event type index is outside {0, ..., K-1}."""

    code = "TYPE_OUT_OF_RANGE"


class HorizonViolationError(SequenceValidationError):
    """Raised when an event lies outside the observation window [0, T]."""

    code = "HORIZON_VIOLATION"


class EmptySequenceError(SequenceValidationError):
    """Raised when a sequence without events is used where events are required."""

    code = "EMPTY_SEQUENCE"


class EmptyCorpusError(DataError):
    """Raised when a corpus or batch holds no sequences."""

    code = "EMPTY_CORPUS"


class NonIncreasingChainError(DataError):
    """Raised when an event chain is not strictly increasing in time."""

    code = "NON_INCREASING_CHAIN"


class CorpusFormatError(DataError):
    """Raised when a corpus file cannot be parsed."""

    code = "CORPUS_FORMAT"

    def __init__(self, file_path: str, line_number: int, reason: str) -> None:
        super().__init__(f"{file_path}:{line_number}: {reason}")
        self.line_number = line_number


class PathSpecificationError(DataError):
    """Raised when a declared ground-truth causal path is invalid."""

    code = "INVALID_PATH"


class TypeCountMismatchError(DataError):
    """Raised when a corpus uses more event types than a model supports."""

    code = "TYPE_COUNT_MISMATCH"

    def __init__(self, expected: int, found: int) -> None:
        super().__init__(
            f"Model expects {expected} event types but the corpus uses type "
            f"index {found}."
        )


class CheckpointError(DataError):
    """Base class for unreadable checkpoints."""

    code = "CHECKPOINT"


class CheckpointVersionError(CheckpointError):
    """Raised when a checkpoint was written by an unsupported format version."""

    code = "VERSION_MISMATCH"

    def __init__(self, found: int, expected: int) -> None:
        super().__init__(
            f"Checkpoint format version {found} is not supported "
            f"(expected {expected})."
        )


class CorruptCheckpointError(CheckpointError):
    """Raised when a checkpoint is truncated or fails its integrity check."""

    code = "CORRUPT_CHECKPOINT"


# --- Numerical errors ------------------------------------------------------


class NumericalError(MochaError):
    """Base class for numerical failures."""

    code = "NUMERICAL_ERROR"
    exit_code = EXIT_NUMERICAL


class NumericOverflowError(NumericalError):
    """Raised when an intermediate quantity becomes non-finite."""

    code = "NUMERIC_OVERFLOW"


class NonFiniteLossError(NumericalError):
    """Raised when the training objective evaluates to a non-finite value."""

    code = "NON_FINITE_LOSS"


class DivergedError(NumericalError):
    """Raised when training produces non-finite losses for too many epochs."""

    code = "DIVERGED"

    def __init__(self, epoch: int, consecutive: int) -> None:
        super().__init__(
            f"Training diverged at epoch {epoch}: {consecutive} consecutive "
            "epochs with non-finite loss."
        )
        self.epoch = epoch


class BoundViolationError(NumericalError):
    """Raised when thinning meets an intensity above its current upper bound."""

    code = "BOUND_VIOLATION"

    def __init__(self, t: float, intensity: float, bound: float) -> None:
        super().__init__(
            f"Total intensity {intensity:.6g} at t={t:.6g} exceeds the thinning "
            f"bound {bound:.6g}."
        )
        self.t = t
        self.intensity = intensity
        self.bound = bound


class GradientCheckError(NumericalError):
    """Raised when analytic gradients disagree with finite differences."""

    code = "GRADIENT_MISMATCH"


class TruncatedExpectationWarning(UserWarning):
    """Issued when a next-event expectation misses probability mass beyond its cap."""

    code = "TRUNCATED_EXPECTATION"


class TruncatedSeriesWarning(UserWarning):
    """Issued when the acyclicity series stops at its term cap before converging."""

    code = "TRUNCATED_SERIES"
