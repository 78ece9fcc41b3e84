"""Error types shared across the package."""

from .errors import (
    EXIT_DATA,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    BoundViolationError,
    CheckpointError,
    CheckpointVersionError,
    ConfigurationError,
    CorpusFormatError,
    CorruptCheckpointError,
    DataError,
    DivergedError,
    EmptyCorpusError,
    EmptySequenceError,
    GradientCheckError,
    HorizonViolationError,
    HyperParameterError,
    MochaError,
    NonFiniteLossError,
    NonIncreasingChainError,
    NonMonotonicTimeError,
    NumericalError,
    NumericOverflowError,
    PathSpecificationError,
    SequenceValidationError,
    TruncatedExpectationWarning,
    TruncatedSeriesWarning,
    TypeCountMismatchError,
    TypeOutOfRangeError,
)

__all__ = [
    "EXIT_DATA",
    "EXIT_NUMERICAL",
    "EXIT_OK",
    "EXIT_USAGE",
    "BoundViolationError",
    "CheckpointError",
    "CheckpointVersionError",
    "ConfigurationError",
    "CorpusFormatError",
    "CorruptCheckpointError",
    "DataError",
    "DivergedError",
    "EmptyCorpusError",
    "EmptySequenceError",
    "GradientCheckError",
    "HorizonViolationError",
    "HyperParameterError",
    "MochaError",
    "NonFiniteLossError",
    "NonIncreasingChainError",
    "NonMonotonicTimeError",
    "NumericOverflowError",
    "NumericalError",
    "PathSpecificationError",
    "SequenceValidationError",
    "TruncatedExpectationWarning",
    "TruncatedSeriesWarning",
    "TypeCountMismatchError",
    "TypeOutOfRangeError",
]
