"""Exception types shared across the package."""

from __future__ import annotations


class KernelCutError(Exception):
    """Base class for every error raised by this package."""


class EmptyInputError(KernelCutError):
    """Raised when an operation receives an order book or batch list with nothing to work on."""


class UnassignedFprError(KernelCutError):
    """Raised when a kernel's finished product reference is not covered by any FPR batch."""


class MalformedScheduleError(KernelCutError):
    """Raised when a schedule's position map does not match its sequence."""


class NotEvaluatedError(KernelCutError):
    """Raised when selection is asked to rank an individual without a fitness value."""


class IncompatibleParentsError(KernelCutError):
    """Raised when crossover parents are permutations of different batch sets."""


class InsufficientSurvivorsError(KernelCutError):
    """Raised when breeding is attempted with fewer than two survivors."""


class InstanceTooLargeError(KernelCutError):
    """Raised when exhaustive search would enumerate more permutations than the cap allows."""


class UnscheduledFprError(KernelCutError):
    """Raised when a finished product reference has no batch in the schedule."""


class ConfigError(KernelCutError):
    """Raised for unknown configuration keys or out-of-range values."""


class ParseError(KernelCutError):
    """Raised for malformed order input; carries the offending line when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class InvalidOrderBookError(KernelCutError):
    """Raised when a parsed order book fails validation; carries the full report."""

    def __init__(self, report):
        self.report = report
        details = "; ".join(v.message for v in report.violations)
        super().__init__(f"order book invalid: {details}")


class PipelineError(KernelCutError):
    """Wraps a failure inside the run pipeline with the stage it occurred in."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}': {cause}")
