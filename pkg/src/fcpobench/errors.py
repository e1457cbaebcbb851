"""
Exception hierarchy for fcpobench.
"""
from typing import Optional


class FcpoBenchError(Exception):
    """Base class for every error raised by fcpobench."""


class ContractViolation(FcpoBenchError, ValueError):
    """A precondition of an operation was not met."""


class InsufficientSamplesError(ContractViolation):
    """Too few samples for an estimator (e.g. covariance of a single point)."""


class ConfigurationError(FcpoBenchError, ValueError):
    """Invalid configuration value, unknown identifier or unusable budget."""


class ResultsParseError(FcpoBenchError, ValueError):
    """A results file could not be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
