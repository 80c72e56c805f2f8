"""Custom exceptions and error handling utilities for the stochastic-polytope toolkit."""

import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, Optional


@dataclass
class ErrorContext:
    """Context information for errors."""

    operation: str
    details: Dict[str, Any] = field(default_factory=dict)
    timestamp: datetime = field(default_factory=datetime.now)


class PolytopeError(Exception):
    """Base exception for all toolkit errors."""

    def __init__(self, message: str, context: Optional[ErrorContext] = None):
        self.message = message
        self.context = context
        super().__init__(message)


class ConfigurationError(PolytopeError):
    """Errors related to configuration."""

    pass


class ValidationError(ConfigurationError):
    """Raised when user input or configuration validation fails."""

    pass


class DimensionMismatchError(PolytopeError):
    """Raised when operands have incompatible shapes."""

    pass


class TensorShapeError(PolytopeError):
    """Raised when a tensor grid is ragged or not n×n×n."""

    pass


class TensorFormatError(PolytopeError):
    """Raised when a tensor or vertex-set document cannot be parsed."""

    pass


class DomainError(PolytopeError):
    """Raised when a bound formula is evaluated outside its domain."""

    pass


class EmptyPolytopeError(PolytopeError):
    """Raised when an H-representation describes the empty set."""

    pass


class UnboundedPolyhedronError(PolytopeError):
    """Raised when an H-representation does not describe a bounded polytope."""

    pass


class ComputationLimitError(PolytopeError):
    """Raised when a computation is refused because it exceeds a configured ceiling."""

    pass


class ConsistencyError(PolytopeError):
    """Raised when two independent computations of the same quantity disagree."""

    pass


def handle_error(error: Exception, logger: logging.Logger) -> None:
    """Centralized error handling function.

    Args:
        error: The exception to handle
        logger: Logger instance to use
    """
    if isinstance(error, PolytopeError) and error.context is not None:
        context = error.context
        logger.error(
            f"Error during {context.operation}: {error}",
            extra={
                "error_type": error.__class__.__name__,
                "timestamp": context.timestamp.isoformat(),
                "details": {key: str(value) for key, value in context.details.items()},
            },
        )
    elif isinstance(error, PolytopeError):
        logger.error(str(error), extra={"error_type": error.__class__.__name__})
    else:
        logger.error(f"Unexpected error: {error}", exc_info=True)
