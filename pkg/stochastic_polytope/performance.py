"""Performance monitoring for the stochastic-polytope toolkit.

Collects wall-clock timings for the expensive operations (vertex enumeration,
Latin square counting, decompositions) so the CLI can report them with
``--show-performance``.
"""

import functools
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional, TypeVar, cast

from .logging_config import get_logger

logger = get_logger(__name__)

F = TypeVar("F", bound=Callable[..., Any])


@dataclass
class OperationMetrics:
    """Metrics for a single operation."""

    operation: str
    start_time: datetime
    started_at: float
    duration: Optional[float] = None
    success: bool = True
    error: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict)


class PerformanceMonitor:
    """Monitors and reports performance metrics.

    Each call to :meth:`start_operation` returns its own metrics record, so
    operations running on different threads never overwrite each other.
    """

    def __init__(self) -> None:
        self.operations: List[OperationMetrics] = []
        self._lock = threading.Lock()

    def start_operation(self, operation: str, **details: Any) -> OperationMetrics:
        """Start timing an operation.

        Args:
            operation: Name of the operation
            **details: Additional details about the operation

        Returns:
            The in-flight metrics record, to be passed to :meth:`end_operation`
        """
        metrics = OperationMetrics(
            operation=operation,
            start_time=datetime.now(),
            started_at=time.perf_counter(),
            details=dict(details),
        )
        logger.debug("Starting operation", extra={"operation": operation, "details": details})
        return metrics

    def end_operation(
        self,
        metrics: OperationMetrics,
        success: bool = True,
        error: Optional[str] = None,
        **details: Any,
    ) -> None:
        """End timing an operation and record it.

        Args:
            metrics: Record returned by start_operation
            success: Whether the operation was successful
            error: Error message if the operation failed
            **details: Additional details about the operation
        """
        metrics.duration = time.perf_counter() - metrics.started_at
        metrics.success = success
        metrics.error = error
        metrics.details.update(details)

        logger.debug(
            "Completed operation",
            extra={
                "operation": metrics.operation,
                "duration": metrics.duration,
                "success": success,
                "error": error,
            },
        )
        with self._lock:
            self.operations.append(metrics)

    def reset(self) -> None:
        """Forget all recorded operations."""
        with self._lock:
            self.operations.clear()

    def get_operation_summary(self) -> Dict[str, Any]:
        """Get a summary of all operations.

        Returns:
            Dict containing operation statistics, empty if nothing was recorded
        """
        with self._lock:
            operations = list(self.operations)
        if not operations:
            return {}

        total_duration = sum(op.duration or 0.0 for op in operations)
        successful_ops = sum(1 for op in operations if op.success)

        return {
            "total_operations": len(operations),
            "successful_operations": successful_ops,
            "failed_operations": len(operations) - successful_ops,
            "total_duration": total_duration,
            "average_duration": total_duration / len(operations),
            "operations": [
                {
                    "operation": op.operation,
                    "duration": op.duration,
                    "success": op.success,
                    "error": op.error,
                    "details": op.details,
                }
                for op in operations
            ],
        }


# Global performance monitor instance
_performance_monitor = PerformanceMonitor()


def get_performance_monitor() -> PerformanceMonitor:
    """Get the global performance monitor instance.

    Returns:
        PerformanceMonitor instance
    """
    return _performance_monitor


def monitor_performance(operation: str) -> Callable[[F], F]:
    """Decorator recording the wrapped call's duration on the global monitor.

    Args:
        operation: Name of the operation to monitor

    Returns:
        Decorated function
    """

    def decorator(func: F) -> F:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            monitor = get_performance_monitor()
            metrics = monitor.start_operation(operation)
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                monitor.end_operation(metrics, success=False, error=str(e))
                raise
            monitor.end_operation(metrics, success=True)
            return result

        return cast(F, wrapper)

    return decorator
