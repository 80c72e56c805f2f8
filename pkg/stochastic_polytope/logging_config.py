"""Logging configuration for the stochastic-polytope toolkit."""

import logging
import logging.handlers
import os
import uuid
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Union

from pythonjsonlogger.json import JsonFormatter

DEFAULT_JSON_FIELDS = "timestamp level name module function line message"
DEFAULT_TEXT_FORMAT = "%(asctime)s | %(levelname)s | %(run_id)s | %(module)s:%(funcName)s:%(lineno)d | %(message)s"

# Marks handlers installed by setup_logging so a second call can replace them.
_HANDLER_MARK = "_stochastic_polytope_handler"


class RunIdFilter(logging.Filter):
    """Adds a run ID to log records so one invocation can be grepped out of a shared log file."""

    def __init__(self, run_id: Optional[str] = None):
        super().__init__()
        self.run_id = run_id or str(uuid.uuid4())

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = self.run_id
        return True


class CustomJsonFormatter(JsonFormatter):
    """JSON formatter with timestamp, level and call-site fields."""

    def __init__(self, fmt: Optional[str] = None, *args: Any, **kwargs: Any):
        """Initialize the formatter with optional custom field list.

        Args:
            fmt: Optional space-separated list of fields to keep
            *args: Additional positional arguments
            **kwargs: Additional keyword arguments
        """
        super().__init__(*args, **kwargs)
        self._fields = self._parse_format_string(fmt) if fmt else None

    def _parse_format_string(self, fmt: str) -> List[str]:
        """Parse the format string to extract field names.

        Args:
            fmt: Format string containing field names

        Returns:
            List of field names found in the format string
        """
        return [f.strip() for f in fmt.split() if f.strip()]

    def add_fields(
        self,
        log_record: Dict[str, Any],
        record: logging.LogRecord,
        message_dict: Dict[str, Any],
    ) -> None:
        """Add custom fields to the log record."""
        super().add_fields(log_record, record, message_dict)

        log_record["timestamp"] = datetime.now(timezone.utc).isoformat()
        log_record["level"] = record.levelname
        log_record["name"] = record.name
        log_record["module"] = record.module
        log_record["function"] = record.funcName
        log_record["line"] = record.lineno
        log_record["run_id"] = getattr(record, "run_id", None)

        # Keep only requested fields, plus whatever the caller passed via extra=
        if self._fields:
            standard = {"timestamp", "level", "name", "module", "function", "line", "run_id", "message"}
            for key in list(log_record):
                if key in standard and key not in self._fields:
                    del log_record[key]


def create_rotating_handler(
    log_file_path: str,
    max_bytes: Optional[int] = None,
    backup_count: int = 4,
    when: Optional[str] = None,
    interval: int = 1,
) -> Union[logging.handlers.RotatingFileHandler, logging.handlers.TimedRotatingFileHandler, logging.FileHandler]:
    """Create a file handler, rotating by size or by time when configured.

    Args:
        log_file_path: Path to the log file
        max_bytes: Maximum size in bytes before rotation (for size-based rotation)
        backup_count: Number of backup files to keep
        when: When to rotate ('S', 'M', 'H', 'D', 'W0'-'W6', 'midnight')
        interval: Interval for time-based rotation

    Returns:
        Configured file handler
    """
    if max_bytes is not None:
        return logging.handlers.RotatingFileHandler(
            log_file_path,
            maxBytes=max_bytes,
            backupCount=backup_count,
            encoding="utf-8",
        )
    if when is not None:
        return logging.handlers.TimedRotatingFileHandler(
            log_file_path,
            when=when,
            interval=interval,
            backupCount=backup_count,
            encoding="utf-8",
        )
    return logging.FileHandler(log_file_path, encoding="utf-8")


def setup_logging(
    log_file_path: Optional[str] = None,
    log_level: Union[int, str] = logging.WARNING,
    json_format: bool = True,
    run_id: Optional[str] = None,
    log_format: Optional[str] = None,
    max_bytes: Optional[int] = None,
    backup_count: int = 4,
    rotate_when: Optional[str] = None,
    rotate_interval: int = 1,
) -> logging.Logger:
    """Sets up logging to stderr and, optionally, to a rotating file.

    stdout is left alone: command results are written there and must stay
    byte-identical between runs.

    Args:
        log_file_path: Optional path to a log file
        log_level: Logging level (default: WARNING)
        json_format: Whether to use JSON formatting (default: True)
        run_id: Optional run ID to use (default: None, will generate one)
        log_format: Optional custom format string for logs
        max_bytes: Maximum size in bytes before rotation (for size-based rotation)
        backup_count: Number of backup files to keep
        rotate_when: When to rotate ('S', 'M', 'H', 'D', 'W0'-'W6', 'midnight')
        rotate_interval: Interval for time-based rotation

    Returns:
        Configured root logger
    """
    logger = logging.getLogger()
    logger.setLevel(log_level)

    for handler in list(logger.handlers):
        if getattr(handler, _HANDLER_MARK, False):
            logger.removeHandler(handler)
            handler.close()
    for existing in list(logger.filters):
        if isinstance(existing, RunIdFilter):
            logger.removeFilter(existing)

    formatter: logging.Formatter
    if json_format:
        formatter = CustomJsonFormatter(fmt=log_format or DEFAULT_JSON_FIELDS)
    else:
        formatter = logging.Formatter(fmt=log_format or DEFAULT_TEXT_FORMAT)

    run_filter = RunIdFilter(run_id)
    logger.addFilter(run_filter)

    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if log_file_path:
        log_dir = os.path.dirname(log_file_path)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        handlers.append(
            create_rotating_handler(
                log_file_path,
                max_bytes=max_bytes,
                backup_count=backup_count,
                when=rotate_when,
                interval=rotate_interval,
            )
        )

    for handler in handlers:
        handler.setFormatter(formatter)
        # Handler-level filter so records from child loggers also carry run_id
        handler.addFilter(run_filter)
        setattr(handler, _HANDLER_MARK, True)
        logger.addHandler(handler)

    return logger


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance with the specified name.

    Args:
        name: Name of the logger

    Returns:
        Logger instance
    """
    return logging.getLogger(name)
