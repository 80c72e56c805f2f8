"""Input validation for the stochastic-polytope CLI and configuration.

This module validates user inputs before any computation starts:
- tensor dimensions and n ranges
- file paths for tensor input and result output
- output formats
- log formats and rotation settings
"""

from pathlib import Path
from typing import Optional

from .exceptions import ErrorContext, ValidationError
from .logging_config import get_logger

logger = get_logger(__name__)

OUTPUT_FORMATS = ("table", "json", "csv")
JSON_LOG_FIELDS = {
    "timestamp",
    "level",
    "name",
    "message",
    "function",
    "line",
    "module",
    "pathname",
    "process",
    "thread",
    "run_id",
}
ROTATION_WHEN = {"S", "M", "H", "D", "W0", "W1", "W2", "W3", "W4", "W5", "W6", "midnight"}


def validate_dimension(n: int, minimum: int = 1, maximum: Optional[int] = None, field_name: str = "n") -> None:
    """Validate a tensor dimension.

    Args:
        n: Dimension to validate
        minimum: Smallest accepted value
        maximum: Largest accepted value, if any
        field_name: Name of the field being validated (for error messages)

    Raises:
        ValidationError: If n is not an integer in range
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise ValidationError(
            f"{field_name} must be an integer",
            ErrorContext(operation="validate_dimension", details={"field": field_name, "value": n}),
        )
    if n < minimum:
        raise ValidationError(
            f"{field_name} must be at least {minimum}, got {n}",
            ErrorContext(operation="validate_dimension", details={"field": field_name, "value": n, "minimum": minimum}),
        )
    if maximum is not None and n > maximum:
        raise ValidationError(
            f"{field_name} must be at most {maximum}, got {n}",
            ErrorContext(operation="validate_dimension", details={"field": field_name, "value": n, "maximum": maximum}),
        )


def validate_n_range(n_min: int, n_max: int, minimum: int = 2, maximum: int = 30) -> None:
    """Validate an inclusive range of dimensions.

    Raises:
        ValidationError: If either end is out of bounds or the range is empty
    """
    validate_dimension(n_min, minimum, maximum, field_name="n")
    validate_dimension(n_max, minimum, maximum, field_name="n-max")
    if n_min > n_max:
        raise ValidationError(
            f"Empty range: n={n_min} is larger than n-max={n_max}",
            ErrorContext(operation="validate_n_range", details={"n_min": n_min, "n_max": n_max}),
        )


def validate_file_path(path: str, must_exist: bool = False, must_be_file: bool = False) -> None:
    """Validate a file path.

    Args:
        path: Path to validate
        must_exist: Whether the path must exist
        must_be_file: Whether the path must be a regular file

    Raises:
        ValidationError: If the path is invalid
    """
    if not path:
        raise ValidationError(
            "File path cannot be empty",
            ErrorContext(operation="validate_file_path", details={"value": path}),
        )

    path_obj = Path(path)
    if must_exist and not path_obj.exists():
        raise ValidationError(
            f"File does not exist: {path}",
            ErrorContext(operation="validate_file_path", details={"value": path}),
        )
    if must_be_file and not path_obj.is_file():
        raise ValidationError(
            f"Path is not a file: {path}",
            ErrorContext(operation="validate_file_path", details={"value": path}),
        )
    if not must_exist and path_obj.is_dir():
        raise ValidationError(
            f"Path is a directory: {path}",
            ErrorContext(operation="validate_file_path", details={"value": path}),
        )


def validate_output_format(output_format: str) -> None:
    """Require one of the supported output formats."""
    if output_format not in OUTPUT_FORMATS:
        raise ValidationError(
            f"Invalid output format: {output_format}. Must be one of: {', '.join(OUTPUT_FORMATS)}",
            ErrorContext(operation="validate_output_format", details={"value": output_format}),
        )


def validate_log_format(format_str: str, json_format: bool = False) -> None:
    """Validate a log format string.

    For JSON logging the format is a space-separated field list; for text
    logging it is a %-style logging format.

    Raises:
        ValidationError: If the format string is invalid
    """
    if not format_str:
        raise ValidationError(
            "Log format cannot be empty",
            ErrorContext(operation="validate_log_format", details={"value": format_str, "json_format": json_format}),
        )

    if json_format:
        invalid_fields = [f for f in format_str.split() if f not in JSON_LOG_FIELDS]
        if invalid_fields:
            raise ValidationError(
                f"Invalid JSON log fields: {', '.join(invalid_fields)}",
                ErrorContext(
                    operation="validate_log_format",
                    details={"value": format_str, "invalid_fields": invalid_fields},
                ),
            )
        return

    sample = {
        "asctime": "",
        "levelname": "",
        "message": "",
        "name": "",
        "module": "",
        "funcName": "",
        "lineno": 0,
        "run_id": "",
    }
    try:
        format_str % sample
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(
            f"Invalid log format string: {format_str}",
            ErrorContext(operation="validate_log_format", details={"value": format_str}),
        ) from e


def validate_rotation_settings(
    max_bytes: Optional[int] = None,
    backup_count: Optional[int] = None,
    rotate_when: Optional[str] = None,
    rotate_interval: Optional[int] = None,
) -> None:
    """Validate log rotation settings.

    Raises:
        ValidationError: If any rotation setting is invalid
    """
    if max_bytes is not None and (not isinstance(max_bytes, int) or max_bytes < 1024):
        raise ValidationError(
            "Maximum log size must be an integer of at least 1KB",
            ErrorContext(operation="validate_rotation_settings", details={"max_bytes": max_bytes}),
        )
    if backup_count is not None and (not isinstance(backup_count, int) or backup_count < 0):
        raise ValidationError(
            "Backup count must be a non-negative integer",
            ErrorContext(operation="validate_rotation_settings", details={"backup_count": backup_count}),
        )
    if rotate_when is not None and rotate_when not in ROTATION_WHEN:
        raise ValidationError(
            f"Invalid rotation interval: {rotate_when}. Must be one of: {', '.join(sorted(ROTATION_WHEN))}",
            ErrorContext(operation="validate_rotation_settings", details={"rotate_when": rotate_when}),
        )
    if rotate_interval is not None and (not isinstance(rotate_interval, int) or rotate_interval < 1):
        raise ValidationError(
            "Rotation interval must be a positive integer",
            ErrorContext(operation="validate_rotation_settings", details={"rotate_interval": rotate_interval}),
        )
