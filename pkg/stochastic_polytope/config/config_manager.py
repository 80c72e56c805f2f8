from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from ..exceptions import ConfigurationError, ErrorContext
from ..validators import validate_dimension, validate_log_format, validate_rotation_settings

DEFAULT_CONFIG_DIR = Path(__file__).resolve().parent
ADJACENCY_CHOICES = ("combinatorial", "algebraic")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class LoggingConfig:
    level: str = "WARNING"
    json: bool = True
    format: Optional[str] = None
    file: Optional[str] = None
    rotation: Dict[str, Any] = field(
        default_factory=lambda: {"max_bytes": None, "backup_count": 4, "when": None, "interval": 1}
    )


@dataclass
class ComputationConfig:
    latin_ceiling: int = 5
    report_latin_ceiling: int = 4
    max_workers: int = 4
    batch_size: int = 4096
    adjacency: str = "combinatorial"
    random_max_denominator: int = 1000
    random_max_terms: Optional[int] = None


@dataclass
class LimitsConfig:
    bounds_n_max: int = 30
    enumerate_warn_n: int = 4


@dataclass
class Config:
    logging: LoggingConfig
    computation: ComputationConfig
    limits: LimitsConfig


class ConfigManager:
    def __init__(self, config_dir: Union[str, Path, None] = None):
        self.config_dir = Path(config_dir) if config_dir is not None else DEFAULT_CONFIG_DIR
        self.config: Optional[Config] = None

    def load_config(self, env: str = "default") -> Config:
        """Load configuration from ``<config_dir>/<env>.yaml``.

        Raises:
            ConfigurationError: If the file is missing, unreadable or invalid
        """
        config_path = self.config_dir / f"{env}.yaml"

        if not config_path.exists():
            raise ConfigurationError(
                f"Configuration file not found: {config_path}",
                ErrorContext(operation="load_config", details={"path": str(config_path)}),
            )

        try:
            with open(config_path, "r", encoding="utf-8") as f:
                config_data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationError(
                f"Invalid YAML in {config_path}: {e}",
                ErrorContext(operation="load_config", details={"path": str(config_path)}),
            ) from e

        self.config = self._validate_and_convert(config_data or {})
        return self.config

    def _validate_and_convert(self, data: Dict[str, Any]) -> Config:
        """Validate configuration data and convert to Config object."""
        required_sections = ["logging", "computation", "limits"]
        for section in required_sections:
            if not isinstance(data.get(section), dict):
                raise ConfigurationError(
                    f"Missing required configuration section: {section}",
                    ErrorContext(operation="validate_config", details={"section": section}),
                )

        logging_data = data["logging"]
        rotation = {**LoggingConfig().rotation, **(logging_data.get("rotation") or {})}
        logging_config = LoggingConfig(
            level=str(logging_data.get("level", "WARNING")).upper(),
            json=bool(logging_data.get("json", True)),
            format=logging_data.get("format"),
            file=logging_data.get("file"),
            rotation=rotation,
        )
        if logging_config.level not in LOG_LEVELS:
            raise ConfigurationError(
                f"Invalid log level: {logging_config.level}",
                ErrorContext(operation="validate_config", details={"choices": LOG_LEVELS}),
            )
        if logging_config.format:
            validate_log_format(logging_config.format, json_format=logging_config.json)
        validate_rotation_settings(
            max_bytes=rotation["max_bytes"],
            backup_count=rotation["backup_count"],
            rotate_when=rotation["when"],
            rotate_interval=rotation["interval"],
        )

        computation_data = data["computation"]
        computation_config = ComputationConfig(
            latin_ceiling=computation_data.get("latin_ceiling", 5),
            report_latin_ceiling=computation_data.get("report_latin_ceiling", 4),
            max_workers=computation_data.get("max_workers", 4),
            batch_size=computation_data.get("batch_size", 4096),
            adjacency=computation_data.get("adjacency", "combinatorial"),
            random_max_denominator=computation_data.get("random_max_denominator", 1000),
            random_max_terms=computation_data.get("random_max_terms"),
        )
        validate_dimension(computation_config.latin_ceiling, 1, field_name="computation.latin_ceiling")
        validate_dimension(computation_config.report_latin_ceiling, 1, field_name="computation.report_latin_ceiling")
        validate_dimension(computation_config.max_workers, 1, field_name="computation.max_workers")
        validate_dimension(computation_config.batch_size, 1, field_name="computation.batch_size")
        validate_dimension(
            computation_config.random_max_denominator, 1, field_name="computation.random_max_denominator"
        )
        if computation_config.random_max_terms is not None:
            validate_dimension(computation_config.random_max_terms, 1, field_name="computation.random_max_terms")
        if computation_config.adjacency not in ADJACENCY_CHOICES:
            raise ConfigurationError(
                f"Invalid adjacency method: {computation_config.adjacency}",
                ErrorContext(operation="validate_config", details={"choices": ADJACENCY_CHOICES}),
            )

        limits_data = data["limits"]
        limits_config = LimitsConfig(
            bounds_n_max=limits_data.get("bounds_n_max", 30),
            enumerate_warn_n=limits_data.get("enumerate_warn_n", 4),
        )
        validate_dimension(limits_config.bounds_n_max, 2, field_name="limits.bounds_n_max")
        validate_dimension(limits_config.enumerate_warn_n, 1, field_name="limits.enumerate_warn_n")

        return Config(logging=logging_config, computation=computation_config, limits=limits_config)

    def get_config(self) -> Config:
        """Get the current configuration."""
        if self.config is None:
            raise ConfigurationError(
                "Configuration not loaded. Call load_config() first.", ErrorContext(operation="get_config")
            )
        return self.config
