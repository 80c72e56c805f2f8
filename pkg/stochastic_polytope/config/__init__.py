from .config_manager import (
    DEFAULT_CONFIG_DIR,
    ComputationConfig,
    Config,
    ConfigManager,
    LimitsConfig,
    LoggingConfig,
)

__all__ = [
    "DEFAULT_CONFIG_DIR",
    "ComputationConfig",
    "Config",
    "ConfigManager",
    "LimitsConfig",
    "LoggingConfig",
]
