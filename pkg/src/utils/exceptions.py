"""Custom exception classes for the DUDe simulator."""

from typing import Optional


class DudeSimError(Exception):
    """Base exception for simulator errors."""
    pass


class ConfigError(DudeSimError):
    """Base class for configuration problems (CLI exit code 2)."""
    pass


class ConfigParseError(ConfigError):
    """Raised when a config file is missing or cannot be parsed."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path


class ConfigValidationError(ConfigError):
    """Raised when a config value fails validation."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class SimulationError(DudeSimError):
    """Raised when a simulation operation fails."""

    def __init__(self, message: str, operation: Optional[str] = None):
        super().__init__(message)
        self.operation = operation


class EmptyNetworkError(SimulationError):
    """Raised when no base station could be placed within the retry budget."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message, operation="sample_deployment")
        self.attempts = attempts


class NoActiveSlotsError(SimulationError):
    """Raised when a UE has no SINR sample to compute a rate from."""

    def __init__(self, message: str, ue: Optional[int] = None):
        super().__init__(message, operation="uplink_rate_bps")
        self.ue = ue


class MetricsError(DudeSimError):
    """Base class for statistics errors."""
    pass


class EmptySamplesError(MetricsError):
    """Raised when a statistic is requested over an empty sample set."""
    pass


class InvalidPercentileError(MetricsError):
    """Raised when a percentile level lies outside [0, 1]."""
    pass


class ZeroBaselineError(MetricsError):
    """Raised when a rate gain is requested against a zero baseline percentile."""
    pass


class OutputError(DudeSimError):
    """Raised when an output file cannot be written or read back."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path
