"""Exception types shared across the package."""


class TkgqaError(Exception):
    """Base class for all toolkit errors."""


class FactFileError(TkgqaError):
    """Malformed fact file content; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IntervalError(TkgqaError):
    """Invalid time interval (start after end, or degenerate open end)."""


class ConfigError(TkgqaError):
    """Bad configuration value, unknown signal word, or missing template."""


class DomainError(TkgqaError):
    """Operation called outside its stated preconditions."""
