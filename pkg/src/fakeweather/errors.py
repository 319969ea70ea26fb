"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so parsing problems must stay
distinguishable from dimension conflicts and plain I/O failures.
"""


class FakeWeatherError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(FakeWeatherError, ValueError):
    """A file or byte stream does not conform to one of the wire formats."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DimensionMismatch(FakeWeatherError, ValueError):
    """Two objects that must share dimensions do not."""
