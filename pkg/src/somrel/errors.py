"""Exception types shared across the package."""


class SomrelError(Exception):
    """Base class for all errors raised by somrel."""


class InvalidArgumentError(SomrelError, ValueError):
    """An argument is out of range or inconsistent with another argument."""


class DegenerateDistortionError(SomrelError, ArithmeticError):
    """Every replicate reached zero distortion, so a coefficient of variation is undefined."""


class DataFormatError(SomrelError, ValueError):
    """Input data could not be parsed or standardized.

    The message names the offending row and/or column.
    """

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class ConfigError(SomrelError, ValueError):
    """A run configuration is malformed or incomplete."""
