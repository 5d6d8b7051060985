"""Exception hierarchy.

Each family maps to a distinct CLI exit code (see ``curvsel.cli``).
"""


class CurvselError(Exception):
    """Base class for all errors raised by curvsel."""

    exit_code = 1


class ConfigError(CurvselError, ValueError):
    """Invalid option, parameter or column reference."""

    exit_code = 2


class ParseError(CurvselError, ValueError):
    """Input file could not be parsed as a delimited table."""

    exit_code = 3


class DataError(CurvselError, ValueError):
    """Input parsed but its contents are unusable."""

    exit_code = 4


class InsufficientDataError(DataError):
    """Too few rows for the requested computation."""


class EmptySelectionError(DataError):
    """A threshold selection retained no feature."""


class TrainingError(DataError):
    """A classifier could not be fitted on the given data."""
