"""Error classes shared by every module.

Each family carries the process exit code the CLI reports for it.
"""
from typing import ClassVar


class TavisError(Exception):
    """Base class of all library errors."""

    exit_code: ClassVar[int] = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


# Configuration and input errors (exit code 2)
class ConfigError(TavisError):
    exit_code: ClassVar[int] = 2


class ParseError(ConfigError):
    pass


class ConfigValidationError(ConfigError):
    def __init__(self, detail: str, errors: list[str] | None = None):
        super().__init__(detail)
        self.errors = errors or []


class DimensionMismatch(ConfigError):
    pass


class GridTooShort(ConfigError):
    pass


# Numerical failures (exit code 3)
class NumericalError(TavisError):
    exit_code: ClassVar[int] = 3


class SingularResolvent(NumericalError):
    pass


class StepTooLarge(NumericalError):
    pass


class NonConvergence(NumericalError):
    pass


class NotConverged(NumericalError):
    pass


class IllConditioned(NumericalError):
    pass


# Inputs outside the validity regime of a closed form (exit code 4)
class RegimeViolation(TavisError):
    exit_code: ClassVar[int] = 4


class NormViolation(RegimeViolation):
    pass


class ExcitationOverflow(RegimeViolation):
    pass


class ZeroCouplingInGroup(UserWarning):
    """A degenerate group contains an atom with zero coupling."""
