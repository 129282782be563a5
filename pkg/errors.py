"""Exception hierarchy shared by the library and the command-line front-end.

Each class carries the process exit code ``cli.main`` returns when the
exception escapes a subcommand.
"""


class PStableError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class UsageError(PStableError):
    """Bad flags, malformed input files or invalid parameters."""

    exit_code = 2


class InvalidParameterError(UsageError, ValueError):
    """A distribution, parent family or coupling was built with invalid parameters."""


class DataFormatError(UsageError):
    """An input file could not be parsed into a sample."""

    def __init__(self, message, line_numbers=None):
        super().__init__(message)
        self.line_numbers = list(line_numbers or [])


class CapabilityGapError(PStableError, NotImplementedError):
    """The requested computation has no implementation for these inputs."""

    exit_code = 3


class UnsupportedFamilyError(CapabilityGapError):
    """Unknown or unsupported parent family / model kind."""

    def __init__(self, name, supported):
        self.name = name
        self.supported = tuple(supported)
        super().__init__(
            f"Unsupported family '{name}'. Supported: {', '.join(self.supported)}"
        )


class NotInLinearDomainError(CapabilityGapError):
    """The parent has no linear max-domain of attraction entry."""


class NonConvergenceError(PStableError):
    """Optimization failed to produce a usable optimum."""

    exit_code = 4

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NumericFailureError(PStableError):
    """A numerical routine failed (bracketing, domain, undefined statistic)."""

    exit_code = 5


class BracketError(NumericFailureError):
    """Root bracketing for a quantile did not succeed."""

    def __init__(self, message, lower=None, upper=None, values=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
        self.values = values


class DomainError(NumericFailureError, ValueError):
    """Evaluation requested outside the domain where it is defined."""


class UndefinedStatisticError(NumericFailureError):
    """A test statistic is undefined for the given data (e.g. AD with u in {0, 1})."""


class NegativeLRTError(NumericFailureError):
    """The accelerated fit has a lower log-likelihood than the nested single fit."""
