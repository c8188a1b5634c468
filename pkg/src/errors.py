"""
Exception hierarchy for the radical toolkit

Library code raises these; only main.py turns them into process exit codes.
"""

from typing import Optional


class RadicalError(Exception):
    """Base class for every error raised by the toolkit"""

    exit_code = 1


class SystemParseError(RadicalError):
    """Malformed polynomial system document or polynomial text"""

    exit_code = 2

    def __init__(
        self, message: str, line: Optional[int] = None, column: Optional[int] = None
    ):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f" (line {line}" + (
                f", column {column})" if column is not None else ")"
            )
        super().__init__(f"{message}{location}")


class PreconditionError(RadicalError):
    """Input violates the preconditions of the requested operation"""

    exit_code = 3


class ConfigurationError(PreconditionError):
    """Invalid environment or command-line configuration"""


class VariableMismatchError(PreconditionError):
    """Polynomials from rings with different variable counts were combined"""


class BoundsError(PreconditionError):
    """Degree bounds are too small for the system (raise delta)"""


class DegreeOverflowError(PreconditionError):
    """A polynomial does not fit in the current monomial layout"""


class ContractViolation(RadicalError):
    """An internal post-condition failed"""

    exit_code = 4


class SingularMatrixError(ContractViolation):
    """A matrix that must be invertible is singular"""
