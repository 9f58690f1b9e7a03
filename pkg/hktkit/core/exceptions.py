"""
Exception hierarchy for engine errors.

Every exception carries the process exit code the CLI reports for it:
2 for input errors, 3 for internal consistency violations.
"""

from typing import Optional


class HktkitException(Exception):
    """Base exception for engine errors."""

    def __init__(self, exit_code: int, message: str, detail: Optional[str] = None):
        self.exit_code = exit_code
        self.detail = detail
        super().__init__(message)

    def __str__(self):
        if self.detail:
            return f"hktkit error {self.exit_code}: {super().__str__()}\nDetail: {self.detail}"
        return f"hktkit error {self.exit_code}: {super().__str__()}"


class InputException(HktkitException):
    """Exception for malformed or unusable input (exit code 2)."""

    def __init__(self, message: str = "Invalid input", detail: Optional[str] = None):
        super().__init__(2, message, detail)


class ParseException(InputException):
    """Exception for text that does not follow an input grammar."""

    def __init__(self, message: str, position: int, detail: Optional[str] = None):
        self.position = position
        super().__init__(f"{message} (at position {position})", detail)


class DimensionException(InputException):
    """Exception for a dimension that is not a positive multiple of 4."""


class SingularParameterException(InputException):
    """Exception for a family parameter at which the structure is undefined."""

    def __init__(self, t: str):
        super().__init__(f"singular parameter t = {t}", "the family requires t not in {0, 1}")


class UnknownInstanceException(InputException):
    """Exception for a catalog identifier that does not exist."""


class StructureException(InputException):
    """Exception for an invalid or non-integrable hypercomplex structure."""


class BidegreeException(InputException):
    """Exception for a form of the wrong bidegree."""


class NotPositiveException(InputException):
    """Exception for a (2,0)-form that is not real or not strictly positive."""


class GauduchonException(InputException):
    """Exception for a form that is not quaternionic Gauduchon."""


class ConsistencyException(HktkitException):
    """Exception for a violated internal consistency check (exit code 3)."""

    def __init__(self, message: str = "Consistency violation", detail: Optional[str] = None):
        super().__init__(3, message, detail)
