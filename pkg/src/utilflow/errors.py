"""Exception hierarchy shared by every utilflow module."""

from __future__ import annotations


class UtilflowError(Exception):
    """Base class for all errors raised by utilflow."""


class DomainError(UtilflowError, ValueError):
    """An input lies outside the domain an operation is defined on."""


class ParamError(UtilflowError, ValueError):
    """Model parameters violate a family constraint."""


class ConvergenceError(UtilflowError, ArithmeticError):
    """Numeric inversion did not meet its residual bound within the iteration budget."""


class EmptyInvestment(UtilflowError, ValueError):
    """An operation needs at least one flow but got none."""


class IncompleteReport(UtilflowError, ValueError):
    """An audit report is missing one or more checks."""


class ParseError(UtilflowError, ValueError):
    """Malformed investment input.

    ``line`` is 1-based (header is line 1 for CSV); ``field`` names the
    offending column or key when known.
    """

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        locus = []
        if line is not None:
            locus.append(f"line {line}")
        if field is not None:
            locus.append(f"field {field!r}")
        if locus:
            message = f"{message} ({', '.join(locus)})"
        super().__init__(message)
