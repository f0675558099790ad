"""Exception types shared across the package."""


class MaxlinError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(MaxlinError):
    """Operands live over different variable counts."""


class NonIntegralWeightError(MaxlinError):
    """An operation restricted to integral weights saw a fractional one."""


class EquationNotFoundError(MaxlinError):
    """A referenced equation id is not present in the system."""


class OracleCapError(MaxlinError):
    """The exhaustive oracle was asked to enumerate more variables than its cap."""


class ParseError(MaxlinError):
    """Input text violates a format rule; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.message = message


class PreconditionError(MaxlinError):
    """A stated precondition failed; `condition` names which one."""

    def __init__(self, condition: str, message: str):
        super().__init__(message)
        self.condition = condition
