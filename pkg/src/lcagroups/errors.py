"""Exception types shared across the package."""


class LCAError(Exception):
    """Base class for domain errors raised by this package."""


class ParseError(LCAError, ValueError):
    """Malformed term text. ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


class InvalidTermError(LCAError, ValueError):
    def __init__(self, report):
        lines = "; ".join(f"{v.path}: {v.message}" for v in report.violations)
        super().__init__(f"invalid term: {lines}")
        self.report = report


class TrivialGroupError(LCAError, ValueError):
    pass


class NotSimpleError(LCAError, ValueError):
    pass


class PrecisionError(LCAError, ArithmeticError):
    """A result would depend on digits beyond the tracked precision."""


class PrimeMismatchError(LCAError, ValueError):
    pass


class BudgetExceededError(LCAError, RuntimeError):
    pass


class LinearDependenceError(LCAError, ValueError):
    """Input vectors are linearly dependent at the working precision."""


class NoUnitPivotError(LCAError, ValueError):
    """A reduced vector lies in pU, so the chain is not one of direct summands."""


class ImpureSubmoduleError(LCAError, ValueError):
    pass
