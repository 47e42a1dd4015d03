"""Exception types shared across the package."""


class ShiftBFError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(ShiftBFError, ValueError):
    """A parameter violates a documented precondition."""


class UnsupportedOrderError(ShiftBFError):
    """Polynomial kernel order above the numerical-stability cap."""


class TermBudgetError(ShiftBFError):
    """A tensor-product expansion would exceed its configured term budget."""


class PgmParseError(ShiftBFError):
    """Malformed PGM input. `offset` is the byte position of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset
