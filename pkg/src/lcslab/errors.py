"""Exceptions shared across the package."""


class InputError(ValueError):
    """Raised when an argument violates an operation's precondition."""
