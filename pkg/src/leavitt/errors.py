"""Exception types shared across the library."""


class InputError(ValueError):
    """Malformed or unresolvable caller-supplied data."""


class ContractError(ValueError):
    """A documented precondition was violated."""


class ResourceLimitError(RuntimeError):
    """An enumeration exceeded a configured cap."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap


class InternalInvariantError(RuntimeError):
    """Two computations that must agree produced different answers.

    This is never a user error; it means a theorem the library relies on
    appears to be violated, so the result cannot be trusted.
    """
