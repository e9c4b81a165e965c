class InvariantError(AssertionError):
    """An internal guarantee of the construction did not hold (a bug, not bad input)."""


class InfeasibleParameters(ValueError):
    """Generator parameters leave some building block empty."""

    def __init__(self, message: str, min_n: int | None = None):
        self.min_n = min_n
        if min_n is not None:
            message = f"{message}; minimum feasible n is {min_n}"
        super().__init__(message)


class AuditError(AssertionError):
    """A forced-edge containment check failed on a verified structure."""
