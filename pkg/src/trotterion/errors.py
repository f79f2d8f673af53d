"""Exception hierarchy shared across the package."""


class TrotterionError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(TrotterionError):
    """Malformed input: wrong shape, non-finite entries, unknown tags."""


class DomainError(TrotterionError):
    """Input lies outside the mathematical domain of the operation."""


class SolverError(TrotterionError):
    """A numeric solve hit a singular Jacobian or failed to converge."""


class DegenerateScanError(TrotterionError):
    """An error scan produced no usable signal (everything at noise floor)."""


class BudgetExceededError(TrotterionError):
    """A search exceeded its iteration or repetition cap."""
