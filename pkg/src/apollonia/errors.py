"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter is outside the mathematical domain of an operation."""


class CapacityError(RuntimeError):
    """A guard against requests that exceed a documented size limit."""
