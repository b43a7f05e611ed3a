"""Exception types shared across the package."""


class EKError(Exception):
    """Base class for all package errors."""


class RangeError(EKError, ValueError):
    """An argument lies outside the supported numeric range."""


class DomainError(EKError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class UnsupportedModulusError(DomainError):
    """The modulus is not an odd prime."""


class ContractError(EKError, ValueError):
    """Inputs violate the calling contract (lengths, duplicates, ...)."""


class CapacityError(EKError, RuntimeError):
    """The request exceeds a configured resource bound."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class InvariantError(EKError, ArithmeticError):
    """An internal numerical invariant was violated."""
