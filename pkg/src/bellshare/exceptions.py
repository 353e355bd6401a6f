"""Exception types raised by bellshare."""


class BellshareError(Exception):
    """Base class for all package errors."""


class ShapeError(BellshareError, ValueError):
    """Operand dimensions do not conform."""


class ContractError(BellshareError, ValueError):
    """An input violates a documented precondition (Hermiticity, normalization, ...)."""


class NotPSDError(ContractError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""
