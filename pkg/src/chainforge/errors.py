"""Exception types shared across the toolkit."""

__all__ = [
    "ChainDesignError",
    "InvalidSpectrumError",
    "SolverOverflowError",
    "EigensolverError",
]


class ChainDesignError(Exception):
    """Base class for all chainforge errors."""


class InvalidSpectrumError(ChainDesignError, ValueError):
    """Spectrum violates a structural requirement (ordering, distinctness, symmetry)."""


class SolverOverflowError(ChainDesignError, ArithmeticError):
    """Weights or polynomial values left the representable floating-point range.

    Raised when the chain is too long for the spectrum's dynamic range even
    after rescaling to [-1, 1].
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class EigensolverError(ChainDesignError, RuntimeError):
    """Tridiagonal eigensolver failed to converge."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index
