"""Exception hierarchy shared by every stage of the pipeline."""


class StieltjesError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(StieltjesError, ValueError):
    """Input outside the region where the requested quantity is defined."""


class BranchError(DomainError):
    """A logarithm argument hit its branch cut or a singular point."""


class ValidityError(DomainError):
    """The large-n saddle assumption does not hold for this (n, a)."""


class ConvergenceError(StieltjesError, ArithmeticError):
    """An iteration or quadrature refinement failed to meet its tolerance."""


class PrecisionError(StieltjesError, ArithmeticError):
    """Carried precision is too low to determine the requested digits."""
