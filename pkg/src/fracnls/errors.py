"""Exception hierarchy shared by every module."""


class FracError(Exception):
    """Base class for all errors raised by :mod:`fracnls`."""


class DomainError(FracError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """Gamma function evaluated at (or within 1e-12 of) a nonpositive integer."""


class ConvergenceBudgetExceeded(FracError, ArithmeticError):
    """A series did not meet its stopping rule within the term budget."""


class QuadratureError(FracError, ValueError):
    """Invalid quadrature configuration (e.g. too few panels)."""


class UnsupportedAtom(FracError, TypeError):
    """A derivative rule was requested for a time atom of the other sense."""


class BasisOverflow(FracError):
    """A product or derivative left the closed symbolic term basis.

    ``order`` is set by the solver to the series index being computed when
    the overflow happened.
    """

    def __init__(self, message: str, order: int | None = None):
        super().__init__(message)
        self.order = order


class MissingFixture(FracError, KeyError):
    """A tabulated reference value is not available for the requested point."""
