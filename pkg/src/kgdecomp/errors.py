"""Exception types raised by the solvers.

Every error carries a stable ``name`` that the CLI reports verbatim.
"""


class KGError(Exception):
    """Base class for all library errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


class NonPositiveRadius(KGError, ValueError):
    pass


class OutOfGridRange(KGError, ValueError):
    pass


class NonFiniteValue(KGError, ArithmeticError):
    pass


class NonFinitePotential(NonFiniteValue):
    pass


class Overflow(KGError, OverflowError):
    pass


class LengthMismatch(KGError, ValueError):
    pass


class NoBoundState(KGError):
    pass


class VectorDominates(KGError, ValueError):
    """Raised when s0**2 < v0**2, making the Hulthen delta complex."""


class NoConvergence(KGError):
    pass


class ComplexEnergy(KGError):
    """m**2 + lambda < 0: no real energy for this potential strength."""


class NegativeOscillator(KGError, ValueError):
    pass


class ConstraintViolated(KGError, ValueError):
    pass


class NonNormalizableBase(KGError):
    pass


class DivisionUnderflow(KGError):
    pass
