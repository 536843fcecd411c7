"""Exception types raised across the package."""


class ImaginarityError(Exception):
    """Base class for all package errors."""


class NotHermitian(ImaginarityError, ValueError):
    pass


class NotPSD(ImaginarityError, ValueError):
    pass


class NoConvergence(ImaginarityError, ArithmeticError):
    pass


class DimensionMismatch(ImaginarityError, ValueError):
    pass


class InvalidState(ImaginarityError, ValueError):
    """A state violates one of its invariants.

    ``invariant`` names the first violated invariant and ``residual`` is the
    measured violation.
    """

    def __init__(self, invariant, residual=None, message=None):
        self.invariant = invariant
        self.residual = residual
        if message is None:
            message = f"state violates invariant '{invariant}'"
            if residual is not None:
                message += f" (residual {residual:.3g})"
        super().__init__(message)


class InvalidChannel(ImaginarityError, ValueError):
    pass


class UnknownName(ImaginarityError, KeyError):
    pass


class ParamOutOfRange(ImaginarityError, ValueError):
    pass


class NotIsometry(ImaginarityError, ValueError):
    pass


class RankMismatch(ImaginarityError, ValueError):
    pass


class NegativeRadicand(ImaginarityError, ArithmeticError):
    pass


class NotQubit(ImaginarityError, ValueError):
    pass


class WrongForm(ImaginarityError, ValueError):
    pass


class DegenerateDenominator(ImaginarityError, ArithmeticError):
    pass


class NoWitnessFound(ImaginarityError, LookupError):
    pass


class UnsupportedPair(ImaginarityError, ValueError):
    pass
