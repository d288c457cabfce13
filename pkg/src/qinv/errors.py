"""Exception hierarchy.

Input-validation problems derive from :class:`InputError`; failures of the
numerics on valid input derive from :class:`NumericalError`. The CLI maps
the two families onto exit codes 2 and 3.
"""


class QinvError(Exception):
    pass


class InputError(QinvError, ValueError):
    pass


class NumericalError(QinvError, ArithmeticError):
    pass


class NotHermitian(InputError):
    pass


class NotUnitary(InputError):
    pass


class NotCommuting(InputError):
    pass


class NotARotation(InputError):
    pass


class NotNormalized(InputError):
    pass


class BadTrace(InputError):
    pass


class NotPositive(InputError):
    pass


class BadIndex(InputError):
    pass


class NotAProduct(InputError):
    """Raised when a 4x4 unitary is not a tensor product of 2x2 factors."""


class NotEquivalent(InputError):
    pass


class FactorizationFailure(NumericalError):
    """A matrix that must be local by construction failed to factor."""
