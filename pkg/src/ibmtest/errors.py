"""Exception hierarchy.

Everything the package raises on bad input derives from ``IbmError``.  The CLI
maps the three families below onto exit codes 2, 3 and 4.
"""


class IbmError(Exception):
    """Base class for all package errors."""


class InvalidInputError(IbmError, ValueError):
    """Malformed or inconsistent input (CLI exit code 2)."""


class SelfLoopError(InvalidInputError):
    pass


class DuplicateEdgeError(InvalidInputError):
    pass


class IndexRangeError(InvalidInputError):
    pass


class MalformedLineError(InvalidInputError):
    pass


class DimensionMismatchError(InvalidInputError):
    pass


class DirectednessMismatchError(InvalidInputError):
    pass


class InvalidModelError(InvalidInputError):
    """Model parameters that do not define a valid Bernoulli matrix."""


class DegenerateDenominatorError(IbmError):
    """q(A) + q(Ã) == 0, so the standardized statistic is undefined (exit code 3)."""


class NumericError(IbmError, ArithmeticError):
    """Internal numeric failure: overflow, non-convergence (exit code 4)."""


class KernelOverflowError(NumericError, OverflowError):
    pass


class ConvergenceError(NumericError):
    pass
