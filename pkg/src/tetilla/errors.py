"""Exception hierarchy shared by all modules."""


class TetillaError(Exception):
    """Base class for every error raised by this package."""


class CapacityError(TetillaError):
    """A desk-scale budget (enumeration count, array size) would be exceeded."""


class PreconditionError(TetillaError, ValueError):
    """Arguments violate an operation's documented preconditions."""


class GridMismatchError(PreconditionError):
    """Two kernels live on different grids."""


class InvalidWalkError(PreconditionError):
    """A walk or contraction path violates its admissibility constraints."""


class RootSelectionError(TetillaError, ArithmeticError):
    """No unique root of the Cauchy-transform cubic lies in the lower half-plane."""


class MirrorSymmetryWarning(UserWarning):
    """A moment was requested for a kernel that is not mirror-symmetric."""
