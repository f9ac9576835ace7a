"""Exception hierarchy for qbmotion."""


class QbmError(Exception):
    """Base class for all qbmotion errors."""


class InvalidParameterError(QbmError):
    """Physical parameters violate their constraints (non-positive mass, etc.)."""


class DegenerateRootsError(QbmError):
    """Characteristic roots too close together; closed forms divide by root gaps."""


class ConditioningError(QbmError):
    """A denominator underflowed or a linear solve became singular."""


class DivergentKernelError(QbmError):
    """Kernel evaluated at a point where it genuinely diverges (nu at s=0)."""


class SingularityError(QbmError):
    """Special function evaluated at a logarithmic singularity."""


class DomainError(QbmError):
    """Argument outside the mathematical domain of the operation."""


class PoleCollisionError(QbmError):
    """Intermediate coefficient evaluated at (or too close to) one of its poles."""


class NumericalError(QbmError):
    """A numerical procedure failed to reach its target (bracket, quadrature budget)."""


class InconsistentParametersError(QbmError):
    """Requested quantity is undefined for these parameters (e.g. gamma >= gamma_cr)."""


class GridMismatchError(QbmError):
    """Two series meant to be compared live on different time grids."""
