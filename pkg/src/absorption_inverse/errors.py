"""Exception and warning types raised across the package."""


class AbsorptionInverseError(Exception):
    """Base class for every error raised by this package."""


class ParseError(AbsorptionInverseError):
    """A graph file could not be decoded."""


class ValidationError(AbsorptionInverseError):
    """Input decoded fine but violates a structural requirement."""


class NumericalError(AbsorptionInverseError):
    pass


class SingularMatrix(NumericalError):
    pass


class NoConvergence(NumericalError):
    """An iterative solver gave up; ``residual`` holds its last residual."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class RouteDisagreement(NumericalError):
    pass


class PreconditionError(AbsorptionInverseError):
    pass


class NotBalanced(PreconditionError):
    """The operation is only defined for balanced graphs."""


class SizeLimit(AbsorptionInverseError):
    """Exhaustive enumeration was requested on a graph above the size cap."""


class NonPositiveWarning(UserWarning):
    pass


class DegeneratePartitionWarning(UserWarning):
    pass
