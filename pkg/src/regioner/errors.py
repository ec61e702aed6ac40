"""Exception types shared across the library."""


class RegionerError(Exception):
    """Base class for errors raised by this library."""


class NoPathError(RegionerError):
    """No path exists between the queried nodes or regions."""


class SingularBlockError(RegionerError):
    """The block selected for elimination is singular."""


class ConvergenceError(RegionerError):
    """Iterative solver hit its iteration cap before reaching tolerance."""

    def __init__(self, message, residual, iterations):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class IsolatedPointError(RegionerError):
    """A query point has zero kernel weight to every sample point."""


class EmptyRegionError(RegionerError):
    """A named region selects no nodes or centers."""
