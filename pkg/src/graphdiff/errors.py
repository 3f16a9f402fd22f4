"""Exception types raised by the reconstruction pipeline."""


class GraphDiffError(Exception):
    """Base class for every error raised by :mod:`graphdiff`."""


class AttemptsExhausted(GraphDiffError):
    """No admissible graph was drawn within the allowed number of samples."""


class IsolatedNode(GraphDiffError):
    """A node of degree zero makes the diffusion matrix undefined."""


class DimensionMismatch(GraphDiffError, ValueError):
    pass


class ShapeMismatch(GraphDiffError, ValueError):
    pass


class NotSymmetric(GraphDiffError, ValueError):
    pass


class PerronNotFirst(GraphDiffError):
    """The leading covariance eigenvector is not of constant sign."""


class Infeasible(GraphDiffError):
    """The sign-recovery constraint system has no solution within tolerance.

    The solver result (including the least-infeasible point) is kept on
    ``result`` for diagnostics.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NumericalFailure(GraphDiffError):
    """The LP iteration stopped before converging."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
