"""Exception types shared across the package."""


class GratingError(Exception):
    """Base class for all domain-specific errors."""


class WoodAnomaly(GratingError):
    """k^2 - lambda_j^2 fell inside the degeneracy guard band for some order j.

    mu_j^{-1} enters the layer Green's function, so a near-degenerate order
    would silently amplify instead of failing; we fail fast.
    """


class CoincidentPoints(GratingError):
    """Green's function requested at (nearly) coincident field/source points.

    The mode series diverges logarithmically at coincidence (including at
    periodic images of the source), so a half-converged sum is refused.
    """


class BadCount(GratingError):
    """Node or pole count invalid for the requested profile."""


class PoleOutsideRegion(GratingError):
    """A generated pole is not strictly between the line y = -b and the boundary."""


class NotAGraph(GratingError):
    """Height queried on a profile that is not a graph y = f(x)."""


class DegenerateMatrix(GratingError):
    """Every singular value fell below the truncation cutoff."""


class NotConverged(GratingError):
    """Residual target not met within the allowed passes.

    Carries the best solution found so callers may still evaluate the field;
    the boundary-fit error bound only certifies the field when the residual
    meets the target.
    """

    def __init__(self, message, solution):
        super().__init__(message)
        self.solution = solution
