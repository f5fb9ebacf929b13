"""Exception types shared across the package."""


class MarkovSharpError(Exception):
    """Base class for all package errors."""


class WeightError(MarkovSharpError, ValueError):
    """Invalid weight description or parameter out of range."""


class QuadratureError(MarkovSharpError):
    """A quadrature rule could not be built or is insufficient."""


class EigenError(MarkovSharpError):
    """Eigen/SVD failure: non-convergence, bad symmetry, or B not positive definite."""


class HypothesisError(MarkovSharpError, ValueError):
    """A bound's hypothesis is violated by the supplied parameters."""
