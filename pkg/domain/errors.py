# domain/errors.py
from __future__ import annotations


class PointProcessError(Exception):
    """Base for every failure raised by the domain layer."""


class InvalidParameter(PointProcessError, ValueError):
    """A parameter container or argument is outside its valid range."""


class DegenerateWindow(PointProcessError):
    """Erosion (or construction) left a window with no positive extent."""


class EmptyPattern(PointProcessError):
    """The estimator needs at least one point."""


class TailTooHeavy(PointProcessError):
    """Count pmf tail mass beyond n_max could not be bounded below tolerance."""


class ExistenceViolated(PointProcessError):
    """DPP kernel parameters break the existence bound rho * pi * kappa**2 <= 1."""


class TruncationTooLarge(PointProcessError):
    """Spectral truncation would need more frequencies than allowed."""


class CovarianceNotPD(PointProcessError):
    """Gaussian field covariance could not be factorized even with jitter."""


class AttemptsExhausted(PointProcessError):
    """An acceptance-rejection sampler ran out of attempts."""


class InfeasibleCount(PointProcessError):
    """The requested number of points cannot occur under the model."""


class MismatchedGrids(PointProcessError):
    """Curves that must share an r-grid do not."""


class TooFewCurves(PointProcessError):
    """Not enough simulated curves for the requested envelope level."""


class NoConvergence(PointProcessError):
    """An optimizer stopped without meeting its tolerance."""


class NoInteriorPoints(PointProcessError):
    """No data points fall in the eroded estimation window."""
