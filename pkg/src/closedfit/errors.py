"""Exception types shared by the fitting routines."""

from __future__ import annotations


class EstimationError(Exception):
    """Base class for estimator failures."""


class DegenerateSampleError(EstimationError):
    """A defining denominator is numerically zero for this sample."""


class OutOfDomainError(EstimationError):
    """The closed form produced estimates outside the parameter space."""

    def __init__(self, message: str, estimates=None):
        super().__init__(message)
        self.estimates = estimates


class NonConvergenceError(EstimationError):
    """Iterative solver hit its iteration cap; carries the last iterate."""

    def __init__(self, message: str, last_iterate=None, residual=None, iterations=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual
        self.iterations = iterations


class NonFiniteStatisticsError(EstimationError):
    """A sample functional overflowed or evaluated to a non-finite value."""


class DataError(Exception):
    """Dataset ingestion failure (bad value, bad format, empty file)."""
