"""Beta-model primitives: parameters, samples, likelihood and sampling.

The sampler composes two gamma variates (G1/(G1+G2)), which is valid for all
shape values including those below one, and every routine is deterministic
given an explicit RNG stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .special import log_gamma

__all__ = [
    "UNIT_INTERVAL",
    "POSITIVE_HALF_LINE",
    "BetaParams",
    "Sample",
    "FitResult",
    "unit_sample",
    "positive_sample",
    "as_unit_values",
    "as_positive_values",
    "log_beta_fn",
    "beta_logpdf",
    "beta_loglik",
    "beta_sample",
    "information_criteria",
    "replication_stream",
]

UNIT_INTERVAL = "unit"
POSITIVE_HALF_LINE = "positive"


@dataclass(frozen=True)
class BetaParams:
    """Shape pair (alpha, beta), both strictly positive."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (math.isfinite(a) and a > 0.0):
            raise ValueError(f"alpha must be finite and > 0, got {self.alpha!r}")
        if not (math.isfinite(b) and b > 0.0):
            raise ValueError(f"beta must be finite and > 0, got {self.beta!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)


@dataclass(frozen=True)
class Sample:
    """Ordered observations plus the support they are constrained to."""

    values: np.ndarray
    domain: str = UNIT_INTERVAL

    def __len__(self) -> int:
        return self.values.size


def _validated_values(values, domain: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size < 1:
        raise ValueError("sample must contain at least one observation")
    if not np.isfinite(arr).all():
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValueError(f"non-finite observation at index {bad}: {arr[bad]!r}")
    if domain == UNIT_INTERVAL:
        if (arr <= 0.0).any() or (arr >= 1.0).any():
            bad = int(np.flatnonzero((arr <= 0.0) | (arr >= 1.0))[0])
            raise ValueError(
                f"observation at index {bad} outside the open interval (0,1): {arr[bad]!r}"
            )
    elif domain == POSITIVE_HALF_LINE:
        if (arr <= 0.0).any():
            bad = int(np.flatnonzero(arr <= 0.0)[0])
            raise ValueError(f"observation at index {bad} not strictly positive: {arr[bad]!r}")
    else:
        raise ValueError(f"unknown sample domain {domain!r}")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def unit_sample(values) -> Sample:
    """Sample constrained to the open unit interval."""
    return Sample(_validated_values(values, UNIT_INTERVAL), UNIT_INTERVAL)


def positive_sample(values) -> Sample:
    """Sample constrained to the positive half line."""
    return Sample(_validated_values(values, POSITIVE_HALF_LINE), POSITIVE_HALF_LINE)


def as_unit_values(sample) -> np.ndarray:
    """Coerce a Sample or array-like to validated unit-interval values."""
    if isinstance(sample, Sample):
        if sample.domain != UNIT_INTERVAL:
            raise ValueError("expected a unit-interval sample")
        return sample.values
    return _validated_values(sample, UNIT_INTERVAL)


def as_positive_values(sample) -> np.ndarray:
    if isinstance(sample, Sample):
        if sample.domain != POSITIVE_HALF_LINE:
            raise ValueError("expected a positive-domain sample")
        return sample.values
    return _validated_values(sample, POSITIVE_HALF_LINE)


@dataclass(frozen=True)
class FitResult:
    """Point estimates plus the usual model-comparison numbers."""

    params: object
    loglik: float
    aic: float
    bic: float
    method: str
    selected_rs: Optional[Tuple[float, float]] = None
    iterations: Optional[int] = None


def log_beta_fn(alpha: float, beta: float) -> float:
    """ln B(alpha, beta) via log-gamma."""
    return log_gamma(alpha) + log_gamma(beta) - log_gamma(alpha + beta)


def beta_logpdf(x: float, params: BetaParams) -> float:
    """Log density of Beta(alpha, beta) at a point of the open unit interval."""
    x = float(x)
    if not (0.0 < x < 1.0):
        raise ValueError(f"beta_logpdf requires 0 < x < 1, got {x!r}")
    a, b = params.alpha, params.beta
    return (a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x) - log_beta_fn(a, b)


def beta_loglik(sample, params: BetaParams) -> float:
    """Beta log-likelihood of a unit-interval sample."""
    x = as_unit_values(sample)
    a, b = params.alpha, params.beta
    return (
        (a - 1.0) * float(np.log(x).sum())
        + (b - 1.0) * float(np.log1p(-x).sum())
        - x.size * log_beta_fn(a, b)
    )


def information_criteria(loglik: float, k: int, n) -> Tuple[float, float]:
    """AIC and BIC for a k-parameter fit on n observations."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    aic = -2.0 * loglik + 2.0 * k
    bic = -2.0 * loglik + k * math.log(n)
    return aic, bic


def replication_stream(seed: int, index: int = 0) -> np.random.Generator:
    """Independent counter-based stream for replication `index` under `seed`.

    The derivation rule is (master seed, replication index) -> Philox stream,
    so replications can run in any order, or in parallel, and still reproduce.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


def beta_sample(params: BetaParams, n: int, rng: np.random.Generator) -> Sample:
    """Draw n Beta(alpha, beta) variates strictly inside (0,1).

    Uses the gamma-ratio construction G1/(G1+G2); draws that land on a
    floating-point boundary are redrawn because downstream statistics take
    logs of x, 1-x and 1-x^r.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    g1 = rng.standard_gamma(params.alpha, n)
    g2 = rng.standard_gamma(params.beta, n)
    x = g1 / (g1 + g2)
    bad = ~np.isfinite(x) | (x <= 0.0) | (x >= 1.0)
    while bad.any():
        k = int(bad.sum())
        h1 = rng.standard_gamma(params.alpha, k)
        h2 = rng.standard_gamma(params.beta, k)
        x[bad] = h1 / (h1 + h2)
        bad = ~np.isfinite(x) | (x <= 0.0) | (x >= 1.0)
    return unit_sample(x)
