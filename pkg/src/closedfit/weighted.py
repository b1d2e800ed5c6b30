"""Closed-form estimators for the weighted exponential family on (0, inf).

The family is indexed by a strictly monotone generator S and a Kronecker flag
that switches between the weighted (a=b) and unweighted (a!=b) normalisers.
The gamma, Nakagami and weighted-Lindley models are the named special cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    DegenerateSampleError,
    EstimationError,
    NonFiniteStatisticsError,
    OutOfDomainError,
)
from .model import FitResult, as_positive_values, information_criteria
from .special import log_gamma

__all__ = [
    "Generator",
    "WeightedParams",
    "WeightedStatistics",
    "builtin_generator",
    "weighted_statistics",
    "exp_variant_statistics",
    "weighted_logpdf",
    "weighted_loglik",
    "fit_weighted",
    "fit_weighted_exp_variant",
]

_DEG_RTOL = 1e-12


@dataclass(frozen=True)
class Generator:
    """Strictly monotone twice-differentiable map (0,inf) -> (0,inf)."""

    label: str
    s: Callable[[np.ndarray], np.ndarray]
    s_prime: Callable[[np.ndarray], np.ndarray]
    s_second: Callable[[np.ndarray], np.ndarray]


_BUILTIN_GENERATORS = {
    "gamma": Generator(
        "gamma",
        lambda x: np.asarray(x, dtype=np.float64),
        lambda x: np.ones_like(np.asarray(x, dtype=np.float64)),
        lambda x: np.zeros_like(np.asarray(x, dtype=np.float64)),
    ),
    "nakagami": Generator(
        "nakagami",
        lambda x: np.asarray(x, dtype=np.float64) ** 2,
        lambda x: 2.0 * np.asarray(x, dtype=np.float64),
        lambda x: np.full_like(np.asarray(x, dtype=np.float64), 2.0),
    ),
    # identity generator paired with the a=b normaliser
    "weighted-lindley": Generator(
        "weighted-lindley",
        lambda x: np.asarray(x, dtype=np.float64),
        lambda x: np.ones_like(np.asarray(x, dtype=np.float64)),
        lambda x: np.zeros_like(np.asarray(x, dtype=np.float64)),
    ),
    "inverse": Generator(
        "inverse",
        lambda x: 1.0 / np.asarray(x, dtype=np.float64),
        lambda x: -1.0 / np.asarray(x, dtype=np.float64) ** 2,
        lambda x: 2.0 / np.asarray(x, dtype=np.float64) ** 3,
    ),
}


def builtin_generator(name: str) -> Generator:
    """Look up a named generator (gamma, nakagami, weighted-lindley, inverse)."""
    key = name.strip().lower()
    try:
        return _BUILTIN_GENERATORS[key]
    except KeyError:
        known = ", ".join(sorted(_BUILTIN_GENERATORS))
        raise ValueError(f"unknown generator {name!r}; built-ins: {known}") from None


@dataclass(frozen=True)
class WeightedParams:
    """(mu, sigma) pair plus the Kronecker flag selecting the family branch."""

    mu: float
    sigma: float
    kronecker: bool = False

    def __post_init__(self):
        mu, sg = float(self.mu), float(self.sigma)
        if not (math.isfinite(mu) and mu > 0.0):
            raise ValueError(f"mu must be finite and > 0, got {self.mu!r}")
        if not (math.isfinite(sg) and sg > 0.0):
            raise ValueError(f"sigma must be finite and > 0, got {self.sigma!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sg)


@dataclass(frozen=True)
class WeightedStatistics:
    """Sample functionals feeding the closed forms; f only for the exp variant."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: Optional[float] = None


def _bracket(gen: Generator, x: np.ndarray, s_vals: np.ndarray,
             s_prime: np.ndarray, kronecker: bool) -> np.ndarray:
    # S''/S' - S'/(S [1 + delta S])
    delta = 1.0 if kronecker else 0.0
    return gen.s_second(x) / s_prime - s_prime / (s_vals * (1.0 + delta * s_vals))


def _validate_stats(stats: WeightedStatistics) -> WeightedStatistics:
    vals = [stats.a, stats.b, stats.c, stats.d, stats.e]
    if stats.f is not None:
        vals.append(stats.f)
    if not all(map(math.isfinite, vals)):
        raise NonFiniteStatisticsError(f"non-finite weighted statistics: {stats}")
    return stats


def weighted_statistics(sample, gen: Generator, kronecker: bool = False) -> WeightedStatistics:
    """The five functionals behind the power-transform closed forms."""
    x = as_positive_values(sample)
    s_vals = gen.s(x)
    s_prime = gen.s_prime(x)
    xl = x * np.log(x)
    a = float(s_vals.mean())
    b = float((s_prime / s_vals * xl).mean())
    c = float((s_prime * xl).mean())
    d = float(np.log(x).mean())
    e = float((_bracket(gen, x, s_vals, s_prime, kronecker) * xl).mean())
    return _validate_stats(WeightedStatistics(a, b, c, d, e))


def exp_variant_statistics(sample, gen: Generator, kronecker: bool = False,
                           r: float = 1.0) -> WeightedStatistics:
    """The six functionals behind the exp(rx)-1 transform closed forms."""
    if not (math.isfinite(r) and r > 0.0):
        raise ValueError(f"r must be finite and > 0, got {r!r}")
    x = as_positive_values(sample)
    s_vals = gen.s(x)
    s_prime = gen.s_prime(x)
    lx1 = np.log1p(x)
    g = np.log(lx1 / r)
    w = (x + 1.0) * lx1 * g
    a = float(s_vals.mean())
    b = float((s_prime / s_vals * w).mean())
    c = float((s_prime * w).mean())
    d = float((lx1 * g).mean())
    e = float((_bracket(gen, x, s_vals, s_prime, kronecker) * w).mean())
    f = float(g.mean())
    return _validate_stats(WeightedStatistics(a, b, c, d, e, f))


def _solve_weighted(stats: WeightedStatistics, kronecker: bool) -> WeightedParams:
    a, b, c = stats.a, stats.b, stats.c
    k = 1.0 + stats.d + stats.e + (stats.f if stats.f is not None else 0.0)
    if abs(a) < _DEG_RTOL:
        raise DegenerateSampleError(f"mean S(X) is numerically zero ({a!r})")

    if not kronecker:
        sigma = 1.0 / a
        den = c - a * b
        if abs(den) < _DEG_RTOL * max(1.0, abs(a * k)):
            raise DegenerateSampleError(f"C - A*B is numerically zero ({den!r})")
        mu = a * k / den
    else:
        if abs(k) < _DEG_RTOL * max(1.0, abs(c)):
            raise DegenerateSampleError(f"1 + D + E (+F) is numerically zero ({k!r})")
        p = 1.0 - a + c / k
        disc = p * p - 4.0 * a * (b / k - 1.0)
        if disc < 0.0:
            raise EstimationError(f"negative discriminant in the a=b branch ({disc!r})")
        sigma = (p + math.sqrt(disc)) / (2.0 * a)
        if not math.isfinite(sigma) or sigma <= 0.0:
            raise OutOfDomainError(
                f"a=b branch produced nonpositive sigma ({sigma!r})", estimates=(None, sigma))
        den = 1.0 - sigma * a
        if abs(den) < _DEG_RTOL:
            raise DegenerateSampleError(f"1 - sigma*A is numerically zero ({den!r})")
        mu = (sigma / (sigma + 1.0) - 1.0) / den

    if not (math.isfinite(mu) and math.isfinite(sigma)):
        raise NonFiniteStatisticsError(f"non-finite estimates (mu={mu!r}, sigma={sigma!r})")
    if mu <= 0.0 or sigma <= 0.0:
        raise OutOfDomainError(
            f"weighted fit produced nonpositive estimates (mu={mu!r}, sigma={sigma!r})",
            estimates=(mu, sigma))
    return WeightedParams(mu, sigma, kronecker)


def weighted_logpdf(x, params: WeightedParams, gen: Generator) -> float:
    """Log density of the weighted family at a point x > 0."""
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise ValueError(f"weighted_logpdf requires x > 0, got {x!r}")
    delta = 1.0 if params.kronecker else 0.0
    s_val = float(gen.s(np.float64(x)))
    s_pr = float(gen.s_prime(np.float64(x)))
    mu, sg = params.mu, params.sigma
    norm = (mu + 1.0) * math.log(mu * sg) - math.log(sg + delta) - log_gamma(mu + 1.0)
    weight = math.log1p(delta * s_val) + math.log(abs(s_pr)) - math.log(s_val)
    return norm + weight - mu * sg * s_val + mu * math.log(s_val)


def weighted_loglik(sample, params: WeightedParams, gen: Generator) -> float:
    x = as_positive_values(sample)
    delta = 1.0 if params.kronecker else 0.0
    s_vals = gen.s(x)
    s_prime = gen.s_prime(x)
    mu, sg = params.mu, params.sigma
    norm = (mu + 1.0) * math.log(mu * sg) - math.log(sg + delta) - log_gamma(mu + 1.0)
    terms = (
        np.log1p(delta * s_vals) + np.log(np.abs(s_prime)) - np.log(s_vals)
        - mu * sg * s_vals + mu * np.log(s_vals)
    )
    return x.size * norm + float(terms.sum())


def _finish(sample, params: WeightedParams, gen: Generator, method: str) -> FitResult:
    x = as_positive_values(sample)
    ll = weighted_loglik(x, params, gen)
    aic, bic = information_criteria(ll, 2, x.size)
    return FitResult(params, ll, aic, bic, method)


def fit_weighted(sample, gen: Generator, kronecker: bool = False) -> FitResult:
    """Closed-form (mu, sigma) fit from the power-transform estimating equations.

    For a != b the solution is sigma = 1/mean S(X) and
    mu = A (1 + D + E) / (C - A B); the a = b branch takes the positive root
    of the displayed quadratic and is validated for positivity afterwards.
    """
    x = as_positive_values(sample)
    if x.size < 2:
        raise DegenerateSampleError("weighted fit needs at least two observations")
    stats = weighted_statistics(x, gen, kronecker)
    params = _solve_weighted(stats, kronecker)
    return _finish(x, params, gen, f"weighted-{gen.label}")


def fit_weighted_exp_variant(sample, gen: Generator, kronecker: bool = False,
                             r: float = 1.0) -> FitResult:
    """Closed-form fit built on the exp(rx)-1 transform instead of powers.

    Same algebra as fit_weighted with the log-log weighted statistics and the
    extra F functional folded into the numerators.  r is a free tuning
    constant; no selection rule is applied.
    """
    x = as_positive_values(sample)
    if x.size < 2:
        raise DegenerateSampleError("weighted fit needs at least two observations")
    stats = exp_variant_statistics(x, gen, kronecker, r)
    params = _solve_weighted(stats, kronecker)
    return _finish(x, params, gen, f"weighted-exp-{gen.label}")


def weighted_equation_residuals(stats: WeightedStatistics, params: WeightedParams):
    """Residuals of the two defining estimating equations at (mu, sigma).

    Returns the normaliser-side residual and the transform-side residual; both
    are algebraically zero at the closed-form solution.
    """
    delta = 1.0 if params.kronecker else 0.0
    mu, sg = params.mu, params.sigma
    k_extra = stats.f if stats.f is not None else 0.0
    res_sigma = 1.0 / (sg + delta) - (mu + 1.0) / sg + mu * stats.a
    res_transform = mu * stats.b - mu * sg * stats.c + 1.0 + stats.d + stats.e + k_extra
    return res_sigma, res_transform
