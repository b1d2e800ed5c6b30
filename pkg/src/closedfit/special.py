"""Scalar special functions: log-gamma, digamma and trigamma.

Self-contained Stirling-series evaluations with argument shifting, accurate
enough for the log-likelihoods and score equations used elsewhere in the
package.  Array variants back the vectorised grid scans.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["log_gamma", "digamma", "trigamma"]

_LN_SQRT_2PI = 0.9189385332046727417803297364056176

# Stirling-series cutoff: with the coefficient lists below the truncation
# error at x = 8 is already below one double-precision ulp of the result.
_SHIFT = 8.0

# B_{2k} / (2k (2k-1)) for ln Gamma
_LGAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)

# psi(x) ~ ln x - 1/(2x) - sum_k c_k / x^{2k}
_DIGAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)

# psi'(x) ~ 1/x + 1/(2x^2) + (1/x^3) * sum_k c_k / x^{2(k-1)}
_TRIGAMMA_COEFFS = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
)


def _require_positive(x, name: str) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"{name} requires a finite argument > 0, got {x!r}")
    return x


def _horner(coeffs, w: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = c + w * acc
    return acc


def log_gamma(x) -> float:
    """Natural log of the gamma function for x > 0."""
    x = _require_positive(x, "log_gamma")
    shift = 0.0
    while x < _SHIFT:
        shift -= math.log(x)
        x += 1.0
    w = 1.0 / (x * x)
    series = _horner(_LGAMMA_COEFFS, w) / x
    return (x - 0.5) * math.log(x) - x + _LN_SQRT_2PI + series + shift


def digamma(x) -> float:
    """Digamma function psi(x) = d/dx ln Gamma(x) for x > 0."""
    x = _require_positive(x, "digamma")
    shift = 0.0
    while x < _SHIFT:
        shift -= 1.0 / x
        x += 1.0
    w = 1.0 / (x * x)
    return math.log(x) - 0.5 / x - w * _horner(_DIGAMMA_COEFFS, w) + shift


def trigamma(x) -> float:
    """Trigamma function psi'(x) for x > 0."""
    x = _require_positive(x, "trigamma")
    shift = 0.0
    while x < _SHIFT:
        shift += 1.0 / (x * x)
        x += 1.0
    w = 1.0 / (x * x)
    tail = _horner(_TRIGAMMA_COEFFS, w) / (x * x * x)
    return 1.0 / x + 0.5 * w + tail + shift


def _log_gamma_array(x: np.ndarray) -> np.ndarray:
    """Vectorised log_gamma for arrays of positive values (no validation)."""
    x = np.asarray(x, dtype=np.float64).copy()
    shift = np.zeros_like(x)
    # bounded loop: every pass moves the below-threshold entries up by one
    while True:
        low = x < _SHIFT
        if not low.any():
            break
        shift[low] -= np.log(x[low])
        x[low] += 1.0
    w = 1.0 / (x * x)
    series = np.zeros_like(x)
    for c in reversed(_LGAMMA_COEFFS):
        series = c + w * series
    series /= x
    return (x - 0.5) * np.log(x) - x + _LN_SQRT_2PI + series + shift


def _log_beta_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorised ln B(a, b) for positive arrays."""
    return _log_gamma_array(a) + _log_gamma_array(b) - _log_gamma_array(a + b)
