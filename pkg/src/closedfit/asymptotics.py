"""Delta-method asymptotics for the closed-form beta estimators.

Each estimator corresponds to a pair of monotone transforms.  Ten sample
functionals of the pair feed two rational maps whose value at the empirical
means is exactly the closed-form estimate; the asymptotic covariance is the
Jacobian of those maps sandwiched around the functional covariance matrix.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate
from scipy.stats import norm

from .errors import DegenerateSampleError, NonFiniteStatisticsError, OutOfDomainError
from .model import BetaParams, as_unit_values, log_beta_fn
from .special import trigamma

__all__ = [
    "Transform",
    "builtin_transform_pair",
    "theta_eval",
    "MomentVector",
    "empirical_moments",
    "xi_maps",
    "AsymptoticResult",
    "delta_method",
    "population_moments",
    "population_fixed_point",
    "ml_asymptotics",
]


@dataclass(frozen=True)
class Transform:
    """A monotone twice-differentiable map g into (0,1), with the closed-form
    identities the score machinery needs.

    `components` are the five per-observation functionals (vectorised, in the
    simplified algebraic form), `aggregate` is 1 + third + fourth + fifth in
    pointwise-simplified form, which stays bounded even where the individual
    terms diverge.
    """

    label: str
    forward: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]
    deriv_at_inverse: Callable[[np.ndarray], np.ndarray]
    curvature_at_inverse: Callable[[np.ndarray], np.ndarray]
    components: Tuple[Callable[[np.ndarray], np.ndarray], ...]
    aggregate: Callable[[np.ndarray], np.ndarray]


def _theta_components_from_ingredients(t: Transform):
    """Generic composition of the five functionals from the raw identities.

    Used by tests to validate the simplified `components`; numerically less
    robust than the simplified forms near the interval boundary.
    """

    def base(x):
        inv = t.inverse(x)
        return t.deriv_at_inverse(x) * inv * np.log(inv)

    return (
        lambda x: base(x) / x,
        lambda x: base(x) / (1.0 - x),
        lambda x: t.curvature_at_inverse(x) * t.inverse(x) * np.log(t.inverse(x)),
        lambda x: (2.0 * x - 1.0) * base(x) / (x * (1.0 - x)),
        lambda x: np.log(t.inverse(x)),
    )


def _identity_transform() -> Transform:
    one = lambda x: np.ones_like(np.asarray(x, dtype=np.float64))
    return Transform(
        label="identity",
        forward=lambda x: np.asarray(x, dtype=np.float64),
        inverse=lambda x: np.asarray(x, dtype=np.float64),
        deriv_at_inverse=one,
        curvature_at_inverse=lambda x: np.zeros_like(np.asarray(x, dtype=np.float64)),
        components=(
            lambda x: np.log(x),
            lambda x: x * np.log(x) / (1.0 - x),
            lambda x: np.zeros_like(x),
            lambda x: (2.0 * x - 1.0) * np.log(x) / (1.0 - x),
            lambda x: np.log(x),
        ),
        aggregate=lambda x: 1.0 + x * np.log(x) / (1.0 - x),
    )


def _one_minus_transform() -> Transform:
    return Transform(
        label="one-minus",
        forward=lambda x: 1.0 - np.asarray(x, dtype=np.float64),
        inverse=lambda x: 1.0 - np.asarray(x, dtype=np.float64),
        deriv_at_inverse=lambda x: -np.ones_like(np.asarray(x, dtype=np.float64)),
        curvature_at_inverse=lambda x: np.zeros_like(np.asarray(x, dtype=np.float64)),
        components=(
            lambda x: -(1.0 - x) * np.log1p(-x) / x,
            lambda x: -np.log1p(-x),
            lambda x: np.zeros_like(x),
            lambda x: -(2.0 * x - 1.0) * np.log1p(-x) / x,
            lambda x: np.log1p(-x),
        ),
        aggregate=lambda x: 1.0 + (1.0 - x) * np.log1p(-x) / x,
    )


def _logit(x):
    return np.log(x) - np.log1p(-x)


def _tamae_odds_transform() -> Transform:
    return Transform(
        label="odds",
        forward=lambda y: y / (y + 1.0),
        inverse=lambda x: x / (1.0 - x),
        deriv_at_inverse=lambda x: (x - 1.0) ** 2,
        curvature_at_inverse=lambda x: 2.0 * (x - 1.0),
        components=(
            lambda x: (1.0 - x) * _logit(x),
            lambda x: x * _logit(x),
            lambda x: -2.0 * x * _logit(x),
            lambda x: (2.0 * x - 1.0) * _logit(x),
            lambda x: _logit(x),
        ),
        aggregate=lambda x: np.ones_like(np.asarray(x, dtype=np.float64)),
    )


def _tamae_log_transform() -> Transform:
    return Transform(
        label="log-fraction",
        forward=lambda y: -np.log(y) / (1.0 - np.log(y)),
        inverse=lambda x: np.exp(x / (x - 1.0)),
        deriv_at_inverse=lambda x: -((x - 1.0) ** 2) * np.exp(x / (1.0 - x)),
        curvature_at_inverse=lambda x: -(2.0 * x - 1.0) * np.exp(x / (1.0 - x)),
        components=(
            lambda x: 1.0 - x,
            lambda x: np.asarray(x, dtype=np.float64),
            lambda x: (2.0 * x - 1.0) * x / (1.0 - x),
            lambda x: 2.0 * x - 1.0,
            lambda x: -x / (1.0 - x),
        ),
        aggregate=lambda x: np.zeros_like(np.asarray(x, dtype=np.float64)),
    )


def _rs_transform(r: float, s: float) -> Transform:
    if not (r > 0.0 and s > 0.0):
        raise ValueError(f"r and s must be > 0, got ({r!r}, {s!r})")

    def inverse(x):
        return np.expm1(s * np.log1p(-(x ** r))) + 1.0  # (1 - x^r)^s

    def deriv(x):
        u = x ** r
        return -np.exp((1.0 - s) * np.log1p(-u)) * x ** (1.0 - r) / (r * s)

    def curvature(x):
        u = x ** r
        return np.exp(-s * np.log1p(-u)) * x ** (-r) * (r - 1.0 + (1.0 - r * s) * u) / (r * s)

    def c1(x):
        u = x ** r
        return -(1.0 - u) * np.log1p(-u) / (r * u)

    def c2(x):
        u = x ** r
        return -(1.0 - u) * np.log1p(-u) / (r * (1.0 - x) * x ** (r - 1.0))

    def c3(x):
        # mirrors the displayed sixth statistic of the closed-form system
        u = x ** r
        l = np.log1p(-u)
        w = np.exp(s * (l - 2.0 * np.log(x)) + r * np.log(x))
        return ((r - (1.0 - u)) - (r * s) * u) * w * l / r

    def c4(x):
        u = x ** r
        return -(2.0 * x - 1.0) * (1.0 - u) * np.log1p(-u) / (r * (1.0 - x) * x ** r)

    def c5(x):
        return s * np.log1p(-(x ** r))

    def aggregate(x):
        return 1.0 + c3(x) + c4(x) + c5(x)

    return Transform(
        label=f"rs(r={r:g},s={s:g})",
        forward=lambda y: (1.0 - y ** (1.0 / s)) ** (1.0 / r),
        inverse=inverse,
        deriv_at_inverse=deriv,
        curvature_at_inverse=curvature,
        components=(c1, c2, c3, c4, c5),
        aggregate=aggregate,
    )


def builtin_transform_pair(name: str, r: Optional[float] = None,
                           s: Optional[float] = None) -> Tuple[Transform, Transform]:
    """The transform pair behind each named closed-form estimator.

    `chen-xiao` pairs the identity map with 1-x; `tamae` pairs x/(x+1) with
    -log(x)/(1-log(x)); `rs` pairs the identity map with the two-parameter
    power transform and requires r and s.
    """
    key = name.strip().lower()
    if key == "chen-xiao":
        return _identity_transform(), _one_minus_transform()
    if key == "tamae":
        return _tamae_odds_transform(), _tamae_log_transform()
    if key == "rs":
        if r is None or s is None:
            raise ValueError("the rs pair requires r and s")
        return _identity_transform(), _rs_transform(float(r), float(s))
    raise ValueError(f"unknown transform pair {name!r}; expected chen-xiao, tamae or rs")


def _theta_matrix(values: np.ndarray, pair: Tuple[Transform, Transform]) -> np.ndarray:
    """Per-observation functional matrix with columns (k=1..5, j=1) then (k=1..5, j=2)."""
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        cols = [comp(values) for t in pair for comp in t.components]
    out = np.column_stack([np.broadcast_to(c, values.shape) for c in cols])
    if not np.isfinite(out).all():
        raise NonFiniteStatisticsError("non-finite functional value in theta evaluation")
    return out


def theta_eval(x: float, pair: Tuple[Transform, Transform]) -> np.ndarray:
    """The ten functional values at a single observation."""
    x = float(x)
    if not (0.0 < x < 1.0):
        raise ValueError(f"theta_eval requires 0 < x < 1, got {x!r}")
    return _theta_matrix(np.array([x]), pair)[0]


@dataclass(frozen=True)
class MomentVector:
    """Empirical means of the ten functionals plus their sample covariance."""

    means: np.ndarray       # (10,)
    covariance: np.ndarray  # (10, 10), unbiased
    n: int


def empirical_moments(sample, pair: Tuple[Transform, Transform]) -> MomentVector:
    x = as_unit_values(sample)
    if x.size < 2:
        raise DegenerateSampleError("empirical moments need at least two observations")
    t = _theta_matrix(x, pair)
    means = t.mean(axis=0)
    centered = t - means
    cov = centered.T @ centered / (x.size - 1)
    return MomentVector(means, cov, x.size)


def _xi_pair(m: Sequence[float]) -> Tuple[float, float]:
    """Raw values of the two rational maps at a 10-vector (no domain checks)."""
    x11, x21, x31, x41, x51, x12, x22, x32, x42, x52 = (float(v) for v in m)
    u1 = 1.0 + x31 + x41 + x51
    num = (u1 / x21) * x22 - 1.0 - x32 - x42 - x52
    den = x12 - x11 * x22 / x21
    alpha = num / den
    beta = (alpha * x11 + u1) / x21
    return alpha, beta


def xi_maps(moments) -> BetaParams:
    """Apply the two closed-form maps to a 10-vector of functional means.

    At the empirical means this reproduces the corresponding closed-form
    estimator exactly.
    """
    m = np.asarray(getattr(moments, "means", moments), dtype=np.float64).reshape(-1)
    if m.size != 10:
        raise ValueError(f"expected a 10-vector of moments, got size {m.size}")
    x21 = m[1]
    den = m[5] - m[0] * m[6] / x21
    if abs(x21) < 1e-12 or not math.isfinite(den) or abs(den) < 1e-12 * max(1.0, abs(m[5])):
        raise DegenerateSampleError("degenerate denominator in the closed-form maps")
    alpha, beta = _xi_pair(m)
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise NonFiniteStatisticsError("closed-form maps evaluated to a non-finite value")
    if alpha <= 0.0 or beta <= 0.0:
        raise OutOfDomainError(
            f"closed-form maps produced nonpositive estimates ({alpha!r}, {beta!r})",
            estimates=(alpha, beta))
    return BetaParams(alpha, beta)


def _xi_jacobian(means: np.ndarray, steps: Optional[np.ndarray] = None) -> np.ndarray:
    """Central-difference 2x10 Jacobian of the maps at `means`."""
    means = np.asarray(means, dtype=np.float64)
    if steps is None:
        steps = np.maximum(1e-6, 1e-6 * np.abs(means))
    jac = np.empty((2, 10))
    for i in range(10):
        hi = means.copy()
        lo = means.copy()
        hi[i] += steps[i]
        lo[i] -= steps[i]
        fa, fb = _xi_pair(hi)
        ga, gb = _xi_pair(lo)
        if not all(map(math.isfinite, (fa, fb, ga, gb))):
            raise DegenerateSampleError(
                "Jacobian evaluation hit a degenerate denominator")
        jac[0, i] = (fa - ga) / (2.0 * steps[i])
        jac[1, i] = (fb - gb) / (2.0 * steps[i])
    return jac


@dataclass(frozen=True)
class AsymptoticResult:
    estimates: BetaParams
    covariance: np.ndarray                 # 2x2, already divided by n
    std_errors: Tuple[float, float]
    wald_intervals: Tuple[Tuple[float, float], Tuple[float, float]]
    level: float


def _wald(est: Tuple[float, float], cov: np.ndarray, level: float) -> AsymptoticResult:
    se = tuple(math.sqrt(max(float(cov[i, i]), 0.0)) for i in range(2))
    z = float(norm.ppf(0.5 + level / 2.0))
    ci = tuple((est[i] - z * se[i], est[i] + z * se[i]) for i in range(2))
    return AsymptoticResult(BetaParams(est[0], est[1]), cov, se, ci, level)


def _delta_covariance(mv: MomentVector, steps: Optional[np.ndarray] = None) -> np.ndarray:
    a = _xi_jacobian(mv.means, steps)
    return a @ mv.covariance @ a.T / mv.n


def delta_method(sample, pair: Tuple[Transform, Transform],
                 level: float = 0.95) -> AsymptoticResult:
    """Standard errors and Wald intervals for the pair's closed-form estimator.

    The Jacobian of the closed-form maps is taken numerically at the empirical
    functional means; the covariance of the estimates is J Cov J^T / n.
    """
    if not (0.0 < level < 1.0):
        raise ValueError(f"confidence level must be in (0,1), got {level!r}")
    mv = empirical_moments(sample, pair)
    if mv.n < 3:
        raise DegenerateSampleError("delta method needs at least three observations")
    est = xi_maps(mv.means)
    cov = _delta_covariance(mv)
    return _wald((est.alpha, est.beta), cov, level)


def ml_asymptotics(params: BetaParams, n: int, level: float = 0.95) -> AsymptoticResult:
    """Wald machinery for the ML fit via the inverse expected information."""
    if n < 1:
        raise ValueError("n must be >= 1")
    t_ab = trigamma(params.alpha + params.beta)
    info = np.array([
        [trigamma(params.alpha) - t_ab, -t_ab],
        [-t_ab, trigamma(params.beta) - t_ab],
    ])
    cov = np.linalg.inv(info) / n
    return _wald((params.alpha, params.beta), cov, level)


# ---------------------------------------------------------------------------
# Population (quadrature) side
# ---------------------------------------------------------------------------

def _beta_pdf_factory(params: BetaParams):
    lb = log_beta_fn(params.alpha, params.beta)
    a1 = params.alpha - 1.0
    b1 = params.beta - 1.0

    def pdf(x: float) -> float:
        if x <= 0.0 or x >= 1.0:
            return 0.0
        return math.exp(a1 * math.log(x) + b1 * math.log1p(-x) - lb)

    return pdf


def _expect(fn, params: BetaParams, epsabs: float = 1e-11, epsrel: float = 1e-11) -> float:
    """E[fn(X)] for X ~ Beta(params) by adaptive quadrature."""
    pdf = _beta_pdf_factory(params)

    def integrand(x: float) -> float:
        if x <= 0.0 or x >= 1.0:
            return 0.0
        return float(fn(np.float64(x))) * pdf(x)

    with warnings.catch_warnings():
        # endpoint singularities trip QUADPACK's roundoff heuristics even
        # when the extrapolated value is accurate; checked by the fixed-point
        # identity tests
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=epsabs, epsrel=epsrel, limit=500)
    return val


def population_moments(params: BetaParams, pair: Tuple[Transform, Transform]) -> np.ndarray:
    """Componentwise population version of the ten functional means.

    Only meaningful for pairs whose components are all integrable under the
    given parameters (true for the chen-xiao pair at any alpha, beta > 0).
    """
    vals = [
        _expect(comp, params)
        for t in pair for comp in t.components
    ]
    return np.asarray(vals)


def population_fixed_point(params: BetaParams,
                           pair: Tuple[Transform, Transform]) -> Tuple[float, float]:
    """Solve the population estimating equations of the pair.

    Integrates the first two functionals and the bounded score aggregate for
    each transform, then solves the resulting 2x2 linear system.  Under the
    asymptotic theory the solution equals the generating (alpha, beta); this
    form stays defined even where individual functional expectations diverge
    or the staged map displays hit removable 0/0 points.
    """
    rows = []
    rhs = []
    for t in pair:
        c = _expect(t.components[0], params)
        d = _expect(t.components[1], params)
        u = _expect(t.aggregate, params)
        rows.append([c, -d])
        rhs.append(-u)
    sol = np.linalg.solve(np.asarray(rows), np.asarray(rhs))
    return float(sol[0]), float(sol[1])
