"""Beta-parameter estimators.

Four fitters live here: the damped-Newton maximum-likelihood reference, the
two fixed closed forms (Chen-Xiao and Tamae-style), and the transform-indexed
closed-form family with its profile-likelihood selector.  Every closed form
is the exact algebraic solution of a two-equation moment-type system, so the
estimates can always be validated by substituting them back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import (
    DegenerateSampleError,
    EstimationError,
    NonConvergenceError,
    NonFiniteStatisticsError,
    OutOfDomainError,
)
from .model import BetaParams, FitResult, as_unit_values, beta_loglik, information_criteria
from .special import _log_beta_array, digamma, trigamma

__all__ = [
    "RSPair",
    "RSStatistics",
    "Grid",
    "default_grid",
    "fit_ml",
    "fit_chen_xiao",
    "fit_tamae",
    "rs_statistics",
    "fit_rs",
    "fit_profile",
    "profile_scan",
    "ProfileScan",
    "ml_score",
]

# A denominator counts as zero when it is this small relative to its numerator.
DEGENERACY_RTOL = 1e-12

# Log-likelihood ties inside this window resolve to the smallest (r, s).
PROFILE_TIE_TOL = 1e-12


def _check_denominator(den: float, num_scale: float, what: str) -> None:
    if not math.isfinite(den) or abs(den) < DEGENERACY_RTOL * max(1.0, abs(num_scale)):
        raise DegenerateSampleError(f"{what} is numerically zero (den={den!r})")


def _finish(x: np.ndarray, alpha: float, beta: float, method: str,
            selected_rs=None, iterations=None) -> FitResult:
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise NonFiniteStatisticsError(
            f"{method} produced non-finite estimates ({alpha!r}, {beta!r})")
    if alpha <= 0.0 or beta <= 0.0:
        raise OutOfDomainError(
            f"{method} produced nonpositive estimates ({alpha!r}, {beta!r})",
            estimates=(alpha, beta))
    params = BetaParams(alpha, beta)
    ll = beta_loglik(x, params)
    aic, bic = information_criteria(ll, 2, x.size)
    return FitResult(params, ll, aic, bic, method, selected_rs, iterations)


# ---------------------------------------------------------------------------
# Maximum likelihood
# ---------------------------------------------------------------------------

def ml_score(alpha: float, beta: float, mean_log_x: float, mean_log_1mx: float):
    """Score residuals of the beta log-likelihood (per observation)."""
    common = digamma(alpha + beta)
    return (
        digamma(alpha) - common - mean_log_x,
        digamma(beta) - common - mean_log_1mx,
    )


def fit_ml(sample, tol: float = 1e-10, max_iter: int = 200) -> FitResult:
    """Maximum-likelihood fit via damped Newton on the score equations.

    Starts from the method-of-moments point and halves the step whenever an
    iterate would leave the positive quadrant.  Raises NonConvergenceError
    (carrying the last iterate) if the residual has not dropped below `tol`
    within `max_iter` iterations.
    """
    x = as_unit_values(sample)
    if x.size < 2:
        raise DegenerateSampleError("maximum likelihood needs at least two observations")
    if np.ptp(x) == 0.0:
        raise DegenerateSampleError("degenerate sample: all observations identical")

    mlx = float(np.log(x).mean())
    ml1x = float(np.log1p(-x).mean())

    m = float(x.mean())
    v = float(x.var())
    if v <= 0.0:
        raise DegenerateSampleError("degenerate sample: zero variance")
    scale = m * (1.0 - m) / v - 1.0
    a = max(m * scale, 1e-3)
    b = max((1.0 - m) * scale, 1e-3)

    it = 0
    r1, r2 = ml_score(a, b, mlx, ml1x)
    while max(abs(r1), abs(r2)) > tol:
        if it >= max_iter:
            raise NonConvergenceError(
                f"ML did not converge in {max_iter} iterations",
                last_iterate=(a, b), residual=(r1, r2), iterations=it)
        psi1_ab = trigamma(a + b)
        j11 = trigamma(a) - psi1_ab
        j22 = trigamma(b) - psi1_ab
        det = j11 * j22 - psi1_ab * psi1_ab
        if det == 0.0 or not math.isfinite(det):
            raise DegenerateSampleError("singular Jacobian in ML Newton step")
        da = -(j22 * r1 + psi1_ab * r2) / det
        db = -(psi1_ab * r1 + j11 * r2) / det
        step = 1.0
        while a + step * da <= 0.0 or b + step * db <= 0.0:
            step *= 0.5
            if step < 1e-12:
                raise NonConvergenceError(
                    "ML step collapsed at the domain boundary",
                    last_iterate=(a, b), residual=(r1, r2), iterations=it)
        a += step * da
        b += step * db
        r1, r2 = ml_score(a, b, mlx, ml1x)
        it += 1
    return _finish(x, a, b, "ml", iterations=it)


# ---------------------------------------------------------------------------
# Fixed closed forms
# ---------------------------------------------------------------------------

def fit_chen_xiao(sample) -> FitResult:
    """Closed-form fit from the identity / one-minus transform pair.

    Exactly solves the linear system
        alpha*A - beta*B = -1 - B,      A = mean log X,  B = mean X log(X)/(1-X)
       -alpha*C + beta*D = -1 - C,      C = mean (1-X)/X log(1-X),  D = mean log(1-X).
    """
    x = as_unit_values(sample)
    if x.size < 2:
        raise DegenerateSampleError("closed-form fit needs at least two observations")
    lx = np.log(x)
    l1x = np.log1p(-x)
    a = float(lx.mean())
    b = float((x / (1.0 - x) * lx).mean())
    c = float(((1.0 - x) / x * l1x).mean())
    d = float(l1x.mean())

    _check_denominator(a, (b + 1.0) * c, "mean log X")
    num = -1.0 - c - (b + 1.0) * c / a
    den = d - b * c / a
    _check_denominator(den, num, "chen-xiao denominator")
    beta = num / den
    alpha = ((beta - 1.0) * b - 1.0) / a
    return _finish(x, alpha, beta, "chen-xiao")


def fit_tamae(sample) -> FitResult:
    """Closed-form fit from the odds / log-fraction transform pair.

    alpha = mean(X) / den and beta = (1 - mean(X)) / den with
    den = mean(X logit X) - mean(X) mean(logit X).
    """
    x = as_unit_values(sample)
    if x.size < 2:
        raise DegenerateSampleError("closed-form fit needs at least two observations")
    lg = np.log(x) - np.log1p(-x)
    m = float(x.mean())
    den = float((x * lg).mean()) - m * float(lg.mean())
    _check_denominator(den, m, "tamae denominator")
    if den < 0.0:
        raise OutOfDomainError(
            f"tamae denominator negative ({den!r}); estimates would be nonpositive",
            estimates=(m / den, (1.0 - m) / den))
    return _finish(x, m / den, (1.0 - m) / den, "tamae")


# ---------------------------------------------------------------------------
# (r, s) closed-form family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RSPair:
    r: float
    s: float

    def __post_init__(self):
        r, s = float(self.r), float(self.s)
        if not (math.isfinite(r) and r > 0.0 and math.isfinite(s) and s > 0.0):
            raise ValueError(f"r and s must be finite and > 0, got ({self.r!r}, {self.s!r})")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)


@dataclass(frozen=True)
class RSStatistics:
    """The six sample functionals behind the (r, s) closed forms."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float


def _stats_ab(x: np.ndarray, lx: np.ndarray) -> Tuple[float, float]:
    return float(lx.mean()), float((x / (1.0 - x) * lx).mean())


def _stats_cdf(x: np.ndarray, u: np.ndarray, l: np.ndarray, r: float):
    with np.errstate(divide="ignore", invalid="ignore"):
        c = float(((1.0 - u) / u * l).mean())
        d = float(((1.0 - u) / ((1.0 - x) * x ** (r - 1.0)) * l).mean())
    f = float(l.mean())
    return c, d, f


def _stat_e(u: np.ndarray, l: np.ndarray, lx: np.ndarray, r: float, s: float) -> float:
    # (1-x^r)^s / x^(2s-r) evaluated in log space to postpone overflow;
    # overflow still possible for extreme (r, s) and is flagged by the caller
    with np.errstate(over="ignore"):
        w = np.exp(s * (l - 2.0 * lx) + r * lx)
        return float((((r - (1.0 - u)) - (r * s) * u) * w * l).mean())


def rs_statistics(sample, r: float, s: float) -> RSStatistics:
    """The A-F functionals for one (r, s) and one sample."""
    pair = RSPair(r, s)
    x = as_unit_values(sample)
    lx = np.log(x)
    u = x ** pair.r
    l = np.log1p(-u)
    a, b = _stats_ab(x, lx)
    c, d, f = _stats_cdf(x, u, l, pair.r)
    e = _stat_e(u, l, lx, pair.r, pair.s)
    stats = RSStatistics(a, b, c, d, e, f)
    if not all(map(math.isfinite, (a, b, c, d, e, f))):
        raise NonFiniteStatisticsError(
            f"non-finite statistics at (r, s)=({pair.r}, {pair.s}): {stats}")
    return stats


def _rs_closed_form(st: RSStatistics, r: float, s: float) -> Tuple[float, float]:
    _check_denominator(st.a, (st.b + 1.0) * st.c, "mean log X")
    num = -r - st.e - st.c + st.d - r * s * st.f - (st.b + 1.0) * st.c / st.a
    den = st.d - st.b * st.c / st.a
    _check_denominator(den, num, "rs denominator")
    beta = num / den
    alpha = ((beta - 1.0) * st.b - 1.0) / st.a
    return alpha, beta


def fit_rs(sample, rs) -> FitResult:
    """Closed-form fit at a fixed (r, s) of the transform family."""
    pair = rs if isinstance(rs, RSPair) else RSPair(*rs)
    x = as_unit_values(sample)
    if x.size < 2:
        raise DegenerateSampleError("closed-form fit needs at least two observations")
    st = rs_statistics(x, pair.r, pair.s)
    alpha, beta = _rs_closed_form(st, pair.r, pair.s)
    return _finish(x, alpha, beta, "rs", selected_rs=(pair.r, pair.s))


# ---------------------------------------------------------------------------
# Profile selection over an (r, s) grid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """Ascending positive grids for r and s."""

    r_values: Tuple[float, ...]
    s_values: Tuple[float, ...]

    def __post_init__(self):
        for name, vals in (("r_values", self.r_values), ("s_values", self.s_values)):
            vals = tuple(float(v) for v in vals)
            if len(vals) == 0:
                raise ValueError(f"{name} must be nonempty")
            if any(not math.isfinite(v) or v <= 0.0 for v in vals):
                raise ValueError(f"{name} entries must be finite and > 0")
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise ValueError(f"{name} must be strictly ascending")
            object.__setattr__(self, name, vals)


def default_grid() -> Grid:
    """The 0.1, 0.2, ..., 2.5 grid on both axes."""
    vals = tuple(float(k) / 10.0 for k in range(1, 26))
    return Grid(vals, vals)


@dataclass(frozen=True)
class ProfileScan:
    """Full grid evaluation: estimates, log-likelihoods and skipped points."""

    r_values: Tuple[float, ...]
    s_values: Tuple[float, ...]
    alpha: np.ndarray      # (R, S)
    beta: np.ndarray       # (R, S)
    loglik: np.ndarray     # (R, S), -inf where invalid
    valid: np.ndarray      # (R, S) bool
    skipped: Tuple[Tuple[float, float], ...]


def profile_scan(sample, grid: Optional[Grid] = None) -> ProfileScan:
    """Evaluate the closed form at every grid point.

    Points whose denominators degenerate, whose statistics overflow, or whose
    estimates leave the positive quadrant are marked invalid and recorded.
    """
    if grid is None:
        grid = default_grid()
    x = as_unit_values(sample)
    if x.size < 2:
        raise DegenerateSampleError("closed-form fit needs at least two observations")
    n = x.size
    lx = np.log(x)
    l1x = np.log1p(-x)
    slx = float(lx.sum())
    sl1x = float(l1x.sum())
    a_stat, b_stat = _stats_ab(x, lx)

    nr, ns = len(grid.r_values), len(grid.s_values)
    alpha = np.full((nr, ns), np.nan)
    beta = np.full((nr, ns), np.nan)
    valid = np.zeros((nr, ns), dtype=bool)

    for i, r in enumerate(grid.r_values):
        u = x ** r
        l = np.log1p(-u)
        c, d, f = _stats_cdf(x, u, l, r)
        if not all(map(math.isfinite, (c, d, f))):
            continue
        for j, s in enumerate(grid.s_values):
            e = _stat_e(u, l, lx, r, s)
            if not math.isfinite(e):
                continue
            st = RSStatistics(a_stat, b_stat, c, d, e, f)
            try:
                al, be = _rs_closed_form(st, r, s)
            except DegenerateSampleError:
                continue
            if not (math.isfinite(al) and math.isfinite(be)) or al <= 0.0 or be <= 0.0:
                continue
            alpha[i, j] = al
            beta[i, j] = be
            valid[i, j] = True

    loglik = np.full((nr, ns), -np.inf)
    if valid.any():
        av = alpha[valid]
        bv = beta[valid]
        loglik[valid] = (av - 1.0) * slx + (bv - 1.0) * sl1x - n * _log_beta_array(av, bv)

    skipped = tuple(
        (grid.r_values[i], grid.s_values[j])
        for i in range(nr) for j in range(ns) if not valid[i, j]
    )
    return ProfileScan(grid.r_values, grid.s_values, alpha, beta, loglik, valid, skipped)


def _select_max(scan: ProfileScan) -> Tuple[int, int]:
    """Argmax of the scan log-likelihood, ties broken by smallest r then s."""
    best = float(np.max(scan.loglik))
    if not math.isfinite(best):
        raise EstimationError("profile selection failed: every grid point degenerate")
    cand = scan.loglik >= best - PROFILE_TIE_TOL
    flat = int(np.flatnonzero(cand.ravel(order="C"))[0])
    return flat // len(scan.s_values), flat % len(scan.s_values)


def fit_profile(sample, grid: Optional[Grid] = None) -> FitResult:
    """Profile-likelihood selection of (r, s) over a grid.

    Fits the closed form at every grid point, drops invalid points and keeps
    the pair maximising the beta log-likelihood; the winning pair is recorded
    in the result.  Raises EstimationError when every point degenerates.
    """
    if grid is None:
        grid = default_grid()
    scan = profile_scan(sample, grid)
    i, j = _select_max(scan)
    res = fit_rs(sample, (scan.r_values[i], scan.s_values[j]))
    return FitResult(res.params, res.loglik, res.aic, res.bic, "proposed",
                     selected_rs=res.selected_rs)
