import math

import numpy as np
import pytest

from closedfit.errors import (
    DegenerateSampleError,
    EstimationError,
    NonConvergenceError,
)
from closedfit.estimators import (
    Grid,
    ProfileScan,
    _select_max,
    default_grid,
    fit_chen_xiao,
    fit_ml,
    fit_profile,
    fit_rs,
    fit_tamae,
    profile_scan,
    rs_statistics,
)
from closedfit.model import BetaParams, beta_sample, replication_stream, unit_sample

from conftest import random_unit_samples


# ---------------------------------------------------------------------------
# maximum likelihood
# ---------------------------------------------------------------------------

def test_ml_roraima(roraima):
    res = fit_ml(roraima)
    assert res.params.alpha == pytest.approx(1.29, abs=0.01)
    assert res.params.beta == pytest.approx(14.7, abs=0.1)
    assert res.aic == pytest.approx(-42.5, abs=0.1)


def test_ml_large_sample_consistency():
    x = beta_sample(BetaParams(2, 2), 10 ** 6, replication_stream(42, 0))
    res = fit_ml(x)
    assert res.params.alpha == pytest.approx(2.0, abs=0.02)
    assert res.params.beta == pytest.approx(2.0, abs=0.02)


def test_ml_score_residuals():
    from closedfit.estimators import ml_score

    for x in random_unit_samples(11, 25):
        res = fit_ml(x)
        r1, r2 = ml_score(res.params.alpha, res.params.beta,
                          float(np.log(x).mean()), float(np.log1p(-x).mean()))
        assert max(abs(r1), abs(r2)) <= 1e-10


def test_ml_degenerate_and_cap():
    with pytest.raises(DegenerateSampleError):
        fit_ml([0.4, 0.4, 0.4])
    with pytest.raises(NonConvergenceError) as err:
        fit_ml([0.1, 0.2, 0.7, 0.9], max_iter=1)
    assert err.value.last_iterate is not None


# ---------------------------------------------------------------------------
# fixed closed forms: linear-system and residual oracles
# ---------------------------------------------------------------------------

def _chen_xiao_system(x):
    lx, l1x = np.log(x), np.log1p(-x)
    a = lx.mean()
    b = (x / (1 - x) * lx).mean()
    c = ((1 - x) / x * l1x).mean()
    d = l1x.mean()
    mat = np.array([[a, -b], [-c, d]])
    rhs = np.array([-1.0 - b, -1.0 - c])
    return mat, rhs


def _tamae_system(x):
    lg = np.log(x) - np.log1p(-x)
    mat = np.array([
        [((1 - x) * lg).mean(), -(x * lg).mean()],
        [(1 - x).mean(), -x.mean()],
    ])
    rhs = np.array([-1.0, 0.0])
    return mat, rhs


def _rs_system(x, r, s):
    st = rs_statistics(x, r, s)
    mat = np.array([[st.a, -st.b], [-st.c, st.d]])
    rhs = np.array([-1.0 - st.b, -r - st.e - st.c + st.d - r * s * st.f])
    return mat, rhs


def test_chen_xiao_roraima(roraima):
    res = fit_chen_xiao(roraima)
    assert res.params.alpha == pytest.approx(1.21, abs=0.01)
    assert res.params.beta == pytest.approx(13.9, abs=0.1)
    assert res.aic == pytest.approx(-42.4, abs=0.1)


def test_chen_xiao_small_sample_linear_solve():
    x = np.array([0.2, 0.5, 0.7])
    res = fit_chen_xiao(x)
    mat, rhs = _chen_xiao_system(x)
    ref = np.linalg.solve(mat, rhs)
    assert res.params.alpha == pytest.approx(ref[0], rel=1e-12)
    assert res.params.beta == pytest.approx(ref[1], rel=1e-12)


def test_tamae_roraima(roraima):
    res = fit_tamae(roraima)
    assert res.params.alpha == pytest.approx(1.19, abs=0.01)
    assert res.params.beta == pytest.approx(13.8, abs=0.1)
    assert res.aic == pytest.approx(-42.4, abs=0.1)


def test_tamae_symmetric_sample():
    # sample mean exactly 1/2, so both numerators coincide
    res = fit_tamae([0.3, 0.5, 0.7])
    assert res.params.alpha == res.params.beta


def test_tamae_small_sample_linear_solve():
    x = np.array([0.2, 0.5, 0.7])
    res = fit_tamae(x)
    ref = np.linalg.solve(*_tamae_system(x))
    assert res.params.alpha == pytest.approx(ref[0], rel=1e-12)
    assert res.params.beta == pytest.approx(ref[1], rel=1e-12)


def test_closed_forms_match_linear_solves_on_random_samples():
    rng = np.random.default_rng(5)
    count = 0
    for x in random_unit_samples(5, 200):
        r = float(rng.uniform(0.3, 2.5))
        s = float(rng.uniform(0.3, 2.5))
        for fit, system in [
            (fit_chen_xiao, _chen_xiao_system),
            (fit_tamae, _tamae_system),
            (lambda v: fit_rs(v, (r, s)), lambda v: _rs_system(v, r, s)),
        ]:
            try:
                res = fit(x)
            except EstimationError:
                continue
            ref = np.linalg.solve(*system(x))
            assert res.params.alpha == pytest.approx(ref[0], rel=1e-10)
            assert res.params.beta == pytest.approx(ref[1], rel=1e-10)
            count += 1
    assert count > 300  # the vast majority of systems are solvable


def _relative_residual(mat, rhs, sol):
    res = mat @ sol - rhs
    scale = np.maximum(1.0, np.abs(mat) @ np.abs(sol) + np.abs(rhs))
    return np.max(np.abs(res) / scale)


def test_equation_residuals_on_random_samples():
    rng = np.random.default_rng(17)
    for x in random_unit_samples(17, 60):
        r = float(rng.uniform(0.3, 2.5))
        s = float(rng.uniform(0.3, 2.5))
        for fit, system in [
            (fit_chen_xiao, _chen_xiao_system),
            (fit_tamae, _tamae_system),
            (lambda v: fit_rs(v, (r, s)), lambda v: _rs_system(v, r, s)),
        ]:
            try:
                res = fit(x)
            except EstimationError:
                continue
            sol = np.array([res.params.alpha, res.params.beta])
            assert _relative_residual(*system(x), sol) <= 1e-10


# ---------------------------------------------------------------------------
# (r, s) statistics and family
# ---------------------------------------------------------------------------

def _rs_statistics_direct(values, r, s):
    """Literal term-by-term reference implementation (math module only)."""
    n = len(values)
    acc = [0.0] * 6
    for x in values:
        u = x ** r
        l = math.log(1.0 - u)
        acc[0] += math.log(x)
        acc[1] += x / (1.0 - x) * math.log(x)
        acc[2] += (1.0 - u) / u * l
        acc[3] += (1.0 - u) / ((1.0 - x) * x ** (r - 1.0)) * l
        acc[4] += (r - (1.0 - u) - r * s * u) * (1.0 - u) ** s / x ** (2.0 * s - r) * l
        acc[5] += l
    return [v / n for v in acc]


def test_rs_statistics_at_unit_pair():
    for x in random_unit_samples(3, 20):
        st = rs_statistics(x, 1.0, 1.0)
        assert abs(st.e) <= 1e-14 * max(1.0, abs(st.c))
        assert st.d == st.f


def test_rs_statistics_single_point():
    st = rs_statistics([0.5], 1.0, 1.0)
    assert st.a == pytest.approx(math.log(0.5), abs=1e-12)
    assert st.c == pytest.approx(math.log(0.5), abs=1e-12)


def test_rs_statistics_direct_summation():
    x = [0.2, 0.5, 0.7]
    st = rs_statistics(x, 2.0, 0.5)
    ref = _rs_statistics_direct(x, 2.0, 0.5)
    for got, want in zip((st.a, st.b, st.c, st.d, st.e, st.f), ref):
        assert got == pytest.approx(want, rel=1e-14, abs=1e-15)


def test_fit_rs_reduces_to_chen_xiao():
    for x in random_unit_samples(23, 60):
        try:
            res_rs = fit_rs(x, (1.0, 1.0))
            res_cx = fit_chen_xiao(x)
        except EstimationError:
            continue
        assert res_rs.params.alpha == pytest.approx(res_cx.params.alpha, rel=1e-12)
        assert res_rs.params.beta == pytest.approx(res_cx.params.beta, rel=1e-12)


def test_fit_rs_roraima_selected_pair(roraima):
    res = fit_rs(roraima, (1.0, 1.2))
    assert res.params.alpha == pytest.approx(1.27, abs=0.01)
    assert res.params.beta == pytest.approx(14.7, abs=0.1)


def test_fit_rs_small_sample_linear_solve():
    x = np.array([0.2, 0.5, 0.7])
    res = fit_rs(x, (2.0, 0.5))
    ref = np.linalg.solve(*_rs_system(x, 2.0, 0.5))
    assert res.params.alpha == pytest.approx(ref[0], rel=1e-10)
    assert res.params.beta == pytest.approx(ref[1], rel=1e-10)


# ---------------------------------------------------------------------------
# profile selection
# ---------------------------------------------------------------------------

def test_profile_roraima_selects_reported_pair(roraima):
    res = fit_profile(roraima)
    assert res.selected_rs == (1.0, 1.2)
    assert res.params.alpha == pytest.approx(1.27, abs=0.01)
    assert res.params.beta == pytest.approx(14.7, abs=0.1)
    assert res.aic == pytest.approx(-42.5, abs=0.1)


def test_profile_single_point_grid_is_chen_xiao(roraima):
    res = fit_profile(roraima, Grid((1.0,), (1.0,)))
    ref = fit_chen_xiao(roraima)
    assert res.params.alpha == pytest.approx(ref.params.alpha, rel=1e-12)
    assert res.params.beta == pytest.approx(ref.params.beta, rel=1e-12)


def test_profile_dominates_grid_points():
    grid = default_grid()
    rng = np.random.default_rng(31)
    for x in random_unit_samples(31, 10, n_range=(20, 60)):
        res = fit_profile(x, grid)
        for _ in range(20):
            r = grid.r_values[rng.integers(len(grid.r_values))]
            s = grid.s_values[rng.integers(len(grid.s_values))]
            try:
                other = fit_rs(x, (r, s))
            except EstimationError:
                continue
            assert res.loglik >= other.loglik - 1e-9


def test_ml_dominates_profile():
    for x in random_unit_samples(47, 15, n_range=(20, 80)):
        try:
            ml = fit_ml(x)
        except EstimationError:
            continue
        prof = fit_profile(x)
        assert ml.loglik >= prof.loglik - 1e-6


def test_profile_all_degenerate_errors():
    # on a constant sample every (r, s) system is singular
    with pytest.raises(EstimationError):
        fit_profile(unit_sample([0.5, 0.5]))


def test_profile_tie_break_prefers_smallest_pair():
    ll = np.full((2, 2), -5.0)
    ll[0, 1] = -1.0
    ll[1, 0] = -1.0 - 5e-13  # within the tie window
    scan = ProfileScan((1.0, 2.0), (0.5, 1.5), np.ones((2, 2)), np.ones((2, 2)),
                       ll, np.ones((2, 2), bool), ())
    assert _select_max(scan) == (0, 1)  # smallest r wins inside the window


def test_profile_scan_records_skipped_points(roraima):
    scan = profile_scan(roraima, default_grid())
    assert scan.valid.any()
    assert len(scan.skipped) == int((~scan.valid).sum())


def test_estimators_permutation_invariant(roraima):
    rng = np.random.default_rng(2)
    perm = rng.permutation(roraima.values)
    for fit in (fit_ml, fit_chen_xiao, fit_tamae, fit_profile):
        a = fit(roraima)
        b = fit(unit_sample(perm))
        assert b.params.alpha == pytest.approx(a.params.alpha, rel=1e-10)
        assert b.params.beta == pytest.approx(a.params.beta, rel=1e-10)


# ---------------------------------------------------------------------------
# consistency across sample sizes
# ---------------------------------------------------------------------------

@pytest.mark.slow
def test_median_relative_error_shrinks_with_n():
    shapes = [0.5, 1.0, 2.0]
    fits = {
        "ml": fit_ml,
        "chen-xiao": fit_chen_xiao,
        "tamae": fit_tamae,
        "proposed": fit_profile,
    }
    reps = 200
    for a in shapes:
        for b in shapes:
            errs = {n: {k: [] for k in fits} for n in (50, 5000)}
            for n in (50, 5000):
                for i in range(reps):
                    x = beta_sample(BetaParams(a, b), n, replication_stream(1000 + n, i))
                    for label, fit in fits.items():
                        try:
                            res = fit(x)
                        except EstimationError:
                            continue
                        errs[n][label].append(abs(res.params.alpha / a - 1.0))
            for label in fits:
                med_small = np.median(errs[50][label])
                med_large = np.median(errs[5000][label])
                assert med_large < med_small, (a, b, label, med_small, med_large)


def test_rs_statistics_overflow_flagged():
    # x^(2s-r) underflow drives the weight to overflow for extreme points
    with pytest.raises(EstimationError):
        rs_statistics([1e-200, 0.5, 0.7], 0.5, 3.0)
