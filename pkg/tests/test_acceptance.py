"""Acceptance suite: one test per exit criterion, each at its stated tolerance.

Every test finishes by printing a single pass line (visible with `pytest -s`
or in the captured output of a failing run).  The Monte Carlo fixtures are
module-scoped so the nine-scenario benchmark is generated once.
"""

import time

import numpy as np
import pytest

from closedfit.asymptotics import (
    builtin_transform_pair,
    delta_method,
    population_fixed_point,
)
from closedfit.errors import EstimationError
from closedfit.estimators import fit_chen_xiao, fit_ml, fit_profile, fit_rs, fit_tamae, rs_statistics
from closedfit.model import BetaParams, beta_sample, replication_stream
from closedfit.montecarlo import Scenario, profile_frequencies, run_scenario
from closedfit.weighted import builtin_generator, fit_weighted, weighted_statistics

from conftest import random_unit_samples

ACCEPT_SEED = 42
SHAPES = (0.5, 1.0, 2.0)
SCENARIOS = [(a, b) for a in SHAPES for b in SHAPES]


def _report(criterion, detail):
    print(f"ACCEPTANCE {criterion}: PASS — {detail}")


@pytest.fixture(scope="module")
def benchmark_rows():
    """R=1000 benchmark of all four estimators, nine scenarios, n in {10, 100}."""
    rows = {}
    for a, b in SCENARIOS:
        for n in (10, 100):
            sc = Scenario(a, b, n, replications=1000, seed=ACCEPT_SEED)
            rows[(a, b, n)] = {r.estimator: r for r in run_scenario(sc)}
    return rows


def test_criterion_1_application_reproduction(roraima):
    start = time.perf_counter()
    ml = fit_ml(roraima)
    cx = fit_chen_xiao(roraima)
    tm = fit_tamae(roraima)
    pr = fit_profile(roraima)
    elapsed = time.perf_counter() - start

    expected = {
        "ml": (ml, 1.29, 14.7, -42.5),
        "chen-xiao": (cx, 1.21, 13.9, -42.4),
        "tamae": (tm, 1.19, 13.8, -42.4),
        "proposed": (pr, 1.27, 14.7, -42.5),
    }
    for label, (res, alpha, beta, aic) in expected.items():
        assert res.params.alpha == pytest.approx(alpha, abs=0.01), label
        assert res.params.beta == pytest.approx(beta, abs=0.1), label
        assert res.aic == pytest.approx(aic, abs=0.1), label
    assert pr.selected_rs == (1.0, 1.2)
    assert elapsed < 1.0
    _report(1, f"four-estimator table reproduced, selected (r,s)=(1,1.2), {elapsed:.2f}s")


def test_criterion_2_monte_carlo_reproduction():
    start = time.perf_counter()
    sc = Scenario(1.0, 1.0, 100, replications=1000, seed=ACCEPT_SEED)
    rows = {r.estimator: r for r in run_scenario(sc)}
    elapsed = time.perf_counter() - start

    ml = rows["ml"].metrics
    pr = rows["proposed"].metrics
    assert ml.mare_alpha == pytest.approx(0.1125, abs=0.012)
    assert ml.rmse_alpha == pytest.approx(0.1438, abs=0.012)
    assert abs(pr.mare_alpha - ml.mare_alpha) <= 0.005
    assert abs(pr.rmse_alpha - ml.rmse_alpha) <= 0.005
    assert elapsed < 120.0
    _report(2, f"ML MARE={ml.mare_alpha:.4f}, RMSE={ml.rmse_alpha:.4f}, "
               f"|proposed-ML| MARE={abs(pr.mare_alpha - ml.mare_alpha):.4f}, {elapsed:.0f}s")


def test_criterion_3_profile_frequencies():
    sc = Scenario(1.0, 1.0, 100, replications=1000, seed=ACCEPT_SEED)
    table = profile_frequencies(sc)
    assert table.modal_point == (1.0, 1.0)
    assert table.modal_share == pytest.approx(0.821, abs=0.05)

    sc2 = Scenario(0.5, 2.0, 100, replications=1000, seed=ACCEPT_SEED)
    table2 = profile_frequencies(sc2)
    assert table2.modal_point == (0.9, 0.9)
    _report(3, f"(1,1): modal (1,1) share {table.modal_share:.3f}; "
               f"(0.5,2): modal {table2.modal_point}")


def test_criterion_4_exact_reduction():
    checked = 0
    worst = 0.0
    for x in random_unit_samples(101, 500):
        try:
            rs = fit_rs(x, (1.0, 1.0))
            cx = fit_chen_xiao(x)
        except EstimationError:
            continue
        rel_a = abs(rs.params.alpha - cx.params.alpha) / abs(cx.params.alpha)
        rel_b = abs(rs.params.beta - cx.params.beta) / abs(cx.params.beta)
        worst = max(worst, rel_a, rel_b)
        assert rel_a <= 1e-12 and rel_b <= 1e-12
        checked += 1
    assert checked >= 450
    _report(4, f"rs(1,1) == chen-xiao on {checked} samples, worst rel dev {worst:.2e}")


def _system_residual(mat, rhs, sol):
    res = mat @ sol - rhs
    scale = np.maximum(1.0, np.abs(mat) @ np.abs(sol) + np.abs(rhs))
    return float(np.max(np.abs(res) / scale))


def test_criterion_5_score_residual_oracles():
    rng = np.random.default_rng(505)
    worst = 0.0
    counts = {"chen-xiao": 0, "tamae": 0, "rs": 0}
    for x in random_unit_samples(505, 500):
        lx, l1x = np.log(x), np.log1p(-x)
        lg = lx - l1x
        # identity / one-minus system
        try:
            cx = fit_chen_xiao(x)
        except EstimationError:
            cx = None
        if cx is not None:
            mat = np.array([[lx.mean(), -(x / (1 - x) * lx).mean()],
                            [-((1 - x) / x * l1x).mean(), l1x.mean()]])
            rhs = np.array([-1.0 - (x / (1 - x) * lx).mean(),
                            -1.0 - ((1 - x) / x * l1x).mean()])
            r = _system_residual(mat, rhs, np.array([cx.params.alpha, cx.params.beta]))
            worst = max(worst, r)
            assert r <= 1e-10
            counts["chen-xiao"] += 1
        # odds / log-fraction system
        try:
            tm = fit_tamae(x)
        except EstimationError:
            tm = None
        if tm is not None:
            mat = np.array([[((1 - x) * lg).mean(), -(x * lg).mean()],
                            [(1 - x).mean(), -x.mean()]])
            rhs = np.array([-1.0, 0.0])
            r = _system_residual(mat, rhs, np.array([tm.params.alpha, tm.params.beta]))
            worst = max(worst, r)
            assert r <= 1e-10
            counts["tamae"] += 1
        # transform-family system at a random grid point
        rr = float(rng.uniform(0.3, 2.5))
        ss = float(rng.uniform(0.3, 2.5))
        try:
            rs = fit_rs(x, (rr, ss))
        except EstimationError:
            rs = None
        if rs is not None:
            st = rs_statistics(x, rr, ss)
            mat = np.array([[st.a, -st.b], [-st.c, st.d]])
            rhs = np.array([-1.0 - st.b, -rr - st.e - st.c + st.d - rr * ss * st.f])
            r = _system_residual(mat, rhs, np.array([rs.params.alpha, rs.params.beta]))
            worst = max(worst, r)
            assert r <= 1e-10
            counts["rs"] += 1
    assert all(v >= 400 for v in counts.values()), counts

    # weighted-family systems on 500 positive samples
    wrng = np.random.default_rng(506)
    from closedfit.weighted import weighted_equation_residuals

    wcount = 0
    for _ in range(500):
        gen = builtin_generator(("gamma", "nakagami")[wrng.integers(2)])
        kron = bool(wrng.integers(2))
        xw = wrng.gamma(2.5, 1.2, size=int(wrng.integers(10, 60)))
        try:
            res = fit_weighted(xw, gen, kron)
        except EstimationError:
            continue
        st = weighted_statistics(xw, gen, kron)
        r1, r2 = weighted_equation_residuals(st, res.params)
        s1 = max(1.0, abs(res.params.mu * st.a))
        s2 = max(1.0, abs(res.params.mu * st.b) + abs(res.params.mu * res.params.sigma * st.c))
        r = max(abs(r1) / s1, abs(r2) / s2)
        worst = max(worst, r)
        assert r <= 1e-10
        wcount += 1
    assert wcount >= 400
    _report(5, f"residuals <= 1e-10 on {counts} beta systems and {wcount} weighted systems, "
               f"worst {worst:.2e}")


def test_criterion_6_empirical_clt():
    pair = builtin_transform_pair("chen-xiao")
    truth = BetaParams(2.0, 2.0)

    covered = 0
    total = 0
    for i in range(1000):
        x = beta_sample(truth, 500, replication_stream(ACCEPT_SEED + 1, i))
        try:
            res = delta_method(x, pair, level=0.95)
        except EstimationError:
            continue
        total += 1
        lo, hi = res.wald_intervals[0]
        if lo <= truth.alpha <= hi:
            covered += 1
    rate = covered / total
    assert total >= 990
    assert 0.92 <= rate <= 0.97

    ratios = []
    for i in range(200):
        x100 = beta_sample(truth, 100, replication_stream(ACCEPT_SEED + 2, i))
        x400 = beta_sample(truth, 400, replication_stream(ACCEPT_SEED + 3, i))
        try:
            s100 = delta_method(x100, pair).std_errors[0]
            s400 = delta_method(x400, pair).std_errors[0]
        except EstimationError:
            continue
        ratios.append(s400 / s100)
    ratio = float(np.median(ratios))
    assert 0.45 <= ratio <= 0.55  # 1/sqrt(4) within 10%
    _report(6, f"95% Wald coverage {rate:.3f} over {total} replications; "
               f"median SE ratio n400/n100 = {ratio:.3f}")


def test_criterion_7_fixed_point_by_quadrature():
    worst = 0.0
    for name in ("chen-xiao", "tamae"):
        pair = builtin_transform_pair(name)
        for a, b in SCENARIOS:
            astar, bstar = population_fixed_point(BetaParams(a, b), pair)
            worst = max(worst, abs(astar - a), abs(bstar - b))
            assert astar == pytest.approx(a, abs=1e-6), (name, a, b)
            assert bstar == pytest.approx(b, abs=1e-6), (name, a, b)
    _report(7, f"population maps fixed at truth for 9 scenarios x 2 pairs, "
               f"worst dev {worst:.2e}")


def test_criterion_8_weighted_special_cases():
    # gamma: X ~ Gamma(shape=mu, rate=mu*sigma) with mu=3, sigma=0.5
    rng = replication_stream(ACCEPT_SEED + 4, 0)
    xg = rng.gamma(shape=3.0, scale=1.0 / 1.5, size=10 ** 6)
    res_g = fit_weighted(xg, builtin_generator("gamma"), kronecker=False)
    assert res_g.params.mu == pytest.approx(3.0, rel=0.02)
    assert res_g.params.sigma == pytest.approx(0.5, rel=0.02)

    # Nakagami(m=2, Omega=1): X = sqrt(Gamma(shape=m, scale=Omega/m))
    rng = replication_stream(ACCEPT_SEED + 5, 0)
    xn = np.sqrt(rng.gamma(shape=2.0, scale=0.5, size=10 ** 6))
    res_n = fit_weighted(xn, builtin_generator("nakagami"), kronecker=False)
    assert res_n.params.mu == pytest.approx(2.0, rel=0.02)
    assert res_n.params.sigma == pytest.approx(1.0, rel=0.02)

    for res, x, gen in ((res_g, xg, "gamma"), (res_n, xn, "nakagami")):
        st = weighted_statistics(x, builtin_generator(gen), kronecker=False)
        assert abs(res.params.sigma * st.a - 1.0) <= 1e-14
    _report(8, f"gamma fit ({res_g.params.mu:.3f}, {res_g.params.sigma:.4f}), "
               f"nakagami fit ({res_n.params.mu:.3f}, {res_n.params.sigma:.4f}), "
               f"sigma * mean S(X) = 1 to 1e-14")


def test_criterion_9_consistency_sweep(benchmark_rows):
    summary = {}
    for est in ("ml", "chen-xiao", "tamae", "proposed"):
        improved = 0
        for a, b in SCENARIOS:
            small = benchmark_rows[(a, b, 10)][est].metrics.mare_alpha
            large = benchmark_rows[(a, b, 100)][est].metrics.mare_alpha
            if large < small:
                improved += 1
        summary[est] = improved
        assert improved >= 8, (est, improved)
    _report(9, f"MARE(n=100) < MARE(n=10) in {summary} of 9 scenarios")


def test_benchmark_proposed_tracks_ml(benchmark_rows):
    # supporting check at n=100 for every scenario (paper-style proximity)
    for a, b in SCENARIOS:
        ml = benchmark_rows[(a, b, 100)]["ml"].metrics
        pr = benchmark_rows[(a, b, 100)]["proposed"].metrics
        assert abs(pr.rmse_alpha - ml.rmse_alpha) <= 0.01, (a, b)
        assert abs(pr.rmse_beta - ml.rmse_beta) <= 0.01, (a, b)
