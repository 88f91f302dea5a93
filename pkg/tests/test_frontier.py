"""Monte Carlo frontier sampling, selection, and export."""

import io
import math

import numpy as np
import pytest

from sectorfolio import (
    AlignmentError,
    CovarianceMatrix,
    DataFormatError,
    DegenerateSampleError,
    EmptyCloudError,
    FrontierCloud,
    FrontierSample,
    RiskFreeAssumption,
    WeightVector,
    export_frontier,
    min_risk_portfolio,
    optimum_risk_portfolio,
    read_frontier_csv,
    sample_frontier,
)

TICKERS3 = ["AAA", "BBB", "CCC"]
MU3 = {"AAA": 0.08, "BBB": 0.15, "CCC": 0.30}
SIGMA3 = np.array([0.010, 0.018, 0.032])
CORR3 = np.array([[1.0, 0.25, 0.10], [0.25, 1.0, 0.35], [0.10, 0.35, 1.0]])
COV3 = CovarianceMatrix(TICKERS3, np.outer(SIGMA3, SIGMA3) * CORR3)


def manual_sample(weights, tickers=TICKERS3, cov=COV3, mu=MU3, rf=0.01):
    wv = WeightVector(list(tickers), np.array(weights, float))
    ret = sum(w * mu[t] for w, t in zip(weights, tickers))
    var = float(wv.weights @ cov.entries @ wv.weights)
    risk = math.sqrt(var * 250)
    sharpe = (ret - rf) / risk if risk > 0 else math.nan
    return FrontierSample(wv, ret, risk, sharpe)


def test_single_asset_cloud_is_degenerate_point():
    cov = CovarianceMatrix(["AAA"], np.array([[0.0004]]))
    cloud = sample_frontier({"AAA": 0.12}, cov, n_samples=5, seed=1)
    assert cloud.sample_count == 5
    for s in cloud.samples:
        assert s.weights.weights.tolist() == [1.0]
        assert s.annual_return == 0.12
        assert s.annual_risk == pytest.approx(0.02 * math.sqrt(250), rel=1e-12)


def test_samples_live_on_the_simplex():
    for sampler in ("uniform", "dirichlet"):
        cloud = sample_frontier(MU3, COV3, n_samples=2_000, seed=7, sampler=sampler)
        weights = np.array([s.weights.weights for s in cloud.samples])
        assert np.all(weights >= 0.0)
        assert np.allclose(weights.sum(axis=1), 1.0, atol=1e-9)


def test_sample_stats_match_portfolio_arithmetic():
    cloud = sample_frontier(MU3, COV3, n_samples=50, seed=3)
    for s in cloud.samples:
        expect = manual_sample(s.weights.weights)
        assert s.annual_return == pytest.approx(expect.annual_return, rel=1e-12)
        assert s.annual_risk == pytest.approx(expect.annual_risk, rel=1e-12)
        assert s.sharpe == pytest.approx(expect.sharpe, rel=1e-12)


def test_same_seed_reproduces_cloud_bitwise():
    a = sample_frontier(MU3, COV3, n_samples=500, seed=11)
    b = sample_frontier(MU3, COV3, n_samples=500, seed=11)
    assert np.array_equal(a.risks(), b.risks())
    for sa, sb in zip(a.samples, b.samples):
        assert np.array_equal(sa.weights.weights, sb.weights.weights)


def test_different_seeds_differ():
    a = sample_frontier(MU3, COV3, n_samples=100, seed=1)
    b = sample_frontier(MU3, COV3, n_samples=100, seed=2)
    assert not np.array_equal(a.risks(), b.risks())


def test_worker_count_does_not_change_the_cloud():
    serial = sample_frontier(MU3, COV3, n_samples=331, seed=5)
    threaded = sample_frontier(MU3, COV3, n_samples=331, seed=5, workers=3)
    assert np.array_equal(serial.risks(), threaded.risks())
    assert np.array_equal(serial.sharpes(), threaded.sharpes())
    for sa, sb in zip(serial.samples, threaded.samples):
        assert sa.weights.weights.tobytes() == sb.weights.weights.tobytes()


def test_dirichlet_sampler_is_deterministic_too():
    a = sample_frontier(MU3, COV3, n_samples=200, seed=9, sampler="dirichlet")
    b = sample_frontier(MU3, COV3, n_samples=200, seed=9, sampler="dirichlet", workers=4)
    assert np.array_equal(a.risks(), b.risks())


def test_sampler_distributions_differ():
    a = sample_frontier(MU3, COV3, n_samples=100, seed=9)
    b = sample_frontier(MU3, COV3, n_samples=100, seed=9, sampler="dirichlet")
    assert not np.array_equal(a.risks(), b.risks())


def test_sample_frontier_argument_validation():
    with pytest.raises(EmptyCloudError):
        sample_frontier(MU3, COV3, n_samples=0)
    with pytest.raises(ValueError, match="sampler"):
        sample_frontier(MU3, COV3, n_samples=10, sampler="sobol")
    with pytest.raises(ValueError, match="workers"):
        sample_frontier(MU3, COV3, n_samples=10, workers=0)
    with pytest.raises(AlignmentError):
        sample_frontier({"AAA": 0.1}, COV3, n_samples=10)


def test_selection_tie_breaks_on_first_index():
    rf = RiskFreeAssumption()
    s1 = manual_sample([0.2, 0.3, 0.5])
    s2 = manual_sample([0.5, 0.3, 0.2])
    dup1 = manual_sample([0.2, 0.3, 0.5])
    cloud = FrontierCloud([s1, s2, dup1], TICKERS3, seed=0, rf=rf)
    assert min_risk_portfolio(cloud) is (s1 if s1.annual_risk <= s2.annual_risk else s2)
    # ties return the earliest sample
    tie_cloud = FrontierCloud([s1, dup1], TICKERS3, seed=0, rf=rf)
    assert min_risk_portfolio(tie_cloud) is s1
    assert optimum_risk_portfolio(tie_cloud) is s1


def test_selection_on_empty_cloud():
    empty = FrontierCloud([], TICKERS3, seed=0, rf=RiskFreeAssumption())
    with pytest.raises(EmptyCloudError):
        min_risk_portfolio(empty)
    with pytest.raises(EmptyCloudError):
        optimum_risk_portfolio(empty)
    with pytest.raises(EmptyCloudError):
        export_frontier(empty, io.StringIO())


def test_zero_risk_sample_blocks_sharpe_selection():
    flat_cov = CovarianceMatrix(["AAA"], np.array([[0.0]]))
    cloud = sample_frontier({"AAA": 0.1}, flat_cov, n_samples=3, seed=1)
    assert all(math.isnan(s.sharpe) for s in cloud.samples)
    assert min_risk_portfolio(cloud).annual_risk == 0.0
    with pytest.raises(DegenerateSampleError):
        optimum_risk_portfolio(cloud)


def test_export_flags_and_roundtrip(tmp_path):
    cloud = sample_frontier(MU3, COV3, n_samples=400, seed=13)
    path = tmp_path / "frontier.csv"
    export_frontier(cloud, path)
    tickers, rows = read_frontier_csv(path)
    assert tickers == TICKERS3
    assert len(rows) == 400

    mrp = min_risk_portfolio(cloud)
    orp = optimum_risk_portfolio(cloud)
    flagged = {flag: (risk, ret) for risk, ret, _, _, flag in rows if flag}
    assert set(flagged) <= {"mrp", "orp", "mrp+orp"}
    mrp_rows = [r for r in rows if "mrp" in r[4]]
    orp_rows = [r for r in rows if "orp" in r[4]]
    assert len(mrp_rows) == 1 and len(orp_rows) == 1
    assert mrp_rows[0][0] == pytest.approx(mrp.annual_risk, rel=1e-11)
    assert orp_rows[0][2] == pytest.approx(orp.sharpe, rel=1e-11)

    # reloaded weights rebuild each row's stats
    for risk, ret, sharpe, weights, _ in rows[:25]:
        rebuilt = manual_sample(weights / weights.sum())
        assert risk == pytest.approx(rebuilt.annual_risk, rel=1e-9)
        assert ret == pytest.approx(rebuilt.annual_return, rel=1e-9, abs=1e-12)
        assert sharpe == pytest.approx(rebuilt.sharpe, rel=1e-9)


def test_export_merges_flags_when_one_row_wins_both():
    rf = RiskFreeAssumption()
    dominant = FrontierSample(
        WeightVector(TICKERS3, np.array([0.9, 0.05, 0.05])), 0.20, 0.10, 1.9
    )
    dominated = FrontierSample(
        WeightVector(TICKERS3, np.array([0.0, 0.0, 1.0])), 0.10, 0.50, 0.18
    )
    buf = io.StringIO()
    export_frontier(FrontierCloud([dominant, dominated], TICKERS3, seed=0, rf=rf), buf)
    buf.seek(0)
    _, rows = read_frontier_csv(buf)
    assert rows[0][4] == "mrp+orp"
    assert rows[1][4] == ""


def test_read_frontier_rejects_malformed_input(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("annual_risk,annual_return\n1,2\n", encoding="utf-8")
    with pytest.raises(DataFormatError):
        read_frontier_csv(path)
    path.write_text(
        "annual_risk,annual_return,sharpe,w_A,flag\n0.1,0.2\n", encoding="utf-8"
    )
    with pytest.raises(DataFormatError, match="line 2"):
        read_frontier_csv(path)
