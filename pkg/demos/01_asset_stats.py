"""Per-asset return statistics from a small synthetic price panel.

Walks the first stage of the workflow: daily closes -> simple returns
-> annualized mean return, daily and annual volatility, covariance and
correlation. All numbers are reproducible from the seed.
"""

from datetime import date, timedelta

import numpy as np

from sectorfolio import (
    PricePanel,
    asset_stats,
    correlation_matrix,
    covariance_matrix,
    daily_returns,
)

TICKERS = ["NORTH", "SOUTH", "EAST", "WEST"]
N_DAYS = 250  # one trading year
SEED = 7


def weekday_dates(start, count):
    days, d = [], start
    while len(days) < count:
        if d.weekday() < 5:
            days.append(d)
        d += timedelta(days=1)
    return days


def synthetic_panel():
    # correlated geometric random walks with distinct drifts and vols
    rng = np.random.default_rng(SEED)
    drifts = np.array([0.0008, 0.0002, -0.0003, 0.0012])
    vols = np.array([0.012, 0.018, 0.025, 0.020])
    common = rng.normal(0.0, 1.0, N_DAYS)
    own = rng.normal(0.0, 1.0, (4, N_DAYS))
    shocks = 0.4 * common + np.sqrt(1 - 0.4**2) * own
    steps = drifts[:, None] + vols[:, None] * shocks
    closes = 100.0 * np.cumprod(1.0 + steps, axis=1)
    return PricePanel(TICKERS, weekday_dates(date(2021, 1, 4), N_DAYS), closes)


def main():
    panel = synthetic_panel()
    print(f"panel: {panel.n_assets} assets x {panel.n_dates} trading days\n")

    # one ticker end to end
    series = panel.series("NORTH")
    rets = daily_returns(series)
    print(f"NORTH first closes: {series.closes[:4].round(2)}")
    print(f"NORTH first returns: {rets.returns[:3].round(5)}\n")

    print(f"{'ticker':8} {'annual ret':>10} {'daily vol':>10} {'annual vol':>10}")
    for s in asset_stats(panel):
        print(
            f"{s.ticker:8} {s.annual_return:>9.2%} "
            f"{s.daily_volatility:>10.4f} {s.annual_volatility:>9.2%}"
        )

    cov = covariance_matrix(panel)
    corr = correlation_matrix(cov)
    print("\ndaily covariance (x 1e4):")
    print((cov.entries * 1e4).round(3))
    print("\ncorrelation:")
    print(corr.round(3))


if __name__ == "__main__":
    main()
