"""Buy-and-hold backtests in both capital allocation modes.

A book of weights buys fractional shares at the first close and values
them at the last. Simplex mode deploys weight * capital per name;
fixed-amount-per-stock books capital / nominal per retained name, so a
name dropped by the missing-data screen leaves its ticket in cash.
"""

import io

import numpy as np

from sectorfolio import WeightVector, equal_weights, run_backtest, write_backtest_csv

CAPITAL = 100_000.0

BUY = {"ALPHA": 830.0, "BRAVO": 7524.0, "CHARLIE": 498.0, "DELTA": 2719.0}
SELL = {"ALPHA": 1249.0, "BRAVO": 8395.0, "CHARLIE": 388.0, "DELTA": 3228.0}


def show(label, report):
    print(f"{label}: deployed {report.initial_capital:,.0f} -> "
          f"{report.terminal_capital:,.2f} ({report.holding_return:+.2%})")
    for a in report.allocations:
        print(f"  {a.ticker:8} {a.shares:9.2f} sh @ {a.buy_price:8.2f} -> "
              f"{a.terminal_value:11.2f}")


def main():
    tickers = list(BUY)

    # equal weights, full capital
    ewp = run_backtest(equal_weights(tickers), BUY, SELL, CAPITAL)
    show("EWP  (simplex)", ewp)

    # a conviction-tilted book
    tilted = WeightVector(tickers, np.array([0.45, 0.10, 0.05, 0.40]))
    orp = run_backtest(tilted, BUY, SELL, CAPITAL)
    show("\ntilted (simplex)", orp)

    # fixed-amount mode with a nominal universe of five: only four names
    # survived some screen, so one ticket of 20,000 stays in cash
    fixed = run_backtest(
        equal_weights(tickers), BUY, SELL, CAPITAL,
        mode="fixed-amount-per-stock", nominal_universe_size=5,
    )
    show("\nEWP  (fixed-amount-per-stock, nominal 5)", fixed)

    buf = io.StringIO()
    write_backtest_csv(fixed, buf)
    print("\nreport CSV:")
    print(buf.getvalue())


if __name__ == "__main__":
    main()
