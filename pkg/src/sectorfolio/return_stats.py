"""Per-asset return statistics and covariance estimation.

Conventions used throughout:

* Daily returns are simple percentage changes, ``close[t] / close[t-1] - 1``.
* A year is 250 trading days. Mean daily return annualizes by 250,
  daily volatility by sqrt(250).
* Dispersion statistics are sample statistics (ddof=1).

All statistics expect a complete panel, so run
`market_data.apply_missing_data_policy` (or `fill_gaps`) before calling
the panel-level functions here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date

import numpy as np

from .errors import DegenerateAssetError, InsufficientDataError
from .market_data import PricePanel, PriceSeries

__all__ = [
    "TRADING_DAYS_PER_YEAR",
    "ReturnSeries",
    "AssetStats",
    "CovarianceMatrix",
    "daily_returns",
    "annualize_return",
    "daily_volatility",
    "annual_volatility",
    "asset_stats",
    "covariance_matrix",
    "correlation_matrix",
]

TRADING_DAYS_PER_YEAR = 250


@dataclass(eq=False)
class ReturnSeries:
    """Daily simple returns for one ticker.

    ``dates[k]`` is the date the k-th return was realized, i.e. the
    later date of the price pair it was computed from.
    """

    ticker: str
    dates: list[date]
    returns: np.ndarray

    def __post_init__(self) -> None:
        self.returns = np.asarray(self.returns, dtype=float)
        if self.returns.ndim != 1 or len(self.dates) != self.returns.size:
            raise ValueError(
                f"{self.ticker}: {len(self.dates)} dates vs {self.returns.size} returns"
            )
        for a, b in zip(self.dates, self.dates[1:]):
            if a >= b:
                raise ValueError(f"{self.ticker}: dates not strictly increasing at {b}")
        if not np.all(np.isfinite(self.returns)) or np.any(self.returns <= -1.0):
            raise ValueError(
                f"{self.ticker}: simple returns must be finite and greater than -1"
            )

    def __len__(self) -> int:
        return self.returns.size


@dataclass
class AssetStats:
    """Annualized summary statistics for one asset."""

    ticker: str
    annual_return: float
    daily_volatility: float
    annual_volatility: float


@dataclass(eq=False)
class CovarianceMatrix:
    """Sample covariance of daily returns across a set of assets.

    `entries` is in daily units. `annualized()` scales by the trading
    year for annual-variance arithmetic. Construction validates symmetry
    and rejects matrices that are materially non-positive-semidefinite.
    """

    tickers: list[str]
    entries: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.tickers)
        if n == 0:
            raise ValueError("covariance needs at least one ticker")
        if len(set(self.tickers)) != n:
            raise ValueError("duplicate tickers in covariance matrix")
        self.entries = np.asarray(self.entries, dtype=float)
        if self.entries.shape != (n, n):
            raise ValueError(
                f"covariance shape {self.entries.shape} does not match {n} tickers"
            )
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("covariance entries must be finite")
        scale = max(1.0, float(np.max(np.abs(self.entries))))
        if np.max(np.abs(self.entries - self.entries.T)) > 1e-12 * scale:
            raise ValueError("covariance matrix is not symmetric")
        if np.any(np.diag(self.entries) < 0.0):
            raise ValueError("negative variance on the covariance diagonal")
        # allow the eigenvalue smudge a sample estimate can carry, no more
        floor = -1e-8 * max(1.0, float(np.max(np.diag(self.entries))))
        if float(np.min(np.linalg.eigvalsh(self.entries))) < floor:
            raise ValueError("covariance matrix is not positive semidefinite")

    @property
    def n_assets(self) -> int:
        return len(self.tickers)

    def annualized(self) -> np.ndarray:
        """Covariance scaled to annual units (entries times 250)."""
        return self.entries * TRADING_DAYS_PER_YEAR

    def variance(self, ticker: str) -> float:
        """Daily return variance of one ticker."""
        try:
            i = self.tickers.index(ticker)
        except ValueError:
            raise KeyError(ticker) from None
        return float(self.entries[i, i])


def daily_returns(series: PriceSeries) -> ReturnSeries:
    """Compute daily simple returns from a price series.

    Parameters
    ----------
    series : PriceSeries
        At least two observations.

    Returns
    -------
    ReturnSeries
        One return per consecutive price pair, dated at the later price.

    Raises
    ------
    InsufficientDataError
        Fewer than two prices.
    """
    if len(series) < 2:
        raise InsufficientDataError(
            f"{series.ticker}: need at least 2 prices for returns, have {len(series)}"
        )
    returns = series.closes[1:] / series.closes[:-1] - 1.0
    return ReturnSeries(series.ticker, list(series.dates[1:]), returns)


def annualize_return(returns: ReturnSeries) -> float:
    """Annualized mean return: mean daily return times 250.

    Raises
    ------
    InsufficientDataError
        Empty return series.
    """
    if len(returns) == 0:
        raise InsufficientDataError(f"{returns.ticker}: no returns to annualize")
    return float(np.mean(returns.returns)) * TRADING_DAYS_PER_YEAR


def daily_volatility(returns: ReturnSeries) -> float:
    """Sample standard deviation (ddof=1) of daily returns.

    Raises
    ------
    InsufficientDataError
        Fewer than two returns, where the sample deviation is undefined.
    """
    if len(returns) < 2:
        raise InsufficientDataError(
            f"{returns.ticker}: need at least 2 returns for volatility, have {len(returns)}"
        )
    return float(np.std(returns.returns, ddof=1))


def annual_volatility(daily_vol: float) -> float:
    """Scale a daily volatility to annual units by sqrt(250).

    Raises
    ------
    ValueError
        Negative input.
    """
    if daily_vol < 0.0:
        raise ValueError(f"volatility cannot be negative, got {daily_vol}")
    return daily_vol * math.sqrt(TRADING_DAYS_PER_YEAR)


def asset_stats(panel: PricePanel) -> list[AssetStats]:
    """Annualized return and volatility for every ticker in a panel.

    The panel must be complete (no gaps) and hold at least three dates,
    so that each ticker has two or more returns.
    """
    _require_complete(panel, minimum_dates=3)
    out = []
    for ticker in panel.tickers:
        rs = daily_returns(panel.series(ticker))
        dv = daily_volatility(rs)
        out.append(AssetStats(ticker, annualize_return(rs), dv, annual_volatility(dv)))
    return out


def covariance_matrix(panel: PricePanel) -> CovarianceMatrix:
    """Sample covariance matrix of daily returns for a complete panel.

    Parameters
    ----------
    panel : PricePanel
        Complete (gap-free) panel with at least three dates.

    Returns
    -------
    CovarianceMatrix
        Daily-unit covariance in panel ticker order, ddof=1.

    Raises
    ------
    ValueError
        The panel still has gaps.
    InsufficientDataError
        Fewer than three dates (fewer than two returns per asset).
    """
    _require_complete(panel, minimum_dates=3)
    returns = panel.closes[:, 1:] / panel.closes[:, :-1] - 1.0
    entries = np.atleast_2d(np.cov(returns, ddof=1))
    return CovarianceMatrix(list(panel.tickers), entries)


def correlation_matrix(cov: CovarianceMatrix) -> np.ndarray:
    """Correlation matrix implied by a covariance matrix.

    The diagonal is exactly 1. Off-diagonal entries are
    cov(i, j) / (sigma_i * sigma_j).

    Raises
    ------
    DegenerateAssetError
        Some asset has zero variance, naming the ticker.
    """
    variances = np.diag(cov.entries)
    flat = [t for t, v in zip(cov.tickers, variances) if v == 0.0]
    if flat:
        raise DegenerateAssetError(
            "zero-variance tickers have no defined correlation: " + ", ".join(flat)
        )
    sigma = np.sqrt(variances)
    corr = cov.entries / np.outer(sigma, sigma)
    np.fill_diagonal(corr, 1.0)
    return corr


def _require_complete(panel: PricePanel, *, minimum_dates: int) -> None:
    if not panel.is_complete:
        raise ValueError("panel has gaps; apply the missing-data policy first")
    if panel.n_dates < minimum_dates:
        raise InsufficientDataError(
            f"need at least {minimum_dates} dates, panel has {panel.n_dates}"
        )
