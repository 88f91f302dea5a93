"""Portfolio-level arithmetic: weights, return, variance, Sharpe ratio.

Weights live on the long-only simplex (non-negative, summing to one).
Expected returns and risks are annual; covariance input is daily and is
scaled by the 250-day trading year where annual risk is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import AlignmentError, EmptyUniverseError
from .return_stats import TRADING_DAYS_PER_YEAR, CovarianceMatrix

__all__ = [
    "RiskFreeAssumption",
    "WeightVector",
    "PortfolioStats",
    "equal_weights",
    "portfolio_return",
    "portfolio_variance",
    "portfolio_annual_risk",
    "sharpe_ratio",
    "portfolio_stats",
]

_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RiskFreeAssumption:
    """Annual risk-free rate used in excess-return ratios. Default 1%."""

    rate: float = 0.01

    def __post_init__(self) -> None:
        if not math.isfinite(self.rate):
            raise ValueError("risk-free rate must be finite")


@dataclass(eq=False)
class WeightVector:
    """Long-only portfolio weights aligned to a ticker list.

    Weights must be non-negative and sum to 1 within 1e-9.
    """

    tickers: list[str]
    weights: np.ndarray

    def __post_init__(self) -> None:
        if not self.tickers:
            raise EmptyUniverseError("weight vector needs at least one ticker")
        if len(set(self.tickers)) != len(self.tickers):
            raise ValueError("duplicate tickers in weight vector")
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (len(self.tickers),):
            raise ValueError(
                f"{len(self.tickers)} tickers vs weight shape {self.weights.shape}"
            )
        if not np.all(np.isfinite(self.weights)) or np.any(self.weights < 0.0):
            raise ValueError("weights must be finite and non-negative")
        total = float(self.weights.sum())
        if abs(total - 1.0) > _SUM_TOLERANCE:
            raise ValueError(f"weights must sum to 1 within {_SUM_TOLERANCE}, got {total!r}")

    def __len__(self) -> int:
        return len(self.tickers)

    def weight(self, ticker: str) -> float:
        try:
            return float(self.weights[self.tickers.index(ticker)])
        except ValueError:
            raise KeyError(ticker) from None

    def as_mapping(self) -> dict[str, float]:
        return {t: float(w) for t, w in zip(self.tickers, self.weights)}


@dataclass
class PortfolioStats:
    """Annual return, annual risk, and Sharpe ratio of one portfolio."""

    annual_return: float
    annual_risk: float
    sharpe: float


def equal_weights(tickers: Sequence[str]) -> WeightVector:
    """The 1/n portfolio over `tickers`.

    Raises EmptyUniverseError when `tickers` is empty.
    """
    tickers = list(tickers)
    if not tickers:
        raise EmptyUniverseError("cannot build equal weights over zero tickers")
    return WeightVector(tickers, np.full(len(tickers), 1.0 / len(tickers)))


def _aligned(
    values: Mapping[str, float] | Sequence[float] | np.ndarray,
    tickers: list[str],
    what: str,
) -> np.ndarray:
    """Order `values` to `tickers`, raising AlignmentError on any mismatch."""
    if isinstance(values, Mapping):
        missing = [t for t in tickers if t not in values]
        if missing:
            raise AlignmentError(f"{what} missing tickers: " + ", ".join(missing))
        return np.array([float(values[t]) for t in tickers])
    arr = np.asarray(values, dtype=float)
    if arr.shape != (len(tickers),):
        raise AlignmentError(
            f"{what} has shape {arr.shape}, expected ({len(tickers)},)"
        )
    return arr


def portfolio_return(
    weights: WeightVector,
    expected_returns: Mapping[str, float] | Sequence[float] | np.ndarray,
) -> float:
    """Weighted sum of per-asset expected returns.

    `expected_returns` is either a ticker-keyed mapping or a sequence
    already in the weight vector's ticker order. Units carry through, so
    annual inputs give an annual portfolio return.
    """
    mu = _aligned(expected_returns, weights.tickers, "expected returns")
    return float(weights.weights @ mu)


def _cov_entries(weights: WeightVector, cov: CovarianceMatrix | np.ndarray) -> np.ndarray:
    if isinstance(cov, CovarianceMatrix):
        if set(cov.tickers) != set(weights.tickers):
            raise AlignmentError(
                "covariance tickers do not match weight tickers: "
                f"{sorted(set(cov.tickers) ^ set(weights.tickers))}"
            )
        order = [cov.tickers.index(t) for t in weights.tickers]
        return cov.entries[np.ix_(order, order)]
    entries = np.asarray(cov, dtype=float)
    n = len(weights)
    if entries.shape != (n, n):
        raise AlignmentError(f"covariance shape {entries.shape}, expected ({n}, {n})")
    return entries


def portfolio_variance(
    weights: WeightVector, cov: CovarianceMatrix | np.ndarray
) -> float:
    """Quadratic form w' C w.

    Expanded, this is the sum of w_i^2 var_i over assets plus
    2 w_i w_j cov_ij over distinct pairs. Units follow the covariance
    input (daily in, daily out).
    """
    entries = _cov_entries(weights, cov)
    return float(weights.weights @ entries @ weights.weights)


def portfolio_annual_risk(
    weights: WeightVector, cov: CovarianceMatrix | np.ndarray
) -> float:
    """Annual portfolio volatility, sqrt(w' C_daily w * 250)."""
    variance = portfolio_variance(weights, cov)
    # a PSD-validated covariance can still round the quadratic form a
    # hair below zero; clamp before the square root
    return math.sqrt(max(variance, 0.0) * TRADING_DAYS_PER_YEAR)


def sharpe_ratio(
    annual_return: float,
    annual_risk: float,
    rf: RiskFreeAssumption | float = RiskFreeAssumption(),
) -> float:
    """Excess annual return per unit of annual risk.

    Raises
    ------
    ValueError
        Negative risk.
    ZeroDivisionError
        Zero risk, where the ratio is undefined.
    """
    if annual_risk < 0.0:
        raise ValueError(f"risk cannot be negative, got {annual_risk}")
    if annual_risk == 0.0:
        raise ZeroDivisionError("Sharpe ratio undefined at zero risk")
    rate = rf.rate if isinstance(rf, RiskFreeAssumption) else float(rf)
    return (annual_return - rate) / annual_risk


def portfolio_stats(
    weights: WeightVector,
    expected_returns: Mapping[str, float] | Sequence[float] | np.ndarray,
    cov: CovarianceMatrix | np.ndarray,
    rf: RiskFreeAssumption | float = RiskFreeAssumption(),
) -> PortfolioStats:
    """Annual return, annual risk, and Sharpe for one weight vector.

    `expected_returns` must be annual and `cov` daily, matching what
    `return_stats` produces.
    """
    annual_return = portfolio_return(weights, expected_returns)
    annual_risk = portfolio_annual_risk(weights, cov)
    return PortfolioStats(annual_return, annual_risk, sharpe_ratio(annual_return, annual_risk, rf))
