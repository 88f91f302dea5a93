"""Monte Carlo frontier clouds of random long-only portfolios.

A cloud is built by drawing `n_samples` weight vectors, scoring each
with the portfolio module, and keeping every sample. Two selections
matter downstream: the minimum-risk portfolio (MRP, leftmost point) and
the optimum-risk portfolio (ORP, maximum Sharpe ratio).

Determinism contract
--------------------
Sampling uses a counter-based generator (Philox) with a fixed draw
budget per sample, padded to the generator's four-draw block size. The
weights of sample ``i`` are therefore a pure function of ``(seed, i)``:
any chunking of the index range, sequential or threaded, reproduces the
same cloud bit for bit. Worker count is a throughput knob only.

Weight samplers are pluggable by name via `WEIGHT_SAMPLERS`. Every
sampler maps a block of uniform draws to simplex rows, so the contract
above holds for all of them.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Callable, Mapping, Sequence

import numpy as np

from .errors import DataFormatError, DegenerateSampleError, EmptyCloudError
from .portfolio import (
    RiskFreeAssumption,
    WeightVector,
    _aligned,
    portfolio_annual_risk,
    portfolio_return,
    sharpe_ratio,
)
from .return_stats import CovarianceMatrix

__all__ = [
    "FrontierSample",
    "FrontierCloud",
    "WEIGHT_SAMPLERS",
    "sample_frontier",
    "min_risk_portfolio",
    "optimum_risk_portfolio",
    "export_frontier",
    "read_frontier_csv",
]


@dataclass(eq=False)
class FrontierSample:
    """One random portfolio with its annual return, risk, and Sharpe.

    `sharpe` is NaN when the sample's risk is exactly zero; selection by
    Sharpe refuses such clouds rather than guessing.
    """

    weights: WeightVector
    annual_return: float
    annual_risk: float
    sharpe: float


@dataclass(eq=False)
class FrontierCloud:
    """All samples of one frontier run plus the inputs that made it."""

    samples: list[FrontierSample]
    tickers: list[str]
    seed: int
    rf: RiskFreeAssumption
    sampler: str = "uniform"

    @property
    def sample_count(self) -> int:
        return len(self.samples)

    def risks(self) -> np.ndarray:
        return np.array([s.annual_risk for s in self.samples])

    def returns(self) -> np.ndarray:
        return np.array([s.annual_return for s in self.samples])

    def sharpes(self) -> np.ndarray:
        return np.array([s.sharpe for s in self.samples])


def _simplex_uniform(u: np.ndarray) -> np.ndarray:
    """Independent uniforms normalized by their sum."""
    return u / u.sum(axis=1, keepdims=True)


def _simplex_dirichlet(u: np.ndarray) -> np.ndarray:
    """Flat Dirichlet via normalized exponentials of the same uniforms."""
    e = -np.log1p(-u)
    return e / e.sum(axis=1, keepdims=True)


WEIGHT_SAMPLERS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "uniform": _simplex_uniform,
    "dirichlet": _simplex_dirichlet,
}


def _block_draws(seed: int, lo: int, hi: int, n_assets: int) -> np.ndarray:
    """Uniform draws for samples [lo, hi), independent of chunk boundaries.

    Each sample owns `per` consecutive draws, where `per` is n_assets
    rounded up to Philox's four-draw block, so `advance` can jump to any
    sample boundary exactly.
    """
    per = 4 * ((n_assets + 3) // 4)
    bits = np.random.Philox(key=seed)
    bits.advance(lo * (per // 4))
    draws = np.random.Generator(bits).random((hi - lo, per))
    return draws[:, :n_assets]


def sample_frontier(
    expected_returns: Mapping[str, float] | Sequence[float] | np.ndarray,
    cov: CovarianceMatrix,
    n_samples: int = 10_000,
    seed: int = 0,
    rf: RiskFreeAssumption | float = RiskFreeAssumption(),
    workers: int = 1,
    sampler: str = "uniform",
) -> FrontierCloud:
    """Draw a cloud of random portfolios over the covariance's tickers.

    Parameters
    ----------
    expected_returns : annual expected return per ticker, mapping or
        sequence aligned to ``cov.tickers``.
    cov : daily covariance matrix; defines the ticker order.
    n_samples : cloud size, at least 1.
    seed : generator seed; same seed, same cloud.
    rf : risk-free assumption for per-sample Sharpe ratios.
    workers : thread count. Any value yields the identical cloud.
    sampler : name of a registered weight sampler.

    Raises
    ------
    EmptyCloudError : n_samples < 1.
    ValueError : unknown sampler name or workers < 1.
    AlignmentError : expected returns do not align with the covariance.
    """
    if n_samples < 1:
        raise EmptyCloudError(f"n_samples must be at least 1, got {n_samples}")
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    try:
        to_simplex = WEIGHT_SAMPLERS[sampler]
    except KeyError:
        raise ValueError(
            f"unknown sampler {sampler!r}, known: {', '.join(sorted(WEIGHT_SAMPLERS))}"
        ) from None
    tickers = list(cov.tickers)
    mu = _aligned(expected_returns, tickers, "expected returns")
    rf = rf if isinstance(rf, RiskFreeAssumption) else RiskFreeAssumption(float(rf))

    def build(lo: int, hi: int) -> list[FrontierSample]:
        if hi <= lo:
            return []
        rows = to_simplex(_block_draws(seed, lo, hi, len(tickers)))
        chunk = []
        for row in rows:
            wv = WeightVector(list(tickers), row)
            annual_return = portfolio_return(wv, mu)
            annual_risk = portfolio_annual_risk(wv, cov)
            sharpe = (
                sharpe_ratio(annual_return, annual_risk, rf)
                if annual_risk > 0.0
                else math.nan
            )
            chunk.append(FrontierSample(wv, annual_return, annual_risk, sharpe))
        return chunk

    if workers == 1:
        samples = build(0, n_samples)
    else:
        bounds = [n_samples * k // workers for k in range(workers + 1)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(build, bounds[:-1], bounds[1:])
            samples = [s for part in parts for s in part]
    return FrontierCloud(samples, tickers, seed, rf, sampler)


def min_risk_portfolio(cloud: FrontierCloud) -> FrontierSample:
    """The sample with the lowest annual risk, first index winning ties.

    Raises EmptyCloudError on an empty cloud.
    """
    if cloud.sample_count == 0:
        raise EmptyCloudError("cannot select from an empty cloud")
    return cloud.samples[int(np.argmin(cloud.risks()))]


def optimum_risk_portfolio(cloud: FrontierCloud) -> FrontierSample:
    """The sample with the highest Sharpe ratio, first index winning ties.

    Raises
    ------
    EmptyCloudError : empty cloud.
    DegenerateSampleError : some sample has exactly zero risk, so the
        Sharpe ordering is undefined.
    """
    if cloud.sample_count == 0:
        raise EmptyCloudError("cannot select from an empty cloud")
    risks = cloud.risks()
    if np.any(risks == 0.0):
        raise DegenerateSampleError(
            "cloud contains a zero-risk sample; Sharpe selection is undefined"
        )
    return cloud.samples[int(np.argmax(cloud.sharpes()))]


def export_frontier(cloud: FrontierCloud, dest: str | Path | IO[str]) -> None:
    """Write a cloud as CSV with the MRP and ORP rows flagged.

    Columns: annual_risk, annual_return, sharpe, one ``w_<ticker>``
    column per asset, and ``flag`` holding ``mrp``, ``orp``, ``mrp+orp``
    or nothing. Values carry 12 significant digits so reloading
    reproduces selection and stats to numerical noise.
    """
    if cloud.sample_count == 0:
        raise EmptyCloudError("cannot export an empty cloud")
    risks = cloud.risks()
    mrp_index = int(np.argmin(risks))
    orp_index = (
        int(np.argmax(cloud.sharpes())) if not np.any(risks == 0.0) else None
    )

    def run(fh: IO[str]) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["annual_risk", "annual_return", "sharpe"]
            + [f"w_{t}" for t in cloud.tickers]
            + ["flag"]
        )
        for i, s in enumerate(cloud.samples):
            flags = []
            if i == mrp_index:
                flags.append("mrp")
            if i == orp_index:
                flags.append("orp")
            writer.writerow(
                [format(s.annual_risk, ".12g"), format(s.annual_return, ".12g"),
                 format(s.sharpe, ".12g")]
                + [format(w, ".12g") for w in s.weights.weights]
                + ["+".join(flags)]
            )

    if hasattr(dest, "write"):
        run(dest)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            run(fh)


def read_frontier_csv(
    source: str | Path | IO[str],
) -> tuple[list[str], list[tuple[float, float, float, np.ndarray, str]]]:
    """Reload an exported cloud as (tickers, rows).

    Each row is (annual_risk, annual_return, sharpe, weights, flag).
    Raises DataFormatError on any malformed line.
    """

    def run(fh: IO[str], path: str):
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty file") from None
        if (
            len(header) < 5
            or header[:3] != ["annual_risk", "annual_return", "sharpe"]
            or header[-1] != "flag"
            or any(not h.startswith("w_") for h in header[3:-1])
        ):
            raise DataFormatError(f"{path}: line 1: not a frontier export header")
        tickers = [h[2:] for h in header[3:-1]]
        rows = []
        for row in reader:
            if len(row) != len(header):
                raise DataFormatError(
                    f"{path}: line {reader.line_num}: expected {len(header)} fields"
                )
            try:
                values = [float(x) for x in row[:-1]]
            except ValueError as exc:
                raise DataFormatError(f"{path}: line {reader.line_num}: {exc}") from None
            rows.append(
                (values[0], values[1], values[2], np.array(values[3:]), row[-1])
            )
        return tickers, rows

    if hasattr(source, "read"):
        return run(source, getattr(source, "name", "<stream>"))
    with open(source, "r", encoding="utf-8", newline="") as fh:
        return run(fh, str(source))
