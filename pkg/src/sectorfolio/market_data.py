"""Price history loading, alignment, and the missing-data policy.

Two CSV layouts are accepted, sniffed from the header row:

* long: ``date,ticker,close`` with one row per observation, e.g.
  ``2022-01-03,MARUTI,7524``.
* wide: ``date,<TICKER>,<TICKER>,...`` with one row per date and one
  column per ticker. An empty cell means the ticker did not trade that
  day; in the long layout a missing observation is simply an absent row.

Dates are ISO ``YYYY-MM-DD``. Closes must parse as finite positive
numbers. Any malformed row raises DataFormatError naming the line.

Universe definitions live in small INI files::

    [universe]
    sector = Auto
    tickers = M&M MARUTI TATAMOTORS EICHERMOT
    train = 2017-01-01:2021-12-31
    test = 2022-01-01:2022-12-31
    ; optional, resolved relative to the config file:
    prices = auto.csv

    ; optional metadata, not used by any computation:
    [contributions]
    MARUTI = 19.51

Tickers are separated by whitespace or commas. Windows are inclusive
``start:end`` date ranges, and the training window must end before the
test window begins.

A loaded panel keeps the union of observed dates for its tickers, with
NaN marking the gaps. `apply_missing_data_policy` drops tickers whose
missing fraction exceeds the threshold, then fills the remaining gaps:
forward from the last traded price, and backward only at the head of a
series (a late listing has no earlier price to carry).
"""

from __future__ import annotations

import configparser
import csv
import re
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import IO, Iterable, Iterator

import numpy as np

from .errors import (
    DataFormatError,
    EmptyPanelError,
    EmptyUniverseError,
    InsufficientDataError,
    MissingTickerError,
)

__all__ = [
    "PriceSeries",
    "PricePanel",
    "UniverseConfig",
    "read_universe_config",
    "load_price_panel",
    "fill_gaps",
    "apply_missing_data_policy",
    "write_long_csv",
]

_WINDOW_RE = re.compile(r"^(\d{4}-\d{2}-\d{2}):(\d{4}-\d{2}-\d{2})$")


@dataclass(eq=False)
class PriceSeries:
    """Closing prices for one ticker on strictly increasing dates."""

    ticker: str
    dates: list[date]
    closes: np.ndarray

    def __post_init__(self) -> None:
        if not self.ticker:
            raise ValueError("ticker must be non-empty")
        self.closes = np.asarray(self.closes, dtype=float)
        if self.closes.ndim != 1 or len(self.dates) != self.closes.size:
            raise ValueError(
                f"{self.ticker}: {len(self.dates)} dates vs {self.closes.size} closes"
            )
        if self.closes.size == 0:
            raise ValueError(f"{self.ticker}: empty price series")
        for a, b in zip(self.dates, self.dates[1:]):
            if a >= b:
                raise ValueError(f"{self.ticker}: dates not strictly increasing at {b}")
        if not np.all(np.isfinite(self.closes)) or np.any(self.closes <= 0.0):
            raise ValueError(f"{self.ticker}: closes must be finite and positive")

    def __len__(self) -> int:
        return self.closes.size


@dataclass(eq=False)
class PricePanel:
    """Aligned close-price matrix, one row per ticker, one column per date.

    ``closes[i, j]`` is the close of ``tickers[i]`` on ``dates[j]``, or
    NaN if that ticker has no observation on that date. Observed cells
    are always finite and positive.
    """

    tickers: list[str]
    dates: list[date]
    closes: np.ndarray

    def __post_init__(self) -> None:
        if not self.tickers:
            raise EmptyPanelError("panel has no tickers")
        if len(set(self.tickers)) != len(self.tickers):
            raise ValueError("duplicate tickers in panel")
        if not self.dates:
            raise EmptyPanelError("panel has no dates")
        for a, b in zip(self.dates, self.dates[1:]):
            if a >= b:
                raise ValueError(f"panel dates not strictly increasing at {b}")
        self.closes = np.asarray(self.closes, dtype=float)
        if self.closes.shape != (len(self.tickers), len(self.dates)):
            raise ValueError(
                f"closes shape {self.closes.shape} does not match "
                f"{len(self.tickers)} tickers x {len(self.dates)} dates"
            )
        observed = self.closes[~np.isnan(self.closes)]
        if not np.all(np.isfinite(observed)) or np.any(observed <= 0.0):
            raise ValueError("observed closes must be finite and positive")

    @property
    def n_assets(self) -> int:
        return len(self.tickers)

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    @property
    def is_complete(self) -> bool:
        """True when every (ticker, date) cell holds a price."""
        return not np.any(np.isnan(self.closes))

    def missing_fraction(self, ticker: str) -> float:
        """Fraction of this panel's dates on which `ticker` has no observation."""
        row = self.closes[self._index(ticker)]
        return float(np.isnan(row).sum()) / self.n_dates

    def series(self, ticker: str) -> PriceSeries:
        """Observed prices for one ticker, gaps dropped."""
        row = self.closes[self._index(ticker)]
        mask = ~np.isnan(row)
        if not mask.any():
            raise InsufficientDataError(f"{ticker}: no observations in panel")
        dates = [d for d, keep in zip(self.dates, mask) if keep]
        return PriceSeries(ticker, dates, row[mask])

    def restrict(self, tickers: Iterable[str]) -> "PricePanel":
        """Sub-panel holding `tickers` in the given order, dates unchanged."""
        wanted = list(tickers)
        if not wanted:
            raise EmptyUniverseError("cannot restrict panel to zero tickers")
        missing = [t for t in wanted if t not in self.tickers]
        if missing:
            raise MissingTickerError(missing)
        rows = [self._index(t) for t in wanted]
        return PricePanel(wanted, list(self.dates), self.closes[rows].copy())

    def _index(self, ticker: str) -> int:
        try:
            return self.tickers.index(ticker)
        except ValueError:
            raise MissingTickerError([ticker]) from None


@dataclass
class UniverseConfig:
    """One sector universe: tickers plus training and test windows."""

    sector: str
    tickers: list[str]
    train_window: tuple[date, date]
    test_window: tuple[date, date]
    prices: str | None = None
    contributions: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.sector:
            raise ValueError("sector name must be non-empty")
        if not self.tickers:
            raise EmptyUniverseError(f"{self.sector}: no tickers configured")
        if len(set(self.tickers)) != len(self.tickers):
            raise ValueError(f"{self.sector}: duplicate tickers in universe")
        for name, window in (("train", self.train_window), ("test", self.test_window)):
            if window[0] > window[1]:
                raise ValueError(f"{self.sector}: {name} window starts after it ends")
        if self.train_window[1] >= self.test_window[0]:
            raise ValueError(
                f"{self.sector}: training window must end before the test window begins"
            )


def _parse_window(text: str, *, where: str) -> tuple[date, date]:
    m = _WINDOW_RE.match(text.strip())
    if m is None:
        raise DataFormatError(f"{where}: expected start:end dates, got {text!r}")
    try:
        return date.fromisoformat(m.group(1)), date.fromisoformat(m.group(2))
    except ValueError as exc:
        raise DataFormatError(f"{where}: {exc}") from None


def read_universe_config(path: str | Path) -> UniverseConfig:
    """Parse a universe INI file into a UniverseConfig.

    Raises DataFormatError on a missing section or key, an unparseable
    window, or a malformed contributions entry.
    """
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise DataFormatError(f"{path}: {exc}") from None
    if not parser.has_section("universe"):
        raise DataFormatError(f"{path}: missing [universe] section")
    sec = parser["universe"]
    for key in ("sector", "tickers", "train", "test"):
        if key not in sec:
            raise DataFormatError(f"{path}: missing '{key}' in [universe]")
    tickers = [t for t in re.split(r"[,\s]+", sec["tickers"].strip()) if t]
    contributions: dict[str, float] = {}
    if parser.has_section("contributions"):
        for ticker, value in parser["contributions"].items():
            try:
                contributions[ticker.upper()] = float(value)
            except ValueError:
                raise DataFormatError(
                    f"{path}: contribution for {ticker!r} is not a number: {value!r}"
                ) from None
    try:
        return UniverseConfig(
            sector=sec["sector"].strip(),
            tickers=tickers,
            train_window=_parse_window(sec["train"], where=f"{path} [universe] train"),
            test_window=_parse_window(sec["test"], where=f"{path} [universe] test"),
            prices=sec.get("prices", "").strip() or None,
            contributions=contributions,
        )
    except ValueError as exc:
        raise DataFormatError(f"{path}: {exc}") from None


def _parse_date(text: str, *, path: str, line: int) -> date:
    try:
        return date.fromisoformat(text.strip())
    except ValueError:
        raise DataFormatError(f"{path}: line {line}: bad date {text!r}") from None


def _parse_close(text: str, *, path: str, line: int, ticker: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataFormatError(
            f"{path}: line {line}: bad close {text!r} for {ticker}"
        ) from None
    if not np.isfinite(value) or value <= 0.0:
        raise DataFormatError(
            f"{path}: line {line}: close for {ticker} must be finite and positive, got {text!r}"
        )
    return value


def _observations_from_long(
    reader: "csv.reader", header: list[str], path: str
) -> tuple[dict[str, dict[date, float]], set[str]]:
    obs: dict[str, dict[date, float]] = {}
    seen: set[str] = set()
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise DataFormatError(
                f"{path}: line {reader.line_num}: expected 3 fields, got {len(row)}"
            )
        day = _parse_date(row[0], path=path, line=reader.line_num)
        ticker = row[1].strip()
        if not ticker:
            raise DataFormatError(f"{path}: line {reader.line_num}: empty ticker")
        seen.add(ticker)
        close = _parse_close(row[2], path=path, line=reader.line_num, ticker=ticker)
        per = obs.setdefault(ticker, {})
        if day in per:
            raise DataFormatError(
                f"{path}: line {reader.line_num}: duplicate observation for {ticker} on {day}"
            )
        per[day] = close
    return obs, seen


def _observations_from_wide(
    reader: "csv.reader", header: list[str], path: str
) -> tuple[dict[str, dict[date, float]], set[str]]:
    tickers = [h.strip() for h in header[1:]]
    if not tickers or any(not t for t in tickers):
        raise DataFormatError(f"{path}: line 1: blank ticker column in header")
    if len(set(tickers)) != len(tickers):
        raise DataFormatError(f"{path}: line 1: duplicate ticker column in header")
    obs: dict[str, dict[date, float]] = {t: {} for t in tickers}
    seen_dates: set[date] = set()
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise DataFormatError(
                f"{path}: line {reader.line_num}: expected {len(header)} fields, got {len(row)}"
            )
        day = _parse_date(row[0], path=path, line=reader.line_num)
        if day in seen_dates:
            raise DataFormatError(f"{path}: line {reader.line_num}: duplicate date {day}")
        seen_dates.add(day)
        for ticker, cell in zip(tickers, row[1:]):
            if not cell.strip():
                continue
            obs[ticker][day] = _parse_close(
                cell, path=path, line=reader.line_num, ticker=ticker
            )
    return obs, set(tickers)


def _read_observations(
    source: str | Path | IO[str],
) -> tuple[dict[str, dict[date, float]], set[str]]:
    """Parse either CSV layout into {ticker: {date: close}} plus all tickers seen."""
    if hasattr(source, "read"):
        return _parse_stream(source, getattr(source, "name", "<stream>"))
    with open(source, "r", encoding="utf-8", newline="") as fh:
        return _parse_stream(fh, str(source))


def _parse_stream(stream: IO[str], path: str):
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError(f"{path}: empty file") from None
    names = [h.strip().lower() for h in header]
    if names[:1] != ["date"]:
        raise DataFormatError(f"{path}: line 1: first column must be 'date', got {header!r}")
    if names == ["date", "ticker", "close"]:
        return _observations_from_long(reader, header, path)
    if len(names) >= 2:
        return _observations_from_wide(reader, header, path)
    raise DataFormatError(f"{path}: line 1: unrecognized header {header!r}")


def load_price_panel(
    source: str | Path | IO[str],
    universe: UniverseConfig,
    window: tuple[date, date] | None = None,
) -> PricePanel:
    """Load, restrict, and align closing prices for a universe.

    Parameters
    ----------
    source : path or open text stream holding a long or wide price CSV.
    universe : the sector universe whose tickers should be loaded.
    window : inclusive (start, end) date range, or None for all dates.

    Returns
    -------
    PricePanel over the union of in-window observation dates, in universe
    ticker order, with NaN where a ticker has no observation.

    Raises
    ------
    DataFormatError : a row fails to parse (message names the line).
    MissingTickerError : a configured ticker never appears in the source.
    EmptyPanelError : no configured ticker has any in-window observation.
    """
    obs, seen = _read_observations(source)
    absent = [t for t in universe.tickers if t not in seen]
    if absent:
        raise MissingTickerError(absent)
    per_ticker: list[dict[date, float]] = []
    all_dates: set[date] = set()
    for ticker in universe.tickers:
        series = obs.get(ticker, {})
        if window is not None:
            start, end = window
            series = {d: c for d, c in series.items() if start <= d <= end}
        per_ticker.append(series)
        all_dates.update(series)
    if not all_dates:
        raise EmptyPanelError(
            f"{universe.sector}: no observations for any configured ticker"
            + (f" in {window[0]}:{window[1]}" if window else "")
        )
    dates = sorted(all_dates)
    index = {d: j for j, d in enumerate(dates)}
    closes = np.full((len(universe.tickers), len(dates)), np.nan)
    for i, series in enumerate(per_ticker):
        for d, c in series.items():
            closes[i, index[d]] = c
    return PricePanel(list(universe.tickers), dates, closes)


def fill_gaps(panel: PricePanel) -> PricePanel:
    """Fill every gap from that ticker's own observed prices.

    Interior and trailing gaps carry the last traded price forward;
    leading gaps take the first traded price. No new price levels are
    invented. A ticker with no observations at all cannot be filled and
    raises InsufficientDataError.
    """
    closes = panel.closes.copy()
    n = panel.n_dates
    for i, ticker in enumerate(panel.tickers):
        row = closes[i]
        observed = np.flatnonzero(~np.isnan(row))
        if observed.size == 0:
            raise InsufficientDataError(f"{ticker}: no observations to fill from")
        # index of the most recent observation at or before each column,
        # -1 where none exists yet (the leading gap)
        carry = np.maximum.accumulate(np.where(np.isnan(row), -1, np.arange(n)))
        carry[carry < 0] = observed[0]
        closes[i] = row[carry]
    return PricePanel(list(panel.tickers), list(panel.dates), closes)


def apply_missing_data_policy(
    panel: PricePanel, threshold: float = 0.30
) -> tuple[PricePanel, list[tuple[str, float]]]:
    """Drop sparsely observed tickers, then fill the survivors' gaps.

    A ticker is excluded when its missing fraction over the panel's
    dates is strictly greater than `threshold` (default 0.30). The
    returned panel is complete: every cell holds a finite positive
    price.

    Returns
    -------
    (filled_panel, exclusions) where exclusions is a list of
    (ticker, missing_fraction) pairs in panel order.

    Raises
    ------
    ValueError : threshold outside [0, 1].
    EmptyUniverseError : every ticker was excluded.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be within [0, 1], got {threshold}")
    fractions = [(t, panel.missing_fraction(t)) for t in panel.tickers]
    excluded = [(t, f) for t, f in fractions if f > threshold]
    retained = [t for t, f in fractions if f <= threshold]
    if not retained:
        raise EmptyUniverseError(
            "all tickers exceed the missing-data threshold: "
            + ", ".join(f"{t} ({f:.0%})" for t, f in excluded)
        )
    return fill_gaps(panel.restrict(retained)), excluded


def write_long_csv(panel_or_series: PricePanel | Iterable[PriceSeries], dest: str | Path | IO[str]) -> None:
    """Write prices in the canonical long layout (date,ticker,close)."""

    def rows() -> Iterator[tuple[date, str, float]]:
        if isinstance(panel_or_series, PricePanel):
            p = panel_or_series
            for j, d in enumerate(p.dates):
                for i, t in enumerate(p.tickers):
                    if not np.isnan(p.closes[i, j]):
                        yield d, t, float(p.closes[i, j])
        else:
            for s in panel_or_series:
                for d, c in zip(s.dates, s.closes):
                    yield d, s.ticker, float(c)

    if hasattr(dest, "write"):
        _write_long_rows(dest, rows())
    else:
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            _write_long_rows(fh, rows())


def _write_long_rows(fh: IO[str], rows: Iterable[tuple[date, str, float]]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["date", "ticker", "close"])
    for d, t, c in rows:
        writer.writerow([d.isoformat(), t, format(c, ".12g")])
