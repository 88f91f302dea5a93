"""Optional download client for daily close histories.

Talks to any quote endpoint that returns per-ticker CSV with date and
close columns, stooq-style by default. The HTTP transport is injectable
so tests (and offline use) never touch the network. Nothing else in the
package imports this module.
"""

from __future__ import annotations

import csv
import io
from datetime import date
from typing import Callable, Iterable
from urllib import error, parse, request

from .errors import FetchError
from .market_data import PriceSeries

__all__ = ["DEFAULT_URL_TEMPLATE", "fetch_history"]

DEFAULT_URL_TEMPLATE = "https://stooq.com/q/d/l/?s={symbol}&d1={start}&d2={end}&i=d"

# placeholder strings vendors use for a day without a quote
_NO_DATA = {"", "n/d", "nd", "null", "none", "-"}


def _http_get(url: str, timeout: float) -> str:
    req = request.Request(url, headers={"User-Agent": "sectorfolio/0.1"})
    try:
        with request.urlopen(req, timeout=timeout) as resp:
            return resp.read().decode("utf-8", errors="replace")
    except (error.URLError, TimeoutError, OSError) as exc:
        raise FetchError(f"{url}: {exc}") from None


def _parse_payload(ticker: str, text: str) -> PriceSeries:
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip().lower() for h in next(reader)]
    except StopIteration:
        raise FetchError(f"{ticker}: empty response") from None
    try:
        date_col = header.index("date")
        close_col = header.index("close")
    except ValueError:
        raise FetchError(f"{ticker}: response has no date/close columns: {header!r}") from None
    rows: dict[date, float] = {}
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) <= max(date_col, close_col):
            raise FetchError(f"{ticker}: line {reader.line_num}: short row")
        cell = row[close_col].strip()
        if cell.lower() in _NO_DATA:
            continue
        try:
            day = date.fromisoformat(row[date_col].strip())
            close = float(cell)
        except ValueError as exc:
            raise FetchError(f"{ticker}: line {reader.line_num}: {exc}") from None
        if close <= 0.0:
            continue
        if day in rows:
            raise FetchError(f"{ticker}: line {reader.line_num}: duplicate date {day}")
        rows[day] = close
    if not rows:
        raise FetchError(f"{ticker}: no usable rows in response")
    days = sorted(rows)
    return PriceSeries(ticker, days, [rows[d] for d in days])


def fetch_history(
    tickers: Iterable[str],
    start: date,
    end: date,
    *,
    url_template: str = DEFAULT_URL_TEMPLATE,
    suffix: str = "",
    transport: Callable[[str], str] | None = None,
    timeout: float = 30.0,
) -> list[PriceSeries]:
    """Download daily closes for each ticker over [start, end].

    `suffix` is appended to each symbol before URL-encoding (exchange
    qualifiers like ".in"). `transport` maps a URL to response text;
    the default uses urllib with the given timeout.

    Raises FetchError when a request fails or a payload is unusable,
    and ValueError when the window is inverted.
    """
    if start > end:
        raise ValueError(f"start {start} is after end {end}")
    get = transport if transport is not None else (lambda url: _http_get(url, timeout))
    out = []
    for ticker in tickers:
        url = url_template.format(
            symbol=parse.quote((ticker + suffix).lower()),
            start=start.strftime("%Y%m%d"),
            end=end.strftime("%Y%m%d"),
        )
        out.append(_parse_payload(ticker, get(url)))
    return out
