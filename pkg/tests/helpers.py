"""Shared fixture builders for the test suite."""

from __future__ import annotations

from datetime import date, timedelta
from pathlib import Path

import numpy as np

from sectorfolio import PricePanel, write_long_csv


def weekdays(start: date, count: int) -> list[date]:
    """The first `count` weekdays at or after `start`."""
    days: list[date] = []
    d = start
    while len(days) < count:
        if d.weekday() < 5:
            days.append(d)
        d += timedelta(days=1)
    return days


def random_panel(
    tickers: list[str],
    n_days: int,
    seed: int,
    start: date = date(2020, 1, 6),
    drift: float = 0.0005,
    vol: float = 0.015,
) -> PricePanel:
    """Complete random-walk price panel, reproducible from the seed."""
    rng = np.random.default_rng(seed)
    steps = rng.normal(drift, vol, size=(len(tickers), n_days))
    closes = 50.0 * np.cumprod(1.0 + steps, axis=1)
    return PricePanel(list(tickers), weekdays(start, n_days), closes)


def write_prices(path: Path, panel: PricePanel) -> Path:
    write_long_csv(panel, path)
    return path


def write_universe(
    path: Path,
    sector: str,
    tickers: list[str],
    train: tuple[date, date],
    test: tuple[date, date],
    prices: str | None = None,
) -> Path:
    lines = [
        "[universe]",
        f"sector = {sector}",
        "tickers = " + " ".join(tickers),
        f"train = {train[0]}:{train[1]}",
        f"test = {test[0]}:{test[1]}",
    ]
    if prices:
        lines.append(f"prices = {prices}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
