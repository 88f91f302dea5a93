"""Report-file serialization and the cross-sector summary.

Report CSVs print percentages with two decimals and weights with six.
Lines starting with ``#`` are comments; readers skip them and blank
lines. Returns are held as fractions in memory and become ``*_pct``
columns on disk.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import AlignmentError, DataFormatError, EmptySummaryError
from .portfolio import WeightVector
from .return_stats import AssetStats

__all__ = [
    "WINNERS",
    "SectorResult",
    "winner_counts",
    "write_stats_csv",
    "write_weights_csv",
    "read_weights_csv",
    "write_sector_result",
    "read_sector_results",
    "write_summary",
]

WINNERS = ("EWP", "ORP", "TIE")


@dataclass
class SectorResult:
    """Head-to-head test-window outcome for one sector.

    Returns are fractions. The winner is derived: EWP wins on a strictly
    higher EWP return, ORP on a strictly higher ORP return, TIE on exact
    equality.
    """

    sector: str
    ewp_test_return: float
    orp_test_return: float
    winner: str = field(init=False)

    def __post_init__(self) -> None:
        if not self.sector:
            raise ValueError("sector name must be non-empty")
        if self.ewp_test_return > self.orp_test_return:
            self.winner = "EWP"
        elif self.orp_test_return > self.ewp_test_return:
            self.winner = "ORP"
        else:
            self.winner = "TIE"


def winner_counts(results: Sequence[SectorResult]) -> dict[str, int]:
    """How many sectors each strategy won."""
    counts = {w: 0 for w in WINNERS}
    for r in results:
        counts[r.winner] += 1
    return counts


def _open_for(dest: str | Path | IO[str], mode: str):
    if hasattr(dest, "read") or hasattr(dest, "write"):
        return dest, False
    return open(dest, mode, encoding="utf-8", newline=""), True


def write_stats_csv(stats: Iterable[AssetStats], dest: str | Path | IO[str]) -> None:
    """Per-ticker annual return and risk, as percentages."""
    fh, close = _open_for(dest, "w")
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["ticker", "annual_return_pct", "annual_risk_pct"])
        for s in stats:
            writer.writerow(
                [s.ticker, f"{s.annual_return * 100.0:.2f}", f"{s.annual_volatility * 100.0:.2f}"]
            )
    finally:
        if close:
            fh.close()


def write_weights_csv(
    ewp: WeightVector,
    mrp: WeightVector,
    orp: WeightVector,
    dest: str | Path | IO[str],
) -> None:
    """The three candidate books side by side, six decimals per weight.

    All three vectors must cover the same tickers; rows follow the EWP
    vector's order.
    """
    maps = {"mrp": mrp.as_mapping(), "orp": orp.as_mapping()}
    for name, m in maps.items():
        if set(m) != set(ewp.tickers):
            raise AlignmentError(f"{name} weights cover different tickers than ewp")
    fh, close = _open_for(dest, "w")
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["ticker", "ewp", "mrp", "orp"])
        for t, w in zip(ewp.tickers, ewp.weights):
            writer.writerow(
                [t, f"{w:.6f}", f"{maps['mrp'][t]:.6f}", f"{maps['orp'][t]:.6f}"]
            )
    finally:
        if close:
            fh.close()


def read_weights_csv(source: str | Path | IO[str]) -> dict[str, WeightVector]:
    """Reload a weights file as {column name: WeightVector}.

    Six-decimal rounding leaves column sums a hair off 1, so each column
    is renormalized by its sum. A column whose sum strays more than 1e-4
    from 1 is rejected as corrupt.
    """
    fh, close = _open_for(source, "r")
    path = getattr(fh, "name", "<stream>")
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty file") from None
        if len(header) < 2 or header[0] != "ticker":
            raise DataFormatError(f"{path}: line 1: not a weights header")
        columns = header[1:]
        tickers: list[str] = []
        values: list[list[float]] = []
        for row in reader:
            if not row or row[0].startswith("#"):
                continue
            if len(row) != len(header):
                raise DataFormatError(
                    f"{path}: line {reader.line_num}: expected {len(header)} fields"
                )
            tickers.append(row[0])
            try:
                values.append([float(x) for x in row[1:]])
            except ValueError as exc:
                raise DataFormatError(f"{path}: line {reader.line_num}: {exc}") from None
        if not tickers:
            raise DataFormatError(f"{path}: no weight rows")
        matrix = np.array(values)
        out = {}
        for j, name in enumerate(columns):
            col = matrix[:, j]
            total = float(col.sum())
            if abs(total - 1.0) > 1e-4:
                raise DataFormatError(
                    f"{path}: column {name!r} sums to {total:.6f}, not a weight column"
                )
            out[name] = WeightVector(list(tickers), col / total)
        return out
    finally:
        if close:
            fh.close()


def write_sector_result(result: SectorResult, dest: str | Path | IO[str]) -> None:
    """One sector's EWP/ORP outcome as a single-row report CSV."""
    _write_result_rows([result], dest, footer=False)


def write_summary(results: Sequence[SectorResult], dest: str | Path | IO[str]) -> None:
    """All sectors side by side, plus a win-count footer comment.

    Raises EmptySummaryError when `results` is empty.
    """
    if not results:
        raise EmptySummaryError("no sector results to summarize")
    _write_result_rows(results, dest, footer=True)


def _write_result_rows(
    results: Sequence[SectorResult], dest: str | Path | IO[str], footer: bool
) -> None:
    fh, close = _open_for(dest, "w")
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sector", "ewp_test_return_pct", "orp_test_return_pct", "winner"])
        for r in results:
            writer.writerow(
                [r.sector, f"{r.ewp_test_return * 100.0:.2f}", f"{r.orp_test_return * 100.0:.2f}", r.winner]
            )
        if footer:
            counts = winner_counts(results)
            note = f"# EWP wins: {counts['EWP']}, ORP wins: {counts['ORP']}"
            if counts["TIE"]:
                note += f", ties: {counts['TIE']}"
            fh.write(note + "\n")
    finally:
        if close:
            fh.close()


def read_sector_results(source: str | Path | IO[str]) -> list[SectorResult]:
    """Read sector results from a result or summary CSV.

    The stored winner must not contradict the printed returns (a
    two-decimal tie is allowed to carry either label, since rounding can
    mask a hairline margin).
    """
    fh, close = _open_for(source, "r")
    path = getattr(fh, "name", "<stream>")
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty file") from None
        if header != ["sector", "ewp_test_return_pct", "orp_test_return_pct", "winner"]:
            raise DataFormatError(f"{path}: line 1: not a sector-result header")
        results = []
        for row in reader:
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 4:
                raise DataFormatError(
                    f"{path}: line {reader.line_num}: expected 4 fields, got {len(row)}"
                )
            sector, ewp_text, orp_text, winner = row
            if winner not in WINNERS:
                raise DataFormatError(
                    f"{path}: line {reader.line_num}: unknown winner {winner!r}"
                )
            try:
                ewp = float(ewp_text) / 100.0
                orp = float(orp_text) / 100.0
            except ValueError as exc:
                raise DataFormatError(f"{path}: line {reader.line_num}: {exc}") from None
            result = SectorResult(sector, ewp, orp)
            if result.winner != winner and ewp != orp:
                raise DataFormatError(
                    f"{path}: line {reader.line_num}: winner {winner!r} contradicts returns"
                )
            result.winner = winner if ewp == orp else result.winner
            results.append(result)
        return results
    finally:
        if close:
            fh.close()
