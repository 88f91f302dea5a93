"""Command-line driver for the sector pipeline.

Subcommands:

* ``stats``     per-ticker training stats -> stats.csv
* ``weights``   EWP, MRP, and ORP books -> weights.csv
* ``frontier``  the sampled cloud -> frontier.csv
* ``backtest``  buy-and-hold one book over the test window -> backtest_<column>.csv
* ``pipeline``  all of the above plus both backtests and the sector
  result; ``--all`` iterates a directory of universe configs and adds a
  cross-sector summary.csv
* ``summary``   combine sector_result.csv files -> summary.csv
* ``fetch``     download close histories -> canonical long CSV

Commands print one ``wrote <path>`` line per output file and exit 0
only when every requested output was written.
"""

from __future__ import annotations

import argparse
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from .backtest import MODES, backtest_from_panel, write_backtest_csv
from .errors import AnalyticsError, EmptySummaryError, EmptyUniverseError
from .frontier import (
    WEIGHT_SAMPLERS,
    FrontierCloud,
    export_frontier,
    min_risk_portfolio,
    optimum_risk_portfolio,
    sample_frontier,
)
from .market_data import (
    PricePanel,
    UniverseConfig,
    apply_missing_data_policy,
    fill_gaps,
    load_price_panel,
    read_universe_config,
    write_long_csv,
)
from .portfolio import RiskFreeAssumption, equal_weights
from .reports import (
    SectorResult,
    read_sector_results,
    read_weights_csv,
    write_sector_result,
    write_stats_csv,
    write_summary,
    write_weights_csv,
)
from .return_stats import AssetStats, CovarianceMatrix, asset_stats, covariance_matrix

__all__ = [
    "RunConfig",
    "cmd_stats",
    "cmd_weights",
    "cmd_frontier",
    "cmd_backtest",
    "cmd_pipeline",
    "cmd_summary",
    "main",
]


@dataclass
class RunConfig:
    """Everything one sector run needs, resolved and validated."""

    universe: UniverseConfig
    prices: Path
    out_dir: Path
    train_window: tuple[date, date]
    test_window: tuple[date, date]
    samples: int = 10_000
    seed: int = 0
    rf: RiskFreeAssumption = RiskFreeAssumption()
    workers: int = 1
    sampler: str = "uniform"
    threshold: float = 0.30
    capital: float = 100_000.0

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError(f"samples must be at least 1, got {self.samples}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        if self.capital <= 0.0:
            raise ValueError(f"capital must be positive, got {self.capital}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must be within [0, 1], got {self.threshold}")
        for name, (lo, hi) in (("train", self.train_window), ("test", self.test_window)):
            if lo > hi:
                raise ValueError(f"{name} window starts after it ends")
        if self.train_window[1] >= self.test_window[0]:
            raise ValueError("training window must end before the test window begins")


@dataclass
class _TrainArtifacts:
    panel: PricePanel
    excluded: list[tuple[str, float]]
    stats: list[AssetStats]
    cov: CovarianceMatrix
    cloud: FrontierCloud


def _train_panel(config: RunConfig) -> tuple[PricePanel, list[tuple[str, float]]]:
    raw = load_price_panel(config.prices, config.universe, config.train_window)
    return apply_missing_data_policy(raw, config.threshold)


def _train(config: RunConfig) -> _TrainArtifacts:
    panel, excluded = _train_panel(config)
    stats = asset_stats(panel)
    cov = covariance_matrix(panel)
    mu = {s.ticker: s.annual_return for s in stats}
    cloud = sample_frontier(
        mu, cov, config.samples, config.seed, config.rf, config.workers, config.sampler
    )
    return _TrainArtifacts(panel, excluded, stats, cov, cloud)


def _emit(path: Path) -> Path:
    print(f"wrote {path}")
    return path


def _write_exclusions(excluded: list[tuple[str, float]], out_dir: Path) -> None:
    if not excluded:
        return
    path = out_dir / "exclusions.log"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("ticker,missing_fraction\n")
        for ticker, fraction in excluded:
            fh.write(f"{ticker},{fraction:.4f}\n")
    _emit(path)


def cmd_stats(config: RunConfig) -> Path:
    """Write training-window per-ticker stats; returns the file path."""
    panel, excluded = _train_panel(config)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    path = config.out_dir / "stats.csv"
    write_stats_csv(asset_stats(panel), path)
    _write_exclusions(excluded, config.out_dir)
    return _emit(path)


def cmd_weights(config: RunConfig) -> Path:
    """Write the EWP, MRP, and ORP books for one sector."""
    art = _train(config)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    path = config.out_dir / "weights.csv"
    write_weights_csv(
        equal_weights(art.panel.tickers),
        min_risk_portfolio(art.cloud).weights,
        optimum_risk_portfolio(art.cloud).weights,
        path,
    )
    _write_exclusions(art.excluded, config.out_dir)
    return _emit(path)


def cmd_frontier(config: RunConfig) -> Path:
    """Write the sampled frontier cloud with MRP/ORP flags."""
    art = _train(config)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    path = config.out_dir / "frontier.csv"
    export_frontier(art.cloud, path)
    _write_exclusions(art.excluded, config.out_dir)
    return _emit(path)


def _test_panel(config: RunConfig, tickers: list[str]) -> PricePanel:
    raw = load_price_panel(config.prices, config.universe, config.test_window)
    return fill_gaps(raw.restrict(tickers))


def cmd_backtest(
    config: RunConfig,
    weights_file: str | Path,
    column: str = "orp",
    mode: str = "simplex",
    nominal: int | None = None,
) -> Path:
    """Backtest one book from a weights file over the test window."""
    books = read_weights_csv(weights_file)
    if column not in books:
        raise ValueError(
            f"{weights_file}: no {column!r} column, has: {', '.join(books)}"
        )
    book = books[column]
    report = backtest_from_panel(
        book, _test_panel(config, book.tickers), config.capital, mode, nominal
    )
    config.out_dir.mkdir(parents=True, exist_ok=True)
    path = config.out_dir / f"backtest_{column}.csv"
    write_backtest_csv(report, path)
    return _emit(path)


def cmd_pipeline(config: RunConfig) -> SectorResult:
    """Run one sector end to end and write all report files.

    Training: stats, covariance, frontier cloud, candidate books.
    Test: a fixed-amount-per-stock equal-weight backtest (one ticket of
    capital/n per configured ticker, so exclusions leave cash idle)
    against a full-capital ORP backtest.
    """
    art = _train(config)
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    write_stats_csv(art.stats, out / "stats.csv")
    _emit(out / "stats.csv")
    ewp = equal_weights(art.panel.tickers)
    orp = optimum_risk_portfolio(art.cloud)
    write_weights_csv(
        ewp, min_risk_portfolio(art.cloud).weights, orp.weights, out / "weights.csv"
    )
    _emit(out / "weights.csv")
    export_frontier(art.cloud, out / "frontier.csv")
    _emit(out / "frontier.csv")

    test_panel = _test_panel(config, art.panel.tickers)
    ewp_report = backtest_from_panel(
        ewp, test_panel, config.capital,
        mode="fixed-amount-per-stock", nominal_universe_size=len(config.universe.tickers),
    )
    orp_report = backtest_from_panel(orp.weights, test_panel, config.capital)
    write_backtest_csv(ewp_report, out / "backtest_ewp.csv")
    _emit(out / "backtest_ewp.csv")
    write_backtest_csv(orp_report, out / "backtest_orp.csv")
    _emit(out / "backtest_orp.csv")

    result = SectorResult(
        config.universe.sector, ewp_report.holding_return, orp_report.holding_return
    )
    write_sector_result(result, out / "sector_result.csv")
    _emit(out / "sector_result.csv")
    _write_exclusions(art.excluded, out)
    print(
        f"{result.sector}: EWP {result.ewp_test_return * 100.0:.2f}% vs "
        f"ORP {result.orp_test_return * 100.0:.2f}% -> {result.winner}"
    )
    return result


def cmd_summary(result_files: list[str | Path], out_dir: Path) -> Path:
    """Combine sector result files into summary.csv with win counts."""
    results: list[SectorResult] = []
    for path in result_files:
        results.extend(read_sector_results(path))
    if not results:
        raise EmptySummaryError("no sector results in the given files")
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "summary.csv"
    write_summary(results, path)
    return _emit(path)


def _slug(sector: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", sector).strip("_").lower() or "sector"


def _resolve_prices(prices_arg: str | None, universe: UniverseConfig, config_path: Path) -> Path:
    if prices_arg:
        p = Path(prices_arg)
        # a directory of price files is matched by config file stem
        return p / f"{config_path.stem}.csv" if p.is_dir() else p
    if universe.prices:
        return config_path.parent / universe.prices
    raise ValueError(
        f"no price source: pass --prices or set 'prices' in {config_path}"
    )


def _config_from_args(
    args: argparse.Namespace, config_path: Path, out_dir: Path | None = None
) -> RunConfig:
    universe = read_universe_config(config_path)
    return RunConfig(
        universe=universe,
        prices=_resolve_prices(args.prices, universe, config_path),
        out_dir=out_dir if out_dir is not None else Path(args.out),
        train_window=args.train or universe.train_window,
        test_window=args.test or universe.test_window,
        samples=getattr(args, "samples", 10_000),
        seed=getattr(args, "seed", 0),
        rf=RiskFreeAssumption(getattr(args, "rf", 0.01)),
        workers=getattr(args, "workers", 1),
        sampler=getattr(args, "sampler", "uniform"),
        threshold=args.threshold,
        capital=getattr(args, "capital", 100_000.0),
    )


def _window_arg(text: str) -> tuple[date, date]:
    try:
        a, b = text.split(":")
        window = date.fromisoformat(a), date.fromisoformat(b)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected START:END ISO dates, got {text!r}"
        ) from None
    if window[0] > window[1]:
        raise argparse.ArgumentTypeError(f"window starts after it ends: {text!r}")
    return window


def _date_arg(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an ISO date, got {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sectorfolio", description="Sector portfolio analytics pipeline."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--universe", required=True, help="universe INI file (directory with pipeline --all)")
    run.add_argument("--prices", help="price CSV, or a directory of <config-stem>.csv files")
    run.add_argument("--train", type=_window_arg, help="training window START:END, default from the universe file")
    run.add_argument("--test", type=_window_arg, help="test window START:END, default from the universe file")
    run.add_argument("--threshold", type=float, default=0.30, help="missing-data exclusion threshold (default 0.30)")
    run.add_argument("--out", default=".", help="output directory (default .)")

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--samples", type=int, default=10_000, help="cloud size (default 10000)")
    mc.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    mc.add_argument("--rf", type=float, default=0.01, help="annual risk-free rate (default 0.01)")
    mc.add_argument("--workers", type=int, default=1, help="sampling threads; any count gives identical results")
    mc.add_argument("--sampler", choices=sorted(WEIGHT_SAMPLERS), default="uniform")

    p = sub.add_parser("stats", parents=[run], help="per-ticker training stats")
    p.set_defaults(handler=_handle_stats)

    p = sub.add_parser("weights", parents=[run, mc], help="EWP/MRP/ORP books")
    p.set_defaults(handler=_handle_weights)

    p = sub.add_parser("frontier", parents=[run, mc], help="sampled frontier cloud")
    p.set_defaults(handler=_handle_frontier)

    p = sub.add_parser("backtest", parents=[run], help="backtest one book over the test window")
    p.add_argument("--weights", required=True, help="weights.csv from the weights subcommand")
    p.add_argument("--column", choices=("ewp", "mrp", "orp"), default="orp")
    p.add_argument("--mode", choices=MODES, default="simplex")
    p.add_argument("--nominal", type=int, help="fixed-amount-per-stock nominal universe size")
    p.add_argument("--capital", type=float, default=100_000.0)
    p.set_defaults(handler=_handle_backtest)

    p = sub.add_parser("pipeline", parents=[run, mc], help="full sector run")
    p.add_argument("--capital", type=float, default=100_000.0)
    p.add_argument("--all", action="store_true", help="--universe is a directory of universe INI files")
    p.add_argument("--jobs", type=int, default=1, help="sectors to run in parallel with --all")
    p.set_defaults(handler=_handle_pipeline)

    p = sub.add_parser("summary", help="combine sector results")
    p.add_argument("results", nargs="+", help="sector_result.csv files")
    p.add_argument("--out", default=".", help="output directory (default .)")
    p.set_defaults(handler=_handle_summary)

    p = sub.add_parser("fetch", help="download close histories")
    p.add_argument("--universe", help="take tickers and window from this universe file")
    p.add_argument("--tickers", nargs="+", help="explicit ticker list")
    p.add_argument("--start", type=_date_arg, help="first date (default: training window start)")
    p.add_argument("--end", type=_date_arg, help="last date (default: test window end)")
    p.add_argument("--out", required=True, help="output CSV path (long layout)")
    p.add_argument("--url-template", help="CSV endpoint with {symbol}/{start}/{end} fields")
    p.add_argument("--suffix", default="", help="symbol suffix, e.g. an exchange qualifier")
    p.add_argument("--timeout", type=float, default=30.0)
    p.set_defaults(handler=_handle_fetch)

    return parser


def _handle_stats(args: argparse.Namespace) -> int:
    cmd_stats(_config_from_args(args, Path(args.universe)))
    return 0


def _handle_weights(args: argparse.Namespace) -> int:
    cmd_weights(_config_from_args(args, Path(args.universe)))
    return 0


def _handle_frontier(args: argparse.Namespace) -> int:
    cmd_frontier(_config_from_args(args, Path(args.universe)))
    return 0


def _handle_backtest(args: argparse.Namespace) -> int:
    cmd_backtest(
        _config_from_args(args, Path(args.universe)),
        args.weights, args.column, args.mode, args.nominal,
    )
    return 0


def _handle_pipeline(args: argparse.Namespace) -> int:
    if not args.all:
        cmd_pipeline(_config_from_args(args, Path(args.universe)))
        return 0
    config_paths = sorted(Path(args.universe).glob("*.ini"))
    if not config_paths:
        raise EmptyUniverseError(f"no universe configs (*.ini) in {args.universe}")
    out = Path(args.out)

    def one(path: Path) -> SectorResult:
        universe = read_universe_config(path)
        return cmd_pipeline(_config_from_args(args, path, out / _slug(universe.sector)))

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(one, config_paths))
    else:
        results = [one(path) for path in config_paths]
    out.mkdir(parents=True, exist_ok=True)
    write_summary(results, out / "summary.csv")
    _emit(out / "summary.csv")
    return 0


def _handle_summary(args: argparse.Namespace) -> int:
    cmd_summary(args.results, Path(args.out))
    return 0


def _handle_fetch(args: argparse.Namespace) -> int:
    # imported here so offline use of every other command never touches it
    from .fetch import DEFAULT_URL_TEMPLATE, fetch_history

    if args.universe:
        universe = read_universe_config(args.universe)
        tickers = args.tickers or universe.tickers
        start = args.start or universe.train_window[0]
        end = args.end or universe.test_window[1]
    else:
        if not (args.tickers and args.start and args.end):
            raise ValueError("fetch needs --universe or all of --tickers/--start/--end")
        tickers, start, end = args.tickers, args.start, args.end
    series = fetch_history(
        tickers, start, end,
        url_template=args.url_template or DEFAULT_URL_TEMPLATE,
        suffix=args.suffix, timeout=args.timeout,
    )
    out = Path(args.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    write_long_csv(series, out)
    _emit(out)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (AnalyticsError, OSError, ValueError, ZeroDivisionError) as exc:
        print(f"sectorfolio {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
