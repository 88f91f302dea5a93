"""Loading, alignment, gap filling, and the missing-data policy."""

import io
from datetime import date

import numpy as np
import pytest

from sectorfolio import (
    DataFormatError,
    EmptyPanelError,
    EmptyUniverseError,
    InsufficientDataError,
    MissingTickerError,
    PricePanel,
    PriceSeries,
    UniverseConfig,
    apply_missing_data_policy,
    fill_gaps,
    load_price_panel,
    read_universe_config,
    write_long_csv,
)

from helpers import random_panel, weekdays

D1, D2, D3 = date(2022, 1, 3), date(2022, 1, 4), date(2022, 1, 5)


def make_universe(tickers, **overrides):
    kwargs = dict(
        sector="Test",
        tickers=list(tickers),
        train_window=(date(2021, 1, 1), date(2021, 12, 31)),
        test_window=(date(2022, 1, 1), date(2022, 12, 31)),
    )
    kwargs.update(overrides)
    return UniverseConfig(**kwargs)


LONG_CSV = """date,ticker,close
2022-01-03,AAA,100
2022-01-04,AAA,110
2022-01-05,AAA,99
2022-01-03,BBB,50
2022-01-04,BBB,51
2022-01-05,BBB,52
"""

WIDE_CSV = """date,AAA,BBB
2022-01-03,100,50
2022-01-04,110,51
2022-01-05,99,52
"""


def test_long_layout_loads_exact_values():
    panel = load_price_panel(io.StringIO(LONG_CSV), make_universe(["AAA", "BBB"]))
    assert panel.tickers == ["AAA", "BBB"]
    assert panel.dates == [D1, D2, D3]
    assert panel.closes.tolist() == [[100.0, 110.0, 99.0], [50.0, 51.0, 52.0]]
    assert panel.is_complete


def test_wide_layout_matches_long_layout():
    universe = make_universe(["AAA", "BBB"])
    from_long = load_price_panel(io.StringIO(LONG_CSV), universe)
    from_wide = load_price_panel(io.StringIO(WIDE_CSV), universe)
    assert from_wide.tickers == from_long.tickers
    assert from_wide.dates == from_long.dates
    assert np.array_equal(from_wide.closes, from_long.closes)


def test_panel_follows_universe_ticker_order():
    panel = load_price_panel(io.StringIO(LONG_CSV), make_universe(["BBB", "AAA"]))
    assert panel.tickers == ["BBB", "AAA"]
    assert panel.closes[0, 0] == 50.0


def test_configured_ticker_absent_from_file():
    with pytest.raises(MissingTickerError) as exc:
        load_price_panel(io.StringIO(LONG_CSV), make_universe(["AAA", "CCC"]))
    assert "CCC" in str(exc.value)
    assert exc.value.tickers == ["CCC"]


def test_malformed_close_names_the_line():
    bad = "date,ticker,close\n2022-01-03,AAA,100\n2022-01-04,AAA,oops\n"
    with pytest.raises(DataFormatError, match="line 3"):
        load_price_panel(io.StringIO(bad), make_universe(["AAA"]))


def test_nonpositive_close_rejected():
    bad = "date,ticker,close\n2022-01-03,AAA,-5\n"
    with pytest.raises(DataFormatError, match="line 2"):
        load_price_panel(io.StringIO(bad), make_universe(["AAA"]))


def test_duplicate_observation_rejected():
    bad = "date,ticker,close\n2022-01-03,AAA,100\n2022-01-03,AAA,101\n"
    with pytest.raises(DataFormatError, match="duplicate"):
        load_price_panel(io.StringIO(bad), make_universe(["AAA"]))


def test_empty_file_rejected():
    with pytest.raises(DataFormatError, match="empty"):
        load_price_panel(io.StringIO(""), make_universe(["AAA"]))


def test_window_restricts_dates():
    panel = load_price_panel(
        io.StringIO(LONG_CSV), make_universe(["AAA"]), window=(D2, D3)
    )
    assert panel.dates == [D2, D3]
    assert panel.closes.tolist() == [[110.0, 99.0]]


def test_window_with_no_observations():
    with pytest.raises(EmptyPanelError):
        load_price_panel(
            io.StringIO(LONG_CSV),
            make_universe(["AAA"]),
            window=(date(2023, 1, 1), date(2023, 12, 31)),
        )


def test_union_dates_leave_nan_gaps():
    csv_text = (
        "date,ticker,close\n"
        "2022-01-03,AAA,100\n2022-01-04,AAA,110\n2022-01-05,AAA,99\n"
        "2022-01-03,BBB,50\n2022-01-05,BBB,52\n"
    )
    panel = load_price_panel(io.StringIO(csv_text), make_universe(["AAA", "BBB"]))
    assert panel.dates == [D1, D2, D3]
    assert np.isnan(panel.closes[1, 1])
    assert not panel.is_complete
    assert panel.missing_fraction("BBB") == pytest.approx(1.0 / 3.0)
    assert panel.missing_fraction("AAA") == 0.0


def test_series_drops_gaps():
    closes = np.array([[100.0, np.nan, 99.0]])
    panel = PricePanel(["AAA"], [D1, D2, D3], closes)
    series = panel.series("AAA")
    assert series.dates == [D1, D3]
    assert series.closes.tolist() == [100.0, 99.0]


def test_fill_gaps_carries_forward_and_backfills_head():
    closes = np.array(
        [
            [10.0, np.nan, np.nan, 12.0],
            [np.nan, 5.0, np.nan, 6.0],
        ]
    )
    dates = weekdays(date(2022, 1, 3), 4)
    filled = fill_gaps(PricePanel(["AAA", "BBB"], dates, closes))
    assert filled.closes[0].tolist() == [10.0, 10.0, 10.0, 12.0]
    assert filled.closes[1].tolist() == [5.0, 5.0, 5.0, 6.0]


def test_fill_gaps_trailing_gap_carries_last_price():
    closes = np.array([[10.0, 11.0, np.nan]])
    filled = fill_gaps(PricePanel(["AAA"], [D1, D2, D3], closes))
    assert filled.closes[0].tolist() == [10.0, 11.0, 11.0]


def test_fill_gaps_never_invents_price_levels():
    rng = np.random.default_rng(42)
    for _ in range(100):
        n_dates = int(rng.integers(3, 25))
        dates = weekdays(date(2021, 6, 1), n_dates)
        closes = rng.uniform(10, 500, size=(3, n_dates))
        mask = rng.random((3, n_dates)) < 0.35
        for i in range(3):
            if mask[i].all():
                mask[i, int(rng.integers(n_dates))] = False
        closes[mask] = np.nan
        panel = PricePanel(["A", "B", "C"], dates, closes)
        filled = fill_gaps(panel)
        assert filled.is_complete
        for i in range(3):
            observed = set(closes[i][~np.isnan(closes[i])])
            assert set(filled.closes[i]) <= observed


def test_fill_gaps_needs_at_least_one_observation():
    closes = np.array([[10.0, 11.0, 12.0], [np.nan, np.nan, np.nan]])
    with pytest.raises(InsufficientDataError, match="BBB"):
        fill_gaps(PricePanel(["AAA", "BBB"], [D1, D2, D3], closes))


def test_policy_excludes_strictly_above_threshold():
    dates = weekdays(date(2021, 1, 4), 10)
    closes = np.full((3, 10), 100.0)
    closes[1, :3] = np.nan  # 30% missing: retained at the default threshold
    closes[2, :4] = np.nan  # 40% missing: excluded
    panel = PricePanel(["FULL", "EDGE", "SPARSE"], dates, closes)
    filled, excluded = apply_missing_data_policy(panel)
    assert filled.tickers == ["FULL", "EDGE"]
    assert filled.is_complete
    assert excluded == [("SPARSE", pytest.approx(0.4))]


def test_policy_all_excluded():
    closes = np.array([[np.nan, np.nan, 3.0]])
    panel = PricePanel(["AAA"], [D1, D2, D3], closes)
    with pytest.raises(EmptyUniverseError):
        apply_missing_data_policy(panel, threshold=0.5)


def test_policy_threshold_validation():
    panel = PricePanel(["AAA"], [D1], np.array([[5.0]]))
    with pytest.raises(ValueError):
        apply_missing_data_policy(panel, threshold=1.5)
    with pytest.raises(ValueError):
        apply_missing_data_policy(panel, threshold=-0.1)


def test_policy_exclusion_monotone_in_threshold():
    rng = np.random.default_rng(7)
    tickers = [f"T{i}" for i in range(5)]
    for _ in range(200):
        n_dates = int(rng.integers(4, 30))
        dates = weekdays(date(2021, 1, 4), n_dates)
        closes = rng.uniform(10, 100, size=(5, n_dates))
        mask = rng.random((5, n_dates)) < rng.uniform(0.0, 0.6)
        mask[0] = False  # keep one ticker complete so the policy never empties
        for i in range(1, 5):
            if mask[i].all():
                mask[i, int(rng.integers(n_dates))] = False
        closes[mask] = np.nan
        panel = PricePanel(tickers, dates, closes)
        t_low, t_high = sorted(rng.uniform(0.0, 1.0, size=2))
        _, excluded_low = apply_missing_data_policy(panel, t_low)
        _, excluded_high = apply_missing_data_policy(panel, t_high)
        assert {t for t, _ in excluded_high} <= {t for t, _ in excluded_low}


def test_restrict_preserves_requested_order():
    panel = load_price_panel(io.StringIO(LONG_CSV), make_universe(["AAA", "BBB"]))
    sub = panel.restrict(["BBB"])
    assert sub.tickers == ["BBB"]
    assert sub.closes.tolist() == [[50.0, 51.0, 52.0]]
    with pytest.raises(MissingTickerError):
        panel.restrict(["AAA", "ZZZ"])
    with pytest.raises(EmptyUniverseError):
        panel.restrict([])


def test_price_series_validation():
    with pytest.raises(ValueError):
        PriceSeries("AAA", [D2, D1], np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        PriceSeries("AAA", [D1, D2], np.array([1.0, -2.0]))
    with pytest.raises(ValueError):
        PriceSeries("AAA", [D1], np.array([1.0, 2.0]))


def test_panel_validation():
    with pytest.raises(ValueError):
        PricePanel(["AAA", "AAA"], [D1], np.ones((2, 1)))
    with pytest.raises(EmptyPanelError):
        PricePanel([], [D1], np.ones((0, 1)))
    with pytest.raises(ValueError):
        PricePanel(["AAA"], [D1, D2], np.ones((1, 3)))


def test_universe_config_roundtrip(tmp_path):
    text = (
        "[universe]\n"
        "sector = Public Sector Banks\n"
        "tickers = SBIN, BANKBARODA CANBK\n"
        "train = 2017-01-01:2021-12-31\n"
        "test = 2022-01-01:2022-12-31\n"
        "prices = psu.csv  ; resolved next to this file\n"
        "\n"
        "[contributions]\n"
        "SBIN = 19.51\n"
    )
    path = tmp_path / "psu.ini"
    path.write_text(text, encoding="utf-8")
    cfg = read_universe_config(path)
    assert cfg.sector == "Public Sector Banks"
    assert cfg.tickers == ["SBIN", "BANKBARODA", "CANBK"]
    assert cfg.train_window == (date(2017, 1, 1), date(2021, 12, 31))
    assert cfg.test_window == (date(2022, 1, 1), date(2022, 12, 31))
    assert cfg.prices == "psu.csv"
    assert cfg.contributions == {"SBIN": 19.51}


def test_universe_config_missing_key(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[universe]\nsector = X\ntickers = AAA\n", encoding="utf-8")
    with pytest.raises(DataFormatError, match="train"):
        read_universe_config(path)


def test_universe_config_bad_window(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text(
        "[universe]\nsector = X\ntickers = AAA\n"
        "train = 2021-01-01/2021-12-31\ntest = 2022-01-01:2022-12-31\n",
        encoding="utf-8",
    )
    with pytest.raises(DataFormatError, match="train"):
        read_universe_config(path)


def test_universe_config_overlapping_windows(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text(
        "[universe]\nsector = X\ntickers = AAA\n"
        "train = 2021-01-01:2022-06-30\ntest = 2022-01-01:2022-12-31\n",
        encoding="utf-8",
    )
    with pytest.raises(DataFormatError, match="before the test window"):
        read_universe_config(path)


def test_universe_rejects_inverted_window():
    with pytest.raises(ValueError, match="starts after"):
        make_universe(["AAA"], train_window=(date(2021, 12, 31), date(2021, 1, 1)))


def test_write_long_csv_roundtrip(tmp_path):
    panel = random_panel(["AAA", "BBB", "CCC"], 15, seed=3)
    path = tmp_path / "prices.csv"
    write_long_csv(panel, path)
    again = load_price_panel(path, make_universe(["AAA", "BBB", "CCC"]))
    assert again.dates == panel.dates
    assert np.allclose(again.closes, panel.closes, rtol=1e-11, atol=0.0)


def test_write_long_csv_skips_gaps(tmp_path):
    closes = np.array([[100.0, np.nan, 99.0]])
    panel = PricePanel(["AAA"], [D1, D2, D3], closes)
    path = tmp_path / "prices.csv"
    write_long_csv(panel, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "date,ticker,close"
    assert len(lines) == 3  # header + two observed rows
