import datetime as dt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vbpbb.series import (
    RegularSeries,
    SeriesFormatError,
    center,
    export_csv,
    ingest_csv,
    phase_of,
    phases,
    write_csv,
)

finite = st.floats(min_value=-1e12, max_value=1e12, allow_nan=False, allow_infinity=False)


def test_ingest_minimal():
    s = ingest_csv("date,value\n2001-01-01,1.0\n2001-01-02,2.0\n2001-01-03,3.0\n")
    assert s.n == 3
    assert s.start_date == dt.date(2001, 1, 1)
    np.testing.assert_array_equal(s.values, [1.0, 2.0, 3.0])


def test_ingest_crlf_and_file(tmp_path):
    path = tmp_path / "x.csv"
    path.write_bytes(b"date,value\r\n2004-02-28,1\r\n2004-02-29,2\r\n2004-03-01,3\r\n")
    s = ingest_csv(path)
    assert s.n == 3
    assert s.date_at(3) == dt.date(2004, 3, 1)


def test_full_record_length(tmp_path):
    # 2001-01-01 .. 2016-12-31 inclusive, leap days included
    start, end = dt.date(2001, 1, 1), dt.date(2016, 12, 31)
    n = (end - start).days + 1
    assert n == 5844
    write_csv(RegularSeries(np.linspace(5, 15, n), start), tmp_path / "pm.csv")
    s = ingest_csv(tmp_path / "pm.csv")
    assert s.n == 5844
    assert s.dates[-1] == end


@pytest.mark.parametrize(
    "body, row, fragment",
    [
        ("2001-01-01,1\n2001-01-03,2\n", 2, "date gap at row 2"),
        ("2001-01-01,1\n2001-01-01,2\n", 2, "duplicate date"),
        ("2001-01-01,1\n2001-01-02,abc\n", 2, "non-numeric"),
        ("2001-01-01,1\n2001-01-02,nan\n", 2, "non-finite"),
        ("2001-01-01,inf\n", 1, "non-finite"),
        ("2001-01-01,1\n2001-13-02,2\n", 2, "bad date"),
        ("2001-01-01,1,3\n", 1, "columns"),
    ],
)
def test_ingest_errors_name_the_row(body, row, fragment):
    with pytest.raises(SeriesFormatError) as info:
        ingest_csv("date,value\n" + body)
    assert info.value.row == row
    assert fragment in str(info.value)


def test_empty_inputs():
    with pytest.raises(SeriesFormatError, match="empty"):
        ingest_csv("date,value\n")
    with pytest.raises(SeriesFormatError, match="empty"):
        ingest_csv("")


def test_bad_header():
    with pytest.raises(SeriesFormatError, match="header"):
        ingest_csv("day,pm\n2001-01-01,1\n")


def test_series_rejects_nonfinite():
    with pytest.raises(ValueError):
        RegularSeries([1.0, np.nan])
    with pytest.raises(ValueError):
        RegularSeries([])


def test_series_is_immutable():
    s = RegularSeries([1.0, 2.0])
    with pytest.raises(ValueError):
        s.values[0] = 3.0


@pytest.mark.parametrize("t, p, expected", [(1, 7, 0), (8, 7, 0), (366, 365, 0), (3, 7, 2), (5, 1, 0)])
def test_phase_of(t, p, expected):
    assert phase_of(t, p).index == expected
    assert phase_of(t, p).period == p


def test_phase_of_rejects_zero_period():
    with pytest.raises(ValueError):
        phase_of(1, 0)


@given(st.integers(1, 10**6), st.integers(1, 10**4))
def test_phase_periodic(t, p):
    assert phase_of(t + p, p) == phase_of(t, p)


def test_phases_vectorized_matches_scalar():
    got = phases(20, 6)
    assert [int(g) for g in got] == [phase_of(t, 6).index for t in range(1, 21)]


def test_center_examples():
    np.testing.assert_array_equal(center(RegularSeries([4.0] * 5)).values, 0.0)
    np.testing.assert_array_equal(center(RegularSeries([1.0, 2.0, 3.0])).values, [-1.0, 0.0, 1.0])


@settings(max_examples=200)
@given(st.lists(finite, min_size=1, max_size=200))
def test_center_mean_zero_and_idempotent(vals):
    s = RegularSeries(vals)
    tol = 1e-10 * max(np.max(np.abs(vals)), 1e-300)
    c = center(s)
    assert abs(c.values.mean()) <= tol
    np.testing.assert_allclose(center(c).values, c.values, atol=tol, rtol=0)


@settings(max_examples=100)
@given(st.lists(finite, min_size=1, max_size=50), st.dates(dt.date(1900, 1, 1), dt.date(2100, 1, 1)))
def test_csv_round_trip_is_bit_exact(vals, start):
    s = RegularSeries(vals, start)
    back = ingest_csv(export_csv(s))
    assert back == s
    assert back.values.tobytes() == s.values.tobytes()
