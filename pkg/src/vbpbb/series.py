"""Evenly sampled daily series, CSV I/O and phase arithmetic.

Time is indexed from 1: ``t = 1`` is ``start_date`` and ``t = n`` is the
last observation.  Arrays inside the containers are 0-based as usual, so
position ``t`` lives at ``values[t - 1]``.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import math
import os
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

__all__ = [
    "SeriesFormatError",
    "RegularSeries",
    "Phase",
    "phase_of",
    "center",
    "ingest_csv",
    "read_csv",
    "export_csv",
    "write_csv",
]

ONE_DAY = dt.timedelta(days=1)


class SeriesFormatError(ValueError):
    """Malformed series input.  ``row`` is the 1-based data row, if known."""

    def __init__(self, message, row=None, source=None):
        self.row = row
        self.source = source
        super().__init__(f"{source}: {message}" if source is not None else message)


def _frozen(a, dtype):
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RegularSeries:
    """A gap-free daily series.

    Parameters
    ----------
    values : array_like
        Finite observations, one per day.
    start_date : datetime.date
        Calendar date of ``t = 1``.
    valid : array_like of bool, optional
        Marks positions that carry full filter support.  ``None`` means every
        position is valid.  Invalid positions keep a finite placeholder value
        and are skipped by downstream statistics.
    """

    values: np.ndarray
    start_date: dt.date = dt.date(2001, 1, 1)
    valid: np.ndarray | None = field(default=None, kw_only=True)

    def __post_init__(self):
        values = _frozen(self.values, np.float64)
        if values.ndim != 1:
            raise ValueError("series values must be one-dimensional")
        if values.size < 1:
            raise ValueError("series must hold at least one observation")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0]) + 1
            raise ValueError(f"non-finite value at t={bad}")
        object.__setattr__(self, "values", values)
        if self.valid is not None:
            valid = _frozen(self.valid, bool)
            if valid.shape != values.shape:
                raise ValueError("valid mask must match values in length")
            object.__setattr__(self, "valid", None if valid.all() else valid)
        if not isinstance(self.start_date, dt.date):
            object.__setattr__(self, "start_date", dt.date.fromisoformat(str(self.start_date)))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.n

    @property
    def step(self) -> dt.timedelta:
        return ONE_DAY

    @property
    def mask(self) -> np.ndarray:
        """Boolean validity mask, materialized even when every point is valid."""
        if self.valid is None:
            return np.ones(self.n, dtype=bool)
        return self.valid

    @property
    def dates(self) -> list[dt.date]:
        return [self.start_date + i * ONE_DAY for i in range(self.n)]

    def date_at(self, t: int) -> dt.date:
        return self.start_date + (t - 1) * ONE_DAY

    def with_values(self, values, valid=None) -> RegularSeries:
        """Same calendar anchor, new values (and mask)."""
        return RegularSeries(values, self.start_date, valid=valid)

    def __eq__(self, other):
        if not isinstance(other, RegularSeries):
            return NotImplemented
        return (
            self.start_date == other.start_date
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.mask, other.mask)
        )

    __hash__ = None


class Phase(NamedTuple):
    period: int
    index: int


def phase_of(t: int, p: int) -> Phase:
    """Phase of 1-based time index ``t`` in a cycle of ``p`` steps."""
    if p < 1:
        raise ValueError(f"period must be a positive integer, got {p}")
    if t < 1:
        raise ValueError(f"time index is 1-based, got {t}")
    return Phase(p, (t - 1) % p)


def phases(n: int, p: int) -> np.ndarray:
    """Vectorized ``phase_of`` for ``t = 1..n``."""
    if p < 1:
        raise ValueError(f"period must be a positive integer, got {p}")
    return np.arange(n) % p


def center(series: RegularSeries) -> RegularSeries:
    """Subtract the grand mean of the valid observations."""
    mean = series.values[series.mask].mean()
    return series.with_values(series.values - mean, valid=series.valid)


def _parse_rows(lines, source):
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise SeriesFormatError("empty file", source=source) from None
    if [h.strip().lower() for h in header] != ["date", "value"]:
        raise SeriesFormatError(f"expected header 'date,value', got {','.join(header)!r}", row=0, source=source)

    start = None
    prev = None
    values = []
    for row_no, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise SeriesFormatError(f"expected 2 columns at row {row_no}, got {len(row)}", row_no, source)
        raw_date, raw_value = row[0].strip(), row[1].strip()
        try:
            date = dt.date.fromisoformat(raw_date)
        except ValueError:
            raise SeriesFormatError(f"bad date {raw_date!r} at row {row_no}", row_no, source) from None
        try:
            value = float(raw_value)
        except ValueError:
            raise SeriesFormatError(f"non-numeric value {raw_value!r} at row {row_no}", row_no, source) from None
        if not math.isfinite(value):
            raise SeriesFormatError(f"non-finite value {raw_value!r} at row {row_no}", row_no, source)
        if prev is not None:
            if date == prev:
                raise SeriesFormatError(f"duplicate date {raw_date} at row {row_no}", row_no, source)
            if date != prev + ONE_DAY:
                raise SeriesFormatError(f"date gap at row {row_no}", row_no, source)
        else:
            start = date
        prev = date
        values.append(value)

    if not values:
        raise SeriesFormatError("empty file", source=source)
    return RegularSeries(np.array(values), start)


def ingest_csv(source, format_config=None) -> RegularSeries:
    """Read a ``date,value`` table.

    ``source`` may be a path, an open text file, or the CSV text itself.
    ``format_config`` is accepted for forward compatibility and may carry
    ``{"encoding": ...}``.
    """
    encoding = (format_config or {}).get("encoding", "utf-8")
    if hasattr(source, "read"):
        return _parse_rows(io.StringIO(source.read()), getattr(source, "name", None))
    if isinstance(source, os.PathLike) or (isinstance(source, str) and source and "\n" not in source):
        with open(source, newline="", encoding=encoding) as fh:
            return _parse_rows(fh, os.fspath(source))
    return _parse_rows(io.StringIO(source, newline=""), None)


read_csv = ingest_csv


def export_csv(series: RegularSeries) -> str:
    """Serialize to ``date,value`` text with 17 significant digits."""
    out = io.StringIO()
    out.write("date,value\n")
    day = series.start_date
    for v in series.values:
        out.write(f"{day.isoformat()},{float(v):.17g}\n")
        day += ONE_DAY
    return out.getvalue()


def write_csv(series: RegularSeries, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(export_csv(series))
