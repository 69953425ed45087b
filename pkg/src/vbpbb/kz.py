"""Kolmogorov-Zurbenko low-pass and Fourier-transform bandpass filters.

Filtering is done by direct summation against the coefficient vector
(``np.convolve``), which is cheap enough for a few thousand daily points
and windows up to ~750.
"""

from __future__ import annotations

import datetime as dt
import io
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .series import ONE_DAY, RegularSeries

__all__ = [
    "EDGE_POLICIES",
    "REFERENCE_WINDOW_SPAN",
    "FidelityWarning",
    "FilterSpec",
    "ComplexSeries",
    "PCComponent",
    "kz_coefficients",
    "kz_filter",
    "kzft_filter",
    "reconstruct_component",
    "default_window",
    "window_multiple",
    "extract_component",
    "export_component_csv",
]

EDGE_POLICIES = ("renormalize", "trim")

# Windows are chosen as the smallest odd multiple of the period reaching two
# 364-day spans; this reproduces m = 731 (p=365), 729 (p=7, 13, 52) and 741 (p=20).
REFERENCE_WINDOW_SPAN = 728

_MAX_KERNEL = 2**31


class FidelityWarning(UserWarning):
    """m * v is not an integer, so the bandpass carries a small phase shift."""


@dataclass(frozen=True)
class FilterSpec:
    """Window ``m`` (odd), iterations ``k`` and centre frequency ``v``.

    ``v`` is ``None`` for the plain KZ low-pass filter.
    """

    m: int
    k: int = 1
    v: float | None = None

    def __post_init__(self):
        m, k = self.m, self.k
        if int(m) != m or int(k) != k:
            raise ValueError(f"m and k must be integers, got m={m}, k={k}")
        if m < 1 or k < 1:
            raise ValueError(f"m and k must be positive, got m={m}, k={k}")
        if m % 2 == 0:
            raise ValueError(f"window length m must be odd, got {m}")
        if k * (m - 1) + 1 > _MAX_KERNEL:
            raise OverflowError(f"kernel length k*(m-1)+1 too large for m={m}, k={k}")
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "k", int(k))
        if self.v is not None:
            v = float(self.v)
            if not 0.0 <= v <= 0.5:
                raise ValueError(f"frequency v must lie in [0, 0.5], got {v}")
            object.__setattr__(self, "v", v)

    @property
    def half_width(self) -> int:
        return self.k * (self.m - 1) // 2

    def integrality_error(self) -> float:
        """Distance of ``m * v`` from the nearest integer."""
        if self.v is None:
            return 0.0
        mv = self.m * self.v
        return abs(mv - round(mv))


@dataclass(frozen=True, eq=False)
class ComplexSeries:
    """Complex KZFT output aligned with its input series."""

    values: np.ndarray
    start_date: dt.date
    half_width: int
    valid: np.ndarray
    spec: FilterSpec | None = None

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def valid_range(self) -> tuple[int, int] | None:
        """1-based inclusive interval with full window support, or ``None``."""
        lo, hi = 1 + self.half_width, self.n - self.half_width
        return (lo, hi) if lo <= hi else None


@dataclass(frozen=True, eq=False)
class PCComponent(RegularSeries):
    """A real bandpass component with its frequency and fold period."""

    frequency: float = field(default=0.0, kw_only=True)
    period: int = field(default=1, kw_only=True)
    filter: FilterSpec | None = field(default=None, kw_only=True)

    def __post_init__(self):
        super().__post_init__()
        if int(self.period) != self.period or self.period < 1:
            raise ValueError(f"period must be a positive integer, got {self.period}")
        object.__setattr__(self, "period", int(self.period))

    @property
    def valid_range(self) -> tuple[int, int] | None:
        if self.valid is None:
            return (1, self.n)
        idx = np.flatnonzero(self.valid)
        if idx.size == 0:
            return None
        return int(idx[0]) + 1, int(idx[-1]) + 1


def _integer_coefficients(m, k):
    poly = [1] * m
    for _ in range(k - 1):
        nxt = [0] * (len(poly) + m - 1)
        for i, c in enumerate(poly):
            for j in range(m):
                nxt[i + j] += c
        poly = nxt
    return poly


@lru_cache(maxsize=64)
def _coefficients(m, k):
    denom = m**k
    if denom < 2**53:
        counts = np.ones(m, dtype=np.float64)
        ones = counts
        for _ in range(k - 1):
            counts = np.convolve(counts, ones)
        a = counts / float(denom)
    elif k * (m - 1) < 20000:
        a = np.array([float(Fraction(c, denom)) for c in _integer_coefficients(m, k)])
    else:
        # Exact integer counts are out of reach; iterate the normalized box.
        box = np.full(m, 1.0 / m)
        a = box
        for _ in range(k - 1):
            a = np.convolve(a, box)
        a = 0.5 * (a + a[::-1])
    a.setflags(write=False)
    return a


def kz_coefficients(m: int, k: int) -> np.ndarray:
    """Weights ``a_s`` for ``s = -k(m-1)/2 .. k(m-1)/2``.

    They are the coefficients of ``(1 + z + ... + z**(m-1))**k`` divided by
    ``m**k``, i.e. the k-fold convolution of a length-m box.  The returned
    array is read-only and cached.
    """
    spec = FilterSpec(m, k)
    return _coefficients(spec.m, spec.k)


def _check_policy(edge_policy):
    if edge_policy not in EDGE_POLICIES:
        raise ValueError(f"edge_policy must be one of {EDGE_POLICIES}, got {edge_policy!r}")


def _support_mask(n, h):
    valid = np.zeros(n, dtype=bool)
    if n >= 2 * h + 1:
        valid[h : n - h] = True
    return valid


def _apply(x, kernel, weights, h, edge_policy):
    """``out[t] = sum_s kernel[s+h] * x[t+s]`` with zero padding, then edges."""
    n = x.size
    pad = np.zeros(h, dtype=x.dtype)
    xp = np.concatenate([pad, x, pad])
    out = np.convolve(xp, kernel[::-1], mode="valid")
    if edge_policy == "renormalize":
        if h > 0:
            available = np.convolve(np.concatenate([np.zeros(h), np.ones(n), np.zeros(h)]), weights[::-1], mode="valid")
            edge = ~_support_mask(n, h)
            out[edge] = out[edge] / available[edge]
        valid = np.ones(n, dtype=bool)
    else:
        valid = _support_mask(n, h)
        out[~valid] = 0
    return out, valid


def _cos(v, h):
    return np.cos(2 * np.pi * v * np.arange(-h, h + 1))


def _sin(v, h):
    return np.sin(2 * np.pi * v * np.arange(-h, h + 1))


def kz_filter(series: RegularSeries, spec: FilterSpec, edge_policy: str = "renormalize") -> RegularSeries:
    """Iterated moving average ``KZ(m, k)`` of a real series.

    With ``edge_policy="renormalize"`` the weights that fall inside the record
    are rescaled to sum to one, so the output spans the full record.  With
    ``"trim"`` positions lacking full support are zeroed and flagged invalid.
    """
    _check_policy(edge_policy)
    a = kz_coefficients(spec.m, spec.k)
    out, valid = _apply(series.values, a, a, spec.half_width, edge_policy)
    if series.valid is not None:
        valid = valid & series.valid
    return series.with_values(out, valid=valid)


def kzft_filter(series: RegularSeries, spec: FilterSpec, edge_policy: str = "renormalize") -> ComplexSeries:
    """Kolmogorov-Zurbenko Fourier transform centred at ``spec.v``.

    Computes ``sum_s a_s * X(t+s) * exp(-2j*pi*v*s)``.  Renormalization at
    the edges rescales ``a_s`` only; the complex exponential is left alone.

    Warns with :class:`FidelityWarning` when ``m * v`` is not an integer.
    """
    _check_policy(edge_policy)
    if spec.v is None:
        raise ValueError("kzft_filter needs a frequency; FilterSpec.v is None")
    v = spec.v
    if spec.integrality_error() > 1e-9:
        warnings.warn(
            f"m*v = {spec.m * v:.6g} is not an integer (m={spec.m}, v={v:.6g}); "
            "the passband is slightly off-centre",
            FidelityWarning,
            stacklevel=2,
        )
    a = kz_coefficients(spec.m, spec.k)
    h = spec.half_width
    x = series.values
    # Real and imaginary parts are separate real convolutions; at v = 0 the
    # real part then follows exactly the same arithmetic as kz_filter.
    if v == 0.0:
        re, valid = _apply(x, a, a, h, edge_policy)
        im = np.zeros_like(re)
    else:
        re, valid = _apply(x, a * _cos(v, h), a, h, edge_policy)
        im, _ = _apply(x, -a * _sin(v, h), a, h, edge_policy)
    out = re + 1j * im
    if series.valid is not None:
        valid = valid & series.valid
    valid.setflags(write=False)
    out.setflags(write=False)
    return ComplexSeries(out, series.start_date, h, valid, spec)


def reconstruct_component(z: ComplexSeries, v: float, p: int) -> PCComponent:
    """Real component from KZFT output: ``2*Re(z)`` for ``v > 0``, ``Re(z)`` at ``v = 0``."""
    if z.spec is not None and z.spec.v is not None and not math.isclose(z.spec.v, v, rel_tol=1e-12, abs_tol=1e-15):
        raise ValueError(f"frequency {v} does not match the filter frequency {z.spec.v}")
    re = np.real(z.values)
    values = re if v == 0 else 2.0 * re
    return PCComponent(values, z.start_date, valid=z.valid, frequency=float(v), period=p, filter=z.spec)


def default_window(p: int, c: float) -> int:
    """Smallest odd integer ``m >= c * p``.

    With the usual multiples this gives 731 for ``p=365, c=2``, 741 for
    ``p=20, c=37`` and 729 for ``p=7, c=104``.  Note that ``m * (1/p)`` is
    then generally *not* an integer (731/365 ~ 2.003), which shifts the
    passband a little; :func:`kzft_filter` warns about it.
    """
    if p < 1 or c < 1:
        raise ValueError(f"period and multiple must be >= 1, got p={p}, c={c}")
    m = math.ceil(c * p - 1e-12)
    return m if m % 2 == 1 else m + 1


def window_multiple(p: int) -> int:
    """Default multiple of ``p`` used by :func:`default_window`."""
    if p < 1:
        raise ValueError(f"period must be >= 1, got {p}")
    return max(1, math.ceil(REFERENCE_WINDOW_SPAN / p))


def extract_component(
    series: RegularSeries,
    v: float,
    period: int,
    m: int | None = None,
    k: int = 1,
    edge_policy: str = "renormalize",
) -> PCComponent:
    """Filter at ``v`` and reconstruct the real component folded on ``period``."""
    if m is None:
        m = default_window(period, window_multiple(period))
    spec = FilterSpec(m, k, v)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FidelityWarning)
        z = kzft_filter(series, spec, edge_policy)
    if spec.integrality_error() > 1e-9:
        warnings.warn(
            f"m*v = {m * spec.v:.6g} is not an integer (m={m}, v={spec.v:.6g})",
            FidelityWarning,
            stacklevel=2,
        )
    return reconstruct_component(z, spec.v, period)


def export_component_csv(component: RegularSeries) -> str:
    """``t,date,value,valid`` table for a filtered component."""
    out = io.StringIO()
    out.write("t,date,value,valid\n")
    mask = component.mask
    day = component.start_date
    for i, v in enumerate(component.values):
        out.write(f"{i + 1},{day.isoformat()},{float(v):.17g},{int(mask[i])}\n")
        day += ONE_DAY
    return out.getvalue()
