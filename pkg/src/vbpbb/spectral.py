"""Raw periodogram for screening candidate periodic frequencies."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .series import RegularSeries

__all__ = ["Periodogram", "periodogram", "top_peaks", "export_periodogram_csv"]


@dataclass(frozen=True, eq=False)
class Periodogram:
    """One-sided periodogram at the Fourier frequencies ``j/n, j = 1..n//2``.

    ``floor`` is the power level attributable to rounding in the mean
    removal; peaks at or below it are not reported.
    """

    frequencies: np.ndarray
    powers: np.ndarray
    n: int
    floor: float = 0.0

    @property
    def periods(self) -> np.ndarray:
        return 1.0 / self.frequencies


def periodogram(series) -> Periodogram:
    """``I(j/n) = |sum_t x(t) exp(-2i*pi*j*t/n)|**2 / n`` of the mean-removed series.

    Parameters
    ----------
    series : RegularSeries or array_like
        Evenly sampled values, at least two.

    Returns
    -------
    Periodogram
        Includes the Nyquist bin ``j = n/2`` when ``n`` is even.
    """
    x = np.asarray(series.values if isinstance(series, RegularSeries) else series, dtype=np.float64)
    n = x.size
    if n < 2:
        raise ValueError(f"periodogram needs at least 2 observations, got {n}")
    xc = x - x.mean()
    # rfft matches direct summation up to a unimodular factor exp(-2i*pi*j/n)
    # from the 1-based time index, which the squared modulus discards.
    spec = np.fft.rfft(xc)[1 : n // 2 + 1]
    powers = (spec.real**2 + spec.imag**2) / n
    freqs = np.arange(1, n // 2 + 1) / n
    scale = np.max(np.abs(x))
    floor = n * (1e-12 * scale) ** 2
    return Periodogram(freqs, powers, n, floor)


def top_peaks(pgram: Periodogram, count: int = 5, min_separation: float = 0.0) -> list[tuple[float, float]]:
    """Strongest local maxima, strongest first.

    A bin is a local maximum when its power exceeds both neighbours (a missing
    neighbour at either end counts as lower).  Peaks within ``min_separation``
    cycles/step of a stronger accepted peak are dropped.  Equal powers go to
    the lower frequency.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    p = pgram.powers
    f = pgram.frequencies
    if p.size == 0:
        return []
    left = np.concatenate([[-np.inf], p[:-1]])
    right = np.concatenate([p[1:], [-np.inf]])
    cand = np.flatnonzero((p > left) & (p >= right) & (p > pgram.floor))
    # stable sort on -power keeps ascending frequency among ties
    order = cand[np.argsort(-p[cand], kind="stable")]
    peaks: list[tuple[float, float]] = []
    for i in order:
        if any(abs(f[i] - fq) <= min_separation for fq, _ in peaks):
            continue
        peaks.append((float(f[i]), float(p[i])))
        if len(peaks) == count:
            break
    return peaks


def export_periodogram_csv(pgram: Periodogram) -> str:
    out = io.StringIO()
    out.write("frequency,period,power\n")
    for fq, pw in zip(pgram.frequencies, pgram.powers):
        out.write(f"{fq:.17g},{1.0 / fq:.17g},{pw:.17g}\n")
    return out.getvalue()
