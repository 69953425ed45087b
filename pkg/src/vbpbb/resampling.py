"""Phase-aligned block bootstraps (PBB and GSBB) with reproducible streams.

Both samplers fill the output block by block.  For the block that starts
at target position ``t`` a source start ``s`` is drawn uniformly from

    S_t = {s : 1 <= s <= n - b + 1,  s = t (mod d)}

and ``b`` consecutive values are copied; the last block is truncated so
the output has length ``n``.  PBB is the special case ``b = d``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import RegularSeries

__all__ = [
    "METHODS",
    "BootstrapSpec",
    "rng_stream",
    "block_indices",
    "pbb_indices",
    "gsbb_indices",
    "pbb_resample",
    "gsbb_resample",
    "resample",
]

METHODS = ("PBB", "GSBB")


@dataclass(frozen=True)
class BootstrapSpec:
    """Resampling method, block length, period, replicate count and seed."""

    method: str
    block_length: int
    period: int
    replicates: int = 1000
    seed: int = 0

    def __post_init__(self):
        method = self.method.upper()
        if method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        object.__setattr__(self, "method", method)
        b, d = self.block_length, self.period
        if b < 1 or d < 1:
            raise ValueError(f"block length and period must be positive, got b={b}, d={d}")
        if method == "PBB" and b != d:
            raise ValueError(f"PBB needs block length equal to the period, got b={b}, d={d}")
        if b % d:
            raise ValueError(f"block length must be a multiple of the period, got b={b}, d={d}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @classmethod
    def pbb(cls, period, replicates=1000, seed=0):
        return cls("PBB", period, period, replicates, seed)

    @classmethod
    def gsbb(cls, period, replicates=1000, seed=0, block_length=None):
        return cls("GSBB", block_length or period, period, replicates, seed)


def rng_stream(seed: int, replicate_index: int, stream: int = 0) -> np.random.Generator:
    """Generator determined only by ``(seed, replicate_index, stream)``.

    The triple is fed to a :class:`numpy.random.SeedSequence` spawn key, so
    streams are statistically independent and do not depend on the order in
    which replicates are evaluated.  ``stream`` separates components that are
    resampled side by side within one replicate.
    """
    if replicate_index < 0 or stream < 0:
        raise ValueError("replicate_index and stream must be non-negative")
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(replicate_index), int(stream)))
    return np.random.Generator(np.random.PCG64(ss))


def block_indices(n: int, b: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """0-based source index for each of the ``n`` output positions."""
    if b > n:
        raise ValueError(f"block length {b} exceeds series length {n}")
    targets = np.arange(0, n, b)
    offsets = targets % d
    counts = (n - b - offsets) // d + 1
    if np.any(counts < 1):
        bad = int(targets[np.argmax(counts < 1)]) + 1
        raise ValueError(f"no admissible block start for target position {bad}")
    starts = offsets + rng.integers(0, counts) * d
    idx = (starts[:, None] + np.arange(b)).ravel()
    return idx[:n]


def pbb_indices(n, d, rng):
    return block_indices(n, d, d, rng)


def gsbb_indices(n, b, d, rng):
    return block_indices(n, b, d, rng)


def _take(series, idx):
    valid = None if series.valid is None else series.valid[idx]
    return RegularSeries(series.values[idx], series.start_date, valid=valid)


def pbb_resample(series: RegularSeries, d: int, stream: np.random.Generator) -> RegularSeries:
    """One periodic block bootstrap replicate with block length ``d``."""
    if series.n < d:
        raise ValueError(f"series length {series.n} is shorter than the period {d}")
    return _take(series, pbb_indices(series.n, d, stream))


def gsbb_resample(series: RegularSeries, b: int, d: int, stream: np.random.Generator) -> RegularSeries:
    """One seasonal block bootstrap replicate, blocks of ``b`` aligned mod ``d``."""
    if b % d:
        raise ValueError(f"block length must be a multiple of the period, got b={b}, d={d}")
    return _take(series, gsbb_indices(series.n, b, d, stream))


def resample(series: RegularSeries, spec: BootstrapSpec, stream: np.random.Generator) -> RegularSeries:
    if spec.method == "PBB":
        return pbb_resample(series, spec.period, stream)
    return gsbb_resample(series, spec.block_length, spec.period, stream)
