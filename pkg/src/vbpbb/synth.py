"""Synthetic periodically correlated series with known components."""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .series import RegularSeries

__all__ = ["Tone", "SyntheticSpec", "SyntheticSeries", "generate", "mimic_spec"]


@dataclass(frozen=True)
class Tone:
    amplitude: float
    frequency: float
    phase: float = 0.0


@dataclass(frozen=True)
class SyntheticSpec:
    n: int
    components: tuple[Tone, ...] = ()
    noise_sd: float = 0.0
    trend_slope: float = 0.0
    seed: int = 0
    start_date: dt.date = dt.date(2001, 1, 1)

    def __post_init__(self):
        comps = tuple(c if isinstance(c, Tone) else Tone(**c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if not isinstance(self.start_date, dt.date):
            object.__setattr__(self, "start_date", dt.date.fromisoformat(str(self.start_date)))
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be non-negative")
        freqs = [c.frequency for c in comps]
        if any(not 0 < f <= 0.5 for f in freqs):
            raise ValueError("component frequencies must lie in (0, 0.5]")
        if len(set(freqs)) != len(freqs):
            raise ValueError("component frequencies must be distinct")

    @classmethod
    def from_dict(cls, d: dict) -> SyntheticSpec:
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> SyntheticSpec:
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["components"] = [asdict(c) for c in self.components]
        d["start_date"] = self.start_date.isoformat()
        return d


@dataclass(frozen=True, eq=False)
class SyntheticSeries:
    series: RegularSeries
    components: list[np.ndarray] = field(default_factory=list)
    noise: np.ndarray | None = None


def generate(spec: SyntheticSpec) -> SyntheticSeries:
    """``x(t) = sum_j A_j cos(2 pi v_j t + phi_j) + slope*t + eps(t)``, ``t = 1..n``.

    Noise is Gaussian from ``numpy.random.default_rng(spec.seed)``.  The
    noiseless components are returned separately as ground truth.
    """
    t = np.arange(1, spec.n + 1, dtype=np.float64)
    parts = [c.amplitude * np.cos(2 * np.pi * c.frequency * t + c.phase) for c in spec.components]
    x = np.zeros(spec.n)
    for part in parts:
        x = x + part
    if spec.trend_slope:
        x = x + spec.trend_slope * t
    noise = None
    if spec.noise_sd > 0:
        noise = np.random.default_rng(spec.seed).normal(0.0, spec.noise_sd, spec.n)
        x = x + noise
    return SyntheticSeries(RegularSeries(x, spec.start_date), parts, noise)


def mimic_spec(seed: int = 0, n: int = 5844) -> SyntheticSpec:
    """Daily-record stand-in: strong half-year and weekly cycles, no annual term.

    ``3 cos(2 pi t 2/365) + cos(2 pi t/7 + 0.5) + N(0, 5**2)`` over 16 years.
    """
    return SyntheticSpec(
        n=n,
        components=(Tone(3.0, 2 / 365), Tone(1.0, 1 / 7, 0.5)),
        noise_sd=5.0,
        seed=seed,
    )
