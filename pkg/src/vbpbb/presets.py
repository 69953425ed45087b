"""Reference run matrix for the Manhattan daily PM2.5 record (2001-2016).

``PM25_COMPONENTS`` lists the six bandpass settings.  ``PM25_ENVELOPES``
holds the published envelope ranges of the resulting VBPBB bands (B=1000);
they document what a run on the real record should roughly give and are
used as regression inputs for the significance rule.
"""

from __future__ import annotations

from fractions import Fraction

from .bands import ComponentSpec

__all__ = ["PM25_COMPONENTS", "PM25_ENVELOPES", "PM25_MEDIAN_WIDTH_RATIOS", "PM25_N", "SUM_GSBB_PERIOD", "parse_frequency"]

PM25_N = 5844

# name -> (frequency, fold period, window m)
PM25_COMPONENTS = {
    "annual": ComponentSpec(1 / 365, 365, 731),
    "half-annual": ComponentSpec(2 / 365, 365, 731),
    "52-day": ComponentSpec(1 / 52, 52, 729),
    "20-day": ComponentSpec(1 / 20, 20, 741),
    "13-day": ComponentSpec(1 / 13, 13, 729),
    "weekly": ComponentSpec(1 / 7, 7, 729),
}

# name -> (upper_range, lower_range, significant)
PM25_ENVELOPES = {
    "annual": ((0.805, 4.093), (-2.666, -0.826), False),
    "half-annual": ((-1.280, 5.312), (-4.949, 1.351), True),
    "52-day": ((0.710, 3.798), (-3.679, -0.736), False),
    "20-day": ((0.238, 2.101), (-2.210, -0.303), False),
    "13-day": ((0.404, 2.066), (-2.039, -0.334), False),
    "weekly": ((-0.116, 2.007), (-2.011, 0.237), True),
}

# Median per-phase GSBB/VBPBB width ratios on the real record.
PM25_MEDIAN_WIDTH_RATIOS = {"annual": 7.92, "half-annual": 11.00, "weekly": 15.87}

# Single period used for the GSBB baseline of the half-year + weekly sum.
SUM_GSBB_PERIOD = 183


def parse_frequency(text) -> float:
    """``"2/365"``, ``"0.142857"`` or a number -> cycles per step."""
    if isinstance(text, (int, float)):
        return float(text)
    return float(Fraction(str(text).strip()))
