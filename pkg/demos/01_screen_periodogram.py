"""
Screening a daily series for periodic components
================================================

A synthetic 16-year daily record with a half-year cycle and a weekly cycle
buried in noise.  The periodogram shows which frequencies deserve a closer
look.
"""

import numpy as np

from vbpbb import generate, periodogram, top_peaks
from vbpbb.synth import mimic_spec

# 5844 days, amplitude 3 at 2/365, amplitude 1 at 1/7, noise sd 5
syn = generate(mimic_spec(seed=0))
x = syn.series
print(f"n = {x.n}, first day {x.start_date}, variance {np.var(x.values):.2f}")

pg = periodogram(x)

# peaks closer than three Fourier bins are merged into the stronger one
for f, power in top_peaks(pg, 6, min_separation=3 / x.n):
    print(f"period {1 / f:8.2f} days   power {power:10.1f}")
