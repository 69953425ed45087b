"""
Reproducing the published envelope ranges on the real record
============================================================

Needs the Manhattan PM2.5 series as a date,value CSV (see cdc_to_series.py).
Each of the six reference components is filtered, resampled B = 1000 times
and summarised by the ranges of its upper and lower bounds.  The published
ranges came from unknown seeds, so agreement within about 0.5 ug/m3 is what
to expect; the significance verdicts should match exactly.

    python demos/reproduce_envelopes.py pm25_manhattan.csv [--seed 0] [--workers 8]
"""

import argparse
import warnings

from vbpbb import BootstrapSpec, FidelityWarning, bootstrap_band, ingest_csv
from vbpbb.presets import PM25_COMPONENTS, PM25_ENVELOPES

TOLERANCE = 0.5

ap = argparse.ArgumentParser()
ap.add_argument("csv")
ap.add_argument("--B", type=int, default=1000)
ap.add_argument("--seed", type=int, default=0)
ap.add_argument("--workers", type=int, default=4)
args = ap.parse_args()

warnings.simplefilter("ignore", FidelityWarning)
x = ingest_csv(args.csv)
print(f"{x.n} days from {x.start_date}")

all_ok = True
for name, cs in PM25_COMPONENTS.items():
    band = bootstrap_band(cs.extract(x), BootstrapSpec.pbb(cs.period, args.B, args.seed), workers=args.workers)
    up_ref, lo_ref, sig_ref = PM25_ENVELOPES[name]
    got = band.upper_range + band.lower_range
    ref = up_ref + lo_ref
    worst = max(abs(a - b) for a, b in zip(got, ref))
    ok = worst <= TOLERANCE and band.significant == sig_ref
    all_ok &= ok
    print(
        f"{name:12s} upper [{got[0]:6.3f}, {got[1]:6.3f}] lower [{got[2]:6.3f}, {got[3]:6.3f}]"
        f"  significant={band.significant!s:5s}  max deviation {worst:.3f}  {'ok' if ok else 'OFF'}"
    )
print("all within tolerance" if all_ok else "some rows differ from the published table")
