"""
Band for a sum of cycles
========================

The half-year and weekly components are resampled independently, each with
its own period, added, and folded at the least common multiple 2555.  The
unfolded band can be laid back over the calendar.
"""

import os
import warnings

import numpy as np

from vbpbb import BootstrapSpec, FidelityWarning, generate, sum_components_band
from vbpbb.bands import export_unfolded_csv
from vbpbb.presets import PM25_COMPONENTS
from vbpbb.synth import mimic_spec

# the reference windows do not hold a whole number of cycles, which is expected
warnings.simplefilter("ignore", FidelityWarning)

out_dir = os.environ.get("VBPBB_OUTPUT_DIR", ".")
x = generate(mimic_spec(seed=4)).series

specs = [PM25_COMPONENTS["half-annual"], PM25_COMPONENTS["weekly"]]
comps = [cs.extract(x) for cs in specs]
boots = [BootstrapSpec.pbb(cs.period, 200, seed=5) for cs in specs]

band = sum_components_band(comps, boots, workers=4)
print("fold period", band.period)
print(f"median width {np.median(band.width):.3f}")

path = os.path.join(out_dir, "sum_band_unfolded.csv")
with open(path, "w") as fh:
    fh.write(export_unfolded_csv(band, x.n, x.start_date))
print("wrote", path)
