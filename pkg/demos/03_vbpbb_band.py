"""
Confidence band for one periodic component
==========================================

Filter, resample with the periodic block bootstrap, fold at the period and
take percentiles.  A component is called significant when 0 lies strictly
inside both the range of the upper bound and the range of the lower bound.
"""

import os
import warnings

from vbpbb import BootstrapSpec, FidelityWarning, bootstrap_band, generate
from vbpbb.presets import PM25_COMPONENTS
from vbpbb.svgplot import render_bands
from vbpbb.synth import mimic_spec

# the reference windows do not hold a whole number of cycles, which is expected
warnings.simplefilter("ignore", FidelityWarning)

out_dir = os.environ.get("VBPBB_OUTPUT_DIR", ".")
x = generate(mimic_spec(seed=2)).series

for name in ("half-annual", "weekly", "annual"):
    cs = PM25_COMPONENTS[name]
    comp = cs.extract(x)
    band = bootstrap_band(comp, BootstrapSpec.pbb(cs.period, 500, seed=7), workers=4)
    up, lo = band.upper_range, band.lower_range
    print(f"{name:12s} upper [{up[0]:6.2f}, {up[1]:6.2f}]  lower [{lo[0]:6.2f}, {lo[1]:6.2f}]  significant={band.significant}")

# the annual term is absent from this series; see the notes in the README on
# how often the rule still flags it
path = os.path.join(out_dir, "annual_band.svg")
with open(path, "w") as fh:
    fh.write(render_bands([band], title="annual component, PBB"))
print("wrote", path)
