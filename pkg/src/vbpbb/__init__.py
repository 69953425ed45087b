"""Bandpass periodic block bootstrap for periodically correlated daily series.

Isolate a periodic component with a Kolmogorov-Zurbenko Fourier transform
filter, bootstrap it with period-aligned blocks, and build percentile
confidence bands for its periodic mean.
"""

__version__ = "0.1.0"

from .series import RegularSeries, SeriesFormatError, center, export_csv, ingest_csv, phase_of, write_csv
from .kz import (
    ComplexSeries,
    FidelityWarning,
    FilterSpec,
    PCComponent,
    default_window,
    extract_component,
    kz_coefficients,
    kz_filter,
    kzft_filter,
    reconstruct_component,
)
from .spectral import Periodogram, periodogram, top_peaks
from .resampling import BootstrapSpec, gsbb_resample, pbb_resample, rng_stream
from .bands import (
    ComparisonReport,
    ComponentSpec,
    ConfidenceBand,
    PeriodicMeanProfile,
    bootstrap_band,
    compare_methods,
    envelope_ranges,
    periodic_mean,
    significance,
    sum_components_band,
)
from .synth import SyntheticSpec, Tone, generate

__all__ = [
    "RegularSeries",
    "SeriesFormatError",
    "center",
    "export_csv",
    "ingest_csv",
    "phase_of",
    "write_csv",
    "ComplexSeries",
    "FidelityWarning",
    "FilterSpec",
    "PCComponent",
    "default_window",
    "extract_component",
    "kz_coefficients",
    "kz_filter",
    "kzft_filter",
    "reconstruct_component",
    "Periodogram",
    "periodogram",
    "top_peaks",
    "BootstrapSpec",
    "gsbb_resample",
    "pbb_resample",
    "rng_stream",
    "ComparisonReport",
    "ComponentSpec",
    "ConfidenceBand",
    "PeriodicMeanProfile",
    "bootstrap_band",
    "compare_methods",
    "envelope_ranges",
    "periodic_mean",
    "significance",
    "sum_components_band",
    "SyntheticSpec",
    "Tone",
    "generate",
]
