import datetime as dt
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vbpbb.bands import (
    ComponentSpec,
    ConfidenceBand,
    band_from_replicates,
    bootstrap_band,
    bootstrap_replicates,
    compare_methods,
    envelope_ranges,
    export_unfolded_csv,
    is_significant,
    percentile,
    periodic_mean,
    significance,
    sum_components_band,
    width_ratios,
)
from vbpbb.kz import PCComponent, extract_component
from vbpbb.presets import PM25_ENVELOPES
from vbpbb.resampling import BootstrapSpec, block_indices, rng_stream
from vbpbb.series import RegularSeries, center
from vbpbb.synth import SyntheticSpec, Tone, generate

from oracles import naive_band

pytestmark = pytest.mark.filterwarnings("ignore::vbpbb.kz.FidelityWarning")


def const_band(u, lo, p=5):
    return ConfidenceBand("PBB", p, 0.05, 1000, 0, np.full(p, lo), np.full(p, u), np.zeros(p))


# --- periodic mean ----------------------------------------------------------


def test_periodic_mean_examples():
    np.testing.assert_array_equal(periodic_mean(RegularSeries(np.full(30, 2.5)), 7).means, 2.5)
    x = np.random.default_rng(0).normal(size=31)
    assert periodic_mean(RegularSeries(x), 1).means[0] == pytest.approx(x.mean(), rel=1e-14)
    prof = periodic_mean(RegularSeries(np.arange(1.0, 15.0)), 7)
    np.testing.assert_array_equal(prof.means, [4.5, 5.5, 6.5, 7.5, 8.5, 9.5, 10.5])
    np.testing.assert_array_equal(prof.counts, 2)


def test_periodic_mean_skips_invalid_positions():
    valid = np.array([False, True, True, True, True, False])
    prof = periodic_mean(RegularSeries([100.0, 1.0, 2.0, 3.0, 4.0, 100.0], valid=valid), 2)
    np.testing.assert_array_equal(prof.means, [3.0, 2.0])
    assert prof.counts.sum() == 4


def test_periodic_mean_empty_phase():
    with pytest.raises(ValueError, match="phase"):
        periodic_mean(RegularSeries([1.0, 2.0, 3.0]), 4)
    with pytest.raises(ValueError):
        periodic_mean(RegularSeries([1.0, 2.0], valid=[True, False]), 2)


def test_counts_balanced():
    prof = periodic_mean(RegularSeries(np.zeros(5844)), 365)
    assert prof.counts.sum() == 5844
    assert prof.counts.max() - prof.counts.min() <= 1


# --- percentiles ------------------------------------------------------------


def test_percentile_ranks_for_b1000():
    # order statistics equal to their 1-based rank
    srt = np.arange(1.0, 1001.0)[:, None]
    assert percentile(srt, 0.025)[0] == pytest.approx(25.975, abs=1e-9)
    assert percentile(srt, 0.975)[0] == pytest.approx(975.025, abs=1e-9)


def test_too_few_replicates_rejected():
    s = RegularSeries(np.zeros(50))
    with pytest.raises(ValueError, match="too few"):
        bootstrap_band(s, BootstrapSpec.pbb(5, 39, 0))
    bootstrap_band(s, BootstrapSpec.pbb(5, 40, 0))


# --- bootstrap bands ----------------------------------------------------------


def test_noiseless_half_year_tone_band():
    amp = 4.0
    s = generate(SyntheticSpec(5844, (Tone(amp, 2 / 365),))).series
    # trimmed edges: renormalized partial windows distort a slow tone by a few percent
    comp = extract_component(s, 2 / 365, 365, 731, edge_policy="trim")
    band = bootstrap_band(comp, BootstrapSpec.pbb(365, 200, 3), 365)
    truth = amp * np.cos(2 * np.pi * 2 * np.arange(1, 366) / 365)
    assert np.max(band.width) <= 0.02 * amp
    assert np.max(np.abs(band.point_estimate - truth)) <= 0.02 * amp
    assert band.significant


def test_band_is_deterministic_and_thread_independent():
    x = generate(SyntheticSpec(800, (Tone(1.0, 1 / 7),), noise_sd=1.0, seed=4)).series
    comp = extract_component(x, 1 / 7, 7, 63)
    spec = BootstrapSpec.pbb(7, 300, 12345)
    a = bootstrap_band(comp, spec)
    b = bootstrap_band(comp, spec)
    c = bootstrap_band(comp, spec, workers=8)
    assert a.to_json() == b.to_json() == c.to_json()


def test_envelope_ranges():
    assert envelope_ranges(const_band(2.0, -1.0)) == ((2.0, 2.0), (-1.0, -1.0))
    lower = [-3.0, -0.5, 0.2, -1.0]
    upper = [1.0, 0.5, 2.5, -0.1]
    band = ConfidenceBand("PBB", 4, 0.05, 100, 0, lower, upper, np.zeros(4))
    up, lo = envelope_ranges(band)
    assert up == (min(upper), max(upper)) and lo == (min(lower), max(lower))
    assert band.upper_range == up and band.lower_range == lo


@pytest.mark.parametrize("name", sorted(PM25_ENVELOPES))
def test_significance_rule_on_reference_envelopes(name):
    up, lo, expected = PM25_ENVELOPES[name]
    assert is_significant(up, lo) is expected


def test_all_zero_band_not_significant():
    band = const_band(0.0, 0.0)
    assert significance(band) is False
    assert band.significant is False


def test_boundary_is_not_inside():
    band = ConfidenceBand("PBB", 2, 0.05, 100, 0, [-1.0, 0.0], [0.0, 1.0], [0.0, 0.0])
    assert not significance(band)


def test_band_json_schema():
    band = ConfidenceBand("GSBB", 3, 0.05, 50, 9, [-1, -2, -3], [1, 2, 3], [0, 0.5, 0])
    d = json.loads(band.to_json())
    assert set(d) == {"method", "period", "alpha", "B", "seed", "phases", "upper_range", "lower_range", "significant"}
    assert d["phases"][1] == {"phase": 1, "lower": -2.0, "point": 0.5, "upper": 2.0}
    assert d["upper_range"] == [1.0, 3.0] and d["lower_range"] == [-3.0, -1.0]
    back = ConfidenceBand.from_dict(d)
    assert back.to_json() == band.to_json()


def test_band_rejects_crossed_bounds():
    with pytest.raises(ValueError):
        ConfidenceBand("PBB", 2, 0.05, 100, 0, [1.0, 0.0], [0.0, 1.0], [0.0, 0.0])


# --- brute-force equivalence ------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 5).flatmap(lambda p: st.tuples(st.just(p), st.integers(p, 20))),
    st.integers(40, 50),
    st.sampled_from(["PBB", "GSBB"]),
    st.integers(0, 2**64 - 1),
    st.integers(0, 2**32 - 1),
)
def test_band_matches_naive_reimplementation(pn, B, method, seed, data_seed):
    p, n = pn
    x = np.random.default_rng(data_seed).normal(size=n)
    spec = BootstrapSpec(method, p, p, B, seed)
    band = bootstrap_band(RegularSeries(x), spec, p)
    reps = [block_indices(n, p, p, rng_stream(seed, i)).tolist() for i in range(B)]
    lower, upper, point = naive_band(x.tolist(), None, p, reps, 0.05)
    assert band.lower.tolist() == lower
    assert band.upper.tolist() == upper
    assert band.point_estimate.tolist() == point


def test_naive_equivalence_with_trimmed_component():
    x = np.random.default_rng(1).normal(size=20)
    valid = np.r_[[False] * 2, [True] * 16, [False] * 2]
    s = RegularSeries(x, valid=valid)
    spec = BootstrapSpec.pbb(4, 45, 77)
    band = bootstrap_band(s, spec, 4)
    reps = [block_indices(20, 4, 4, rng_stream(77, i)).tolist() for i in range(45)]
    lower, upper, point = naive_band(x.tolist(), valid.tolist(), 4, reps, 0.05)
    assert (band.lower.tolist(), band.upper.tolist(), band.point_estimate.tolist()) == (lower, upper, point)


# --- properties -------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(st.floats(0.01, 100), st.integers(0, 2**32 - 1))
def test_scale_equivariance(c, seed):
    x = np.random.default_rng(seed).normal(size=140)
    s = RegularSeries(x)
    spec = BootstrapSpec.pbb(7, 60, seed)
    a = bootstrap_band(s, spec)
    b = bootstrap_band(RegularSeries(c * x), spec)
    np.testing.assert_allclose(b.lower, c * a.lower, rtol=1e-12)
    np.testing.assert_allclose(b.upper, c * a.upper, rtol=1e-12)
    np.testing.assert_allclose(b.point_estimate, c * a.point_estimate, rtol=1e-12)
    assert a.significant == b.significant


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 3, 7]))
def test_bands_ordered_and_nested(seed, p):
    x = np.random.default_rng(seed).normal(size=70)
    s = RegularSeries(x)
    stats = bootstrap_replicates(s, BootstrapSpec.gsbb(p, 200, seed), p)
    point = periodic_mean(s, p).means
    b95 = band_from_replicates(stats, point, 0.05)
    b90 = band_from_replicates(stats, point, 0.10)
    assert np.all(b95.lower <= b95.upper)
    assert np.all(b95.lower <= b90.lower) and np.all(b90.upper <= b95.upper)


@settings(max_examples=100)
@given(st.lists(st.floats(-5, 5), min_size=6, max_size=6), st.lists(st.floats(-5, 5), min_size=6, max_size=6))
def test_verdict_depends_only_on_envelopes(a, b):
    lo1, up1 = np.minimum(a, b), np.maximum(a, b)
    # same envelope, different interior arrangement
    lo2, up2 = lo1[::-1].copy(), up1[::-1].copy()
    b1 = ConfidenceBand("PBB", 6, 0.05, 100, 0, lo1, up1, np.zeros(6))
    b2 = ConfidenceBand("PBB", 6, 0.05, 100, 0, lo2, up2, np.zeros(6))
    assert envelope_ranges(b1) == envelope_ranges(b2)
    assert significance(b1) == significance(b2)


# --- sums -------------------------------------------------------------------


def test_sum_of_one_equals_single_band():
    s = generate(SyntheticSpec(1000, (Tone(1.0, 1 / 7),), noise_sd=1.0, seed=2)).series
    comp = extract_component(s, 1 / 7, 7, 63)
    spec = BootstrapSpec.pbb(7, 100, 5)
    single = bootstrap_band(comp, spec)
    summed = sum_components_band([comp], [spec], 5, 7)
    np.testing.assert_array_equal(single.lower, summed.lower)
    np.testing.assert_array_equal(single.upper, summed.upper)
    np.testing.assert_array_equal(single.point_estimate, summed.point_estimate)


def test_sum_of_two_noiseless_tones():
    # eight full folds of valid data once both half-windows are trimmed away
    n = 8 * 2555 + 730
    s = generate(SyntheticSpec(n, (Tone(3.0, 2 / 365), Tone(1.0, 1 / 7)))).series
    comps = [
        extract_component(s, 2 / 365, 365, 731, edge_policy="trim"),
        extract_component(s, 1 / 7, 7, 729, edge_policy="trim"),
    ]
    specs = [BootstrapSpec.pbb(365, 100, 1), BootstrapSpec.pbb(7, 100, 1)]
    band = sum_components_band(comps, specs)
    assert band.period == 2555
    t = np.arange(1, 2556)
    truth = 3 * np.cos(2 * np.pi * 2 * t / 365) + np.cos(2 * np.pi * t / 7)
    peak = np.max(np.abs(truth))
    assert np.max(np.abs(band.point_estimate - truth)) <= 0.02 * peak
    assert np.max(band.width) <= 0.02 * peak


def test_sum_validation():
    a = PCComponent(np.zeros(50), period=5, frequency=0.2)
    b = PCComponent(np.zeros(40), period=5, frequency=0.2)
    with pytest.raises(ValueError):
        sum_components_band([a, b], [BootstrapSpec.pbb(5, 50)] * 2)
    with pytest.raises(ValueError):
        sum_components_band([a, a], [BootstrapSpec.pbb(5, 50), BootstrapSpec.pbb(5, 60)])
    with pytest.raises(ValueError):
        sum_components_band([a], [])


# --- comparison -------------------------------------------------------------


def test_self_comparison_ratio_is_one():
    s = generate(SyntheticSpec(700, (Tone(1.0, 1 / 7),), noise_sd=0.5, seed=1)).series
    band = bootstrap_band(extract_component(s, 1 / 7, 7, 63), BootstrapSpec.pbb(7, 100, 3))
    assert np.median(width_ratios(band, band)) == pytest.approx(1.0, abs=1e-9)


def test_compare_methods_report():
    s = generate(SyntheticSpec(1500, (Tone(1.0, 1 / 7, 0.5),), noise_sd=3.0, seed=8)).series
    report = compare_methods(s, ComponentSpec(1 / 7, 7, 729), B=100, seed=7)
    assert report.vbpbb.method == "PBB" and report.gsbb.method == "GSBB"
    assert report.median_width_ratio == pytest.approx(np.median(report.gsbb.width / report.vbpbb.width))
    assert report.median_width_ratio > 1
    d = json.loads(report.to_json())
    assert {"median_width_ratio", "per_phase_ratios", "ratio_of_median_widths"} <= set(d)
    assert len(d["per_phase_ratios"]) == 7
    # the GSBB side bootstraps the centered raw series
    direct = bootstrap_band(center(s), BootstrapSpec.gsbb(7, 100, 7), 7)
    assert direct.to_json() == report.gsbb.to_json()


def test_unfolded_csv():
    band = ConfidenceBand("PBB", 3, 0.05, 100, 0, [-1, -2, -3], [1, 2, 3], [0, 0, 0])
    lines = export_unfolded_csv(band, 7, dt.date(2001, 1, 1)).splitlines()
    assert lines[0] == "t,date,lower,point,upper"
    assert lines[4] == "4,2001-01-04,-1,0,1"
    assert len(lines) == 8
