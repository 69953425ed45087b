"""``vbpbb`` command line: synth, periodogram, filter, vbpbb, gsbb, sum-band, compare, plot.

Every subcommand writes its outputs plus a JSON manifest (``<out>.manifest.json``)
holding the argv, resolved parameters and input checksums.  Re-running the
stored argv reproduces the outputs byte for byte.

Exit status: 0 on success, 1 on data or validation errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import warnings

from . import __version__
from .bands import (
    ComponentSpec,
    ConfidenceBand,
    bootstrap_band,
    compare_methods,
    export_unfolded_csv,
    sum_components_band,
)
from .kz import FidelityWarning, FilterSpec, default_window, export_component_csv, kz_filter, window_multiple
from .presets import SUM_GSBB_PERIOD, parse_frequency
from .resampling import BootstrapSpec
from .series import SeriesFormatError, center, ingest_csv, write_csv
from .spectral import export_periodogram_csv, periodogram, top_peaks
from .svgplot import render_bands
from .synth import SyntheticSpec, Tone, generate

__all__ = ["main", "run", "rerun_manifest", "OUTPUT_DIR_ENV"]

OUTPUT_DIR_ENV = "VBPBB_OUTPUT_DIR"


class UsageError(Exception):
    pass


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_text(path, text):
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _out_path(args, default_name):
    if args.out:
        return args.out
    return os.path.join(os.environ.get(OUTPUT_DIR_ENV, "."), default_name)


def _check_distinct(paths):
    real = [os.path.abspath(p) for p in paths if p]
    if len(set(real)) != len(real):
        raise UsageError("input and output paths must all be distinct")


def _frequency(text):
    try:
        v = parse_frequency(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a frequency: {text!r}") from None
    if not 0 <= v <= 0.5:
        raise argparse.ArgumentTypeError(f"frequency must lie in [0, 0.5], got {text}")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _tone(text):
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"tone must be AMPLITUDE:FREQUENCY[:PHASE], got {text!r}")
    try:
        return Tone(float(parts[0]), parse_frequency(parts[1]), float(parts[2]) if len(parts) == 3 else 0.0)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad tone {text!r}") from None


def _component(text):
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"component must be FREQUENCY:PERIOD[:M], got {text!r}")
    try:
        v = parse_frequency(parts[0])
        p = int(parts[1])
        m = int(parts[2]) if len(parts) == 3 else None
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad component {text!r}") from None
    return v, p, m


def _add_filter_args(p, period_required=True):
    p.add_argument("--period", type=_positive_int, required=period_required, help="period in steps")
    p.add_argument("--frequency", type=_frequency, help="centre frequency, e.g. 2/365 (default 1/period)")
    p.add_argument("--m", type=_positive_int, help="window length (odd)")
    p.add_argument("--multiple", type=float, help="window = smallest odd integer >= multiple*period")
    p.add_argument("--k", type=_positive_int, default=1, help="KZ iterations (default 1)")
    p.add_argument("--edge-policy", choices=("renormalize", "trim"), default="renormalize")


def _add_boot_args(p):
    p.add_argument("--B", type=_positive_int, default=1000, help="bootstrap replicates (default 1000)")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--fold", type=_positive_int, help="fold period for the periodic mean")
    p.add_argument("--workers", type=_positive_int, default=1, help="threads; results do not depend on it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vbpbb", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"vbpbb {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic series")
    p.add_argument("--spec", help="JSON synthetic spec (overrides the flags below)")
    p.add_argument("--n", type=_positive_int, default=5844)
    p.add_argument("--tone", type=_tone, action="append", default=[], help="AMPLITUDE:FREQUENCY[:PHASE]")
    p.add_argument("--noise-sd", type=float, default=0.0)
    p.add_argument("--trend", type=float, default=0.0)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--truth", help="optional CSV of the noiseless components")
    p.add_argument("--out")

    p = sub.add_parser("periodogram", help="periodogram CSV and strongest peaks")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--top", type=_positive_int, default=10)
    p.add_argument("--min-separation", type=float, default=0.0)
    p.add_argument("--out")

    p = sub.add_parser("filter", help="extract a bandpass component (or KZ low-pass with --frequency 0)")
    p.add_argument("--in", dest="input", required=True)
    _add_filter_args(p)
    p.add_argument("--out")

    p = sub.add_parser("vbpbb", help="bandpass + periodic block bootstrap band")
    p.add_argument("--in", dest="input", required=True)
    _add_filter_args(p)
    _add_boot_args(p)
    p.add_argument("--out")

    p = sub.add_parser("gsbb", help="seasonal block bootstrap band of the centered raw series")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--period", type=_positive_int, required=True)
    p.add_argument("--block-length", type=_positive_int, help="multiple of the period (default: period)")
    _add_boot_args(p)
    p.add_argument("--out")

    p = sub.add_parser("sum-band", help="band for the sum of several bandpass components")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument(
        "--component",
        type=_component,
        action="append",
        help="FREQUENCY:PERIOD[:M]; default 2/365:365:731 and 1/7:7:729",
    )
    p.add_argument("--k", type=_positive_int, default=1)
    p.add_argument("--edge-policy", choices=("renormalize", "trim"), default="renormalize")
    _add_boot_args(p)
    p.add_argument("--gsbb-period", type=_positive_int, default=SUM_GSBB_PERIOD, help="period of the GSBB baseline")
    p.add_argument("--gsbb-out", help="where to write the GSBB baseline band JSON")
    p.add_argument("--unfolded", help="where to write the band laid out over raw time (CSV)")
    p.add_argument("--out")

    p = sub.add_parser("compare", help="VBPBB vs GSBB band widths for one component")
    p.add_argument("--in", dest="input", required=True)
    _add_filter_args(p)
    _add_boot_args(p)
    p.add_argument("--out")

    p = sub.add_parser("plot", help="render band or comparison JSON to SVG")
    p.add_argument("--band", action="append", required=True, help="band or comparison JSON (repeatable)")
    p.add_argument("--title", default="")
    p.add_argument("--out")
    return parser


def _component_spec(args):
    v = args.frequency if args.frequency is not None else 1.0 / args.period
    if args.m is not None:
        m = args.m
    else:
        c = args.multiple if args.multiple is not None else window_multiple(args.period)
        m = default_window(args.period, c)
    if m % 2 == 0:
        raise UsageError(f"--m must be odd, got {m}")
    return ComponentSpec(v, args.period, m, args.k, args.edge_policy)


def _filter_params(cs):
    return {"frequency": cs.frequency, "period": cs.period, "m": cs.m, "k": cs.k, "edge_policy": cs.edge_policy}


def _boot_params(args, fold):
    return {"B": args.B, "seed": args.seed, "alpha": args.alpha, "fold": fold}


def _load(path):
    return ingest_csv(path)


def _cmd_synth(args):
    if args.spec:
        with open(args.spec, encoding="utf-8") as fh:
            spec = SyntheticSpec.from_json(fh.read())
        inputs = [args.spec]
    else:
        spec = SyntheticSpec(args.n, tuple(args.tone), args.noise_sd, args.trend, args.seed)
        inputs = []
    out = _out_path(args, "synth.csv")
    _check_distinct(inputs + [out, args.truth])
    syn = generate(spec)
    write_csv(syn.series, out)
    outputs = [out]
    if args.truth:
        lines = ["t," + ",".join(f"component{j}" for j in range(len(syn.components)))]
        for i in range(spec.n):
            lines.append(f"{i + 1}," + ",".join(f"{c[i]:.17g}" for c in syn.components))
        _write_text(args.truth, "\n".join(lines) + "\n")
        outputs.append(args.truth)
    return inputs, outputs, {"spec": spec.to_dict()}


def _cmd_periodogram(args):
    out = _out_path(args, "periodogram.csv")
    _check_distinct([args.input, out])
    pg = periodogram(_load(args.input))
    _write_text(out, export_periodogram_csv(pg))
    peaks = top_peaks(pg, args.top, args.min_separation)
    return [args.input], [out], {
        "top": args.top,
        "min_separation": args.min_separation,
        "peaks": [{"frequency": f, "period": 1 / f, "power": p} for f, p in peaks],
    }


def _cmd_filter(args):
    out = _out_path(args, "component.csv")
    _check_distinct([args.input, out])
    series = _load(args.input)
    cs = _component_spec(args)
    if cs.frequency == 0:
        comp = kz_filter(series, FilterSpec(cs.m, cs.k), cs.edge_policy)
    else:
        comp = cs.extract(series)
    _write_text(out, export_component_csv(comp))
    return [args.input], [out], _filter_params(cs)


def _cmd_vbpbb(args):
    out = _out_path(args, "vbpbb_band.json")
    _check_distinct([args.input, out])
    series = _load(args.input)
    cs = _component_spec(args)
    fold = args.fold or cs.period
    comp = cs.extract(series)
    band = bootstrap_band(comp, BootstrapSpec.pbb(cs.period, args.B, args.seed), fold, args.alpha, args.workers)
    _write_text(out, band.to_json())
    return [args.input], [out], {**_filter_params(cs), **_boot_params(args, fold), "method": "PBB"}


def _cmd_gsbb(args):
    out = _out_path(args, "gsbb_band.json")
    _check_distinct([args.input, out])
    series = center(_load(args.input))
    fold = args.fold or args.period
    spec = BootstrapSpec.gsbb(args.period, args.B, args.seed, args.block_length)
    band = bootstrap_band(series, spec, fold, args.alpha, args.workers)
    _write_text(out, band.to_json())
    return [args.input], [out], {"period": args.period, "block_length": spec.block_length, **_boot_params(args, fold), "method": "GSBB"}


def _cmd_sum_band(args):
    out = _out_path(args, "sum_band.json")
    _check_distinct([args.input, out, args.gsbb_out, args.unfolded])
    series = _load(args.input)
    raw = args.component or [(2 / 365, 365, 731), (1 / 7, 7, 729)]
    specs = []
    for v, p, m in raw:
        m = m if m is not None else default_window(p, window_multiple(p))
        specs.append(ComponentSpec(v, p, m, args.k, args.edge_policy))
    comps = [cs.extract(series) for cs in specs]
    boots = [BootstrapSpec.pbb(cs.period, args.B, args.seed) for cs in specs]
    fold = args.fold or math.lcm(*(cs.period for cs in specs))
    band = sum_components_band(comps, boots, args.seed, fold, args.alpha, args.workers)
    _write_text(out, band.to_json())
    outputs = [out]
    if args.unfolded:
        _write_text(args.unfolded, export_unfolded_csv(band, series.n, series.start_date))
        outputs.append(args.unfolded)
    if args.gsbb_out:
        gs = bootstrap_band(
            center(series), BootstrapSpec.gsbb(args.gsbb_period, args.B, args.seed), args.gsbb_period, args.alpha, args.workers
        )
        _write_text(args.gsbb_out, gs.to_json())
        outputs.append(args.gsbb_out)
    params = {
        "components": [_filter_params(cs) for cs in specs],
        **_boot_params(args, fold),
        "gsbb_period": args.gsbb_period,
    }
    return [args.input], outputs, params


def _cmd_compare(args):
    out = _out_path(args, "compare.json")
    _check_distinct([args.input, out])
    series = _load(args.input)
    cs = _component_spec(args)
    fold = args.fold or cs.period
    report = compare_methods(series, cs, fold, args.B, args.seed, args.alpha, args.workers)
    _write_text(out, report.to_json())
    return [args.input], [out], {**_filter_params(cs), **_boot_params(args, fold)}


def _read_bands(path):
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    if "vbpbb" in d and "gsbb" in d:
        return [ConfidenceBand.from_dict(d["gsbb"]), ConfidenceBand.from_dict(d["vbpbb"])]
    return [ConfidenceBand.from_dict(d)]


def _cmd_plot(args):
    out = _out_path(args, "band.svg")
    _check_distinct(args.band + [out])
    bands = []
    for path in args.band:
        try:
            bands.extend(_read_bands(path))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ValueError(f"{path}: not a band JSON ({exc})") from None
    _write_text(out, render_bands(bands, title=args.title))
    return list(args.band), [out], {"title": args.title}


_COMMANDS = {
    "synth": _cmd_synth,
    "periodogram": _cmd_periodogram,
    "filter": _cmd_filter,
    "vbpbb": _cmd_vbpbb,
    "gsbb": _cmd_gsbb,
    "sum-band": _cmd_sum_band,
    "compare": _cmd_compare,
    "plot": _cmd_plot,
}


def _manifest(argv, command, inputs, outputs, params):
    return {
        "tool": "vbpbb",
        "version": __version__,
        "command": command,
        "argv": list(argv),
        "parameters": params,
        "inputs": [{"path": p, "sha256": _sha256(p)} for p in inputs],
        "outputs": list(outputs),
    }


def run(argv=None) -> int:
    """Run one subcommand; returns the exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", FidelityWarning)
            inputs, outputs, params = _COMMANDS[args.command](args)
        manifest = _manifest(argv, args.command, inputs, outputs, params)
        _write_text(outputs[0] + ".manifest.json", _dump(manifest))
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"vbpbb: error: {exc}", file=sys.stderr)
        return 2
    except (SeriesFormatError, ValueError, OSError) as exc:
        print(f"vbpbb {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


def rerun_manifest(path) -> int:
    """Re-execute the argv stored in a manifest."""
    with open(path, encoding="utf-8") as fh:
        return run(json.load(fh)["argv"])


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
