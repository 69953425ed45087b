"""Minimal static SVG renderer for confidence bands.

Output is a pure function of the input numbers (fixed float formatting, no
timestamps), so identical bands give byte-identical files.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["METHOD_COLORS", "render_bands", "nice_ticks"]

METHOD_COLORS = {"GSBB": "#d62728", "PBB": "#1f77b4"}
_FALLBACK = ["#2ca02c", "#9467bd", "#8c564b", "#e377c2"]

WIDTH, HEIGHT = 800, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 40, 50


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    """Round tick values covering ``[lo, hi]``."""
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + step * 1e-9:
        ticks.append(0.0 if abs(v) < step * 1e-9 else v)
        v += step
    return ticks


def _fmt(v):
    return f"{v:.2f}"


def _label(v):
    return f"{v:.6g}"


def _points(xs, ys):
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))


def render_bands(bands, title: str = "", xlabel: str = "phase", ylabel: str = "periodic mean") -> str:
    """SVG 1.1 document with one filled band, two bound lines and a centre line per band.

    ``bands`` is a sequence of :class:`~vbpbb.bands.ConfidenceBand` or of
    ``(band, colour, label)`` tuples.  All bands must share the fold period.
    """
    items = []
    for i, b in enumerate(bands):
        if isinstance(b, tuple):
            items.append(b)
        else:
            colour = METHOD_COLORS.get(b.method, _FALLBACK[i % len(_FALLBACK)])
            items.append((b, colour, f"{b.method} p={b.period}"))
    if not items:
        raise ValueError("nothing to plot")
    p = items[0][0].period
    if any(b.period != p for b, _, _ in items):
        raise ValueError("bands must share the fold period")

    ys = np.concatenate([np.concatenate([b.lower, b.upper, b.point_estimate]) for b, _, _ in items])
    ymin, ymax = float(ys.min()), float(ys.max())
    if ymax - ymin < 1e-12 * max(1.0, abs(ymax)):
        ymin, ymax = ymin - 1.0, ymax + 1.0
    pad = 0.05 * (ymax - ymin)
    ymin, ymax = ymin - pad, ymax + pad
    xmax = max(p - 1, 1)

    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(x):
        return LEFT + pw * x / xmax

    def sy(y):
        return TOP + ph * (ymax - y) / (ymax - ymin)

    phase = np.arange(p, dtype=float)
    xs = [sx(x) for x in phase]
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>')

    # axes
    x0, x1, y0, y1 = LEFT, LEFT + pw, TOP, TOP + ph
    out.append(f'<g class="axes" stroke="black" stroke-width="1">')
    out.append(f'<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}"/>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>')
    out.append("</g>")
    out.append('<g class="ticks" font-size="11">')
    for v in nice_ticks(0, xmax):
        x = sx(v)
        out.append(f'<line x1="{_fmt(x)}" y1="{y1}" x2="{_fmt(x)}" y2="{y1 + 5}" stroke="black"/>')
        out.append(f'<text x="{_fmt(x)}" y="{y1 + 18}" text-anchor="middle">{_label(v)}</text>')
    for v in nice_ticks(ymin, ymax):
        y = sy(v)
        out.append(f'<line x1="{x0 - 5}" y1="{_fmt(y)}" x2="{x0}" y2="{_fmt(y)}" stroke="black"/>')
        out.append(f'<text x="{x0 - 8}" y="{_fmt(y + 4)}" text-anchor="end">{_label(v)}</text>')
    out.append("</g>")
    if ymin < 0 < ymax:
        out.append(
            f'<line class="zero" x1="{x0}" y1="{_fmt(sy(0))}" x2="{x1}" y2="{_fmt(sy(0))}" '
            'stroke="#888888" stroke-dasharray="4,3"/>'
        )
    out.append(f'<text x="{(x0 + x1) / 2:.2f}" y="{HEIGHT - 10}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>')
    out.append(
        f'<text x="16" y="{(y0 + y1) / 2:.2f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {(y0 + y1) / 2:.2f})">{escape(ylabel)}</text>'
    )

    for i, (band, colour, label) in enumerate(items):
        up = [sy(v) for v in band.upper]
        lo = [sy(v) for v in band.lower]
        mid = [sy(v) for v in band.point_estimate]
        out.append(f'<g class="band" id="band{i}">')
        out.append(
            f'<polygon points="{_points(xs + xs[::-1], up + lo[::-1])}" fill="{colour}" fill-opacity="0.25" stroke="none"/>'
        )
        out.append(f'<polyline class="bound upper" points="{_points(xs, up)}" fill="none" stroke="{colour}" stroke-width="1"/>')
        out.append(f'<polyline class="bound lower" points="{_points(xs, lo)}" fill="none" stroke="{colour}" stroke-width="1"/>')
        out.append(f'<polyline class="center" points="{_points(xs, mid)}" fill="none" stroke="{colour}" stroke-width="1.5"/>')
        ly = TOP + 14 + 16 * i
        out.append(f'<rect x="{x1 - 150}" y="{ly - 10}" width="12" height="12" fill="{colour}" fill-opacity="0.5"/>')
        out.append(f'<text x="{x1 - 132}" y="{ly}" font-size="12">{escape(label)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
