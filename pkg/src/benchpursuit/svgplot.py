"""Self-contained SVG scatterplots with byte-deterministic output.

No plotting library is used: element order, coordinate formatting, and
styling are fixed functions of the input, so identical points yield
identical bytes. Two-dimensional samples get one panel; three-dimensional
samples get the three pairwise coordinate panels side by side.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .errors import DimensionMismatch, UnsupportedDimension
from .frames import ProjectedSample

_PANEL = 340  # plot-area side in px
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 52, 16, 34, 44
_GAP = 26  # between panels

# source tag -> (glyph, stroke/fill color)
_STYLES = {
    "data": ("circle", "#3572a5"),
    "benchmark": ("cross", "#c96a1f"),
}
_FALLBACK_STYLE = ("square", "#5a5a5a")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    span = hi - lo
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = 10 * mag
    for mult in (1.0, 2.0, 5.0, 10.0):
        if span / (mult * mag) <= target:
            step = mult * mag
            break
    first = math.ceil(lo / step)
    last = math.floor(hi / step)
    return [k * step for k in range(first, last + 1)]


def _extent(samples: list[ProjectedSample], axis: int) -> tuple[float, float]:
    values = [s.points[:, axis] for s in samples if s.n > 0]
    if not values:
        return -1.0, 1.0
    lo = min(float(v.min()) for v in values)
    hi = max(float(v.max()) for v in values)
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _glyph(kind: str, color: str, cx: float, cy: float) -> str:
    if kind == "circle":
        return f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="2.4" fill="{color}" fill-opacity="0.75"/>'
    if kind == "cross":
        a = 2.6
        return (
            f'<path d="M{_fmt(cx - a)} {_fmt(cy - a)}L{_fmt(cx + a)} {_fmt(cy + a)}'
            f'M{_fmt(cx - a)} {_fmt(cy + a)}L{_fmt(cx + a)} {_fmt(cy - a)}" '
            f'stroke="{color}" stroke-width="1.1"/>'
        )
    a = 2.2
    return (
        f'<rect x="{_fmt(cx - a)}" y="{_fmt(cy - a)}" width="{_fmt(2 * a)}" '
        f'height="{_fmt(2 * a)}" fill="{color}" fill-opacity="0.75"/>'
    )


def _panel(
    samples: list[ProjectedSample],
    ax_x: int,
    ax_y: int,
    names: list[str],
    offset_x: float,
) -> str:
    left = offset_x + _MARGIN_L
    top = _MARGIN_T
    lo_x, hi_x = _extent(samples, ax_x)
    lo_y, hi_y = _extent(samples, ax_y)

    def sx(v: float) -> float:
        return left + (v - lo_x) / (hi_x - lo_x) * _PANEL

    def sy(v: float) -> float:
        return top + _PANEL - (v - lo_y) / (hi_y - lo_y) * _PANEL

    parts = [
        f'<rect x="{_fmt(left)}" y="{_fmt(top)}" width="{_PANEL}" height="{_PANEL}" '
        f'fill="none" stroke="#444444" stroke-width="1"/>'
    ]
    for tick in _nice_ticks(lo_x, hi_x):
        x = sx(tick)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(top + _PANEL)}" x2="{_fmt(x)}" '
            f'y2="{_fmt(top + _PANEL + 4)}" stroke="#444444" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(top + _PANEL + 16)}" font-size="10" '
            f'text-anchor="middle" fill="#222222">{tick:.6g}</text>'
        )
    for tick in _nice_ticks(lo_y, hi_y):
        y = sy(tick)
        parts.append(
            f'<line x1="{_fmt(left - 4)}" y1="{_fmt(y)}" x2="{_fmt(left)}" '
            f'y2="{_fmt(y)}" stroke="#444444" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(left - 7)}" y="{_fmt(y + 3)}" font-size="10" '
            f'text-anchor="end" fill="#222222">{tick:.6g}</text>'
        )
    parts.append(
        f'<text x="{_fmt(left + _PANEL / 2)}" y="{_fmt(top + _PANEL + 32)}" font-size="11" '
        f'text-anchor="middle" fill="#222222">{escape(names[ax_x])}</text>'
    )
    parts.append(
        f'<text x="{_fmt(offset_x + 14)}" y="{_fmt(top + _PANEL / 2)}" font-size="11" '
        f'text-anchor="middle" fill="#222222" '
        f'transform="rotate(-90 {_fmt(offset_x + 14)} {_fmt(top + _PANEL / 2)})">'
        f"{escape(names[ax_y])}</text>"
    )
    for sample in samples:
        kind, color = _STYLES.get(sample.source, _FALLBACK_STYLE)
        for row in np.asarray(sample.points):
            parts.append(_glyph(kind, color, sx(float(row[ax_x])), sy(float(row[ax_y]))))
    return "\n".join(parts)


def emit_svg(samples, axis_names=None, title: str = "") -> str:
    """Render projected samples to an SVG document string.

    All samples must share the same dimension (2 or 3); an empty sample is
    fine and contributes axes only. Glyphs distinguish sources: circles for
    "data", crosses for "benchmark".
    """
    samples = [s if isinstance(s, ProjectedSample) else ProjectedSample(s) for s in samples]
    if not samples:
        raise ValueError("need at least one sample")
    d = samples[0].d
    if any(s.d != d for s in samples):
        raise DimensionMismatch("all samples must share the same dimension")
    if d not in (2, 3):
        raise UnsupportedDimension(f"plots implemented for d in {{2, 3}}, got d={d}")
    names = list(axis_names) if axis_names is not None else [f"c{i + 1}" for i in range(d)]
    if len(names) != d:
        raise ValueError(f"expected {d} axis names, got {len(names)}")

    pairs = [(0, 1)] if d == 2 else [(0, 1), (0, 2), (1, 2)]
    panel_w = _MARGIN_L + _PANEL + _MARGIN_R
    width = len(pairs) * panel_w + (len(pairs) - 1) * _GAP
    height = _MARGIN_T + _PANEL + _MARGIN_B

    body = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if title:
        body.append(
            f'<text x="{_fmt(width / 2)}" y="18" font-size="13" text-anchor="middle" '
            f'fill="#111111">{escape(title)}</text>'
        )
    for i, (ax_x, ax_y) in enumerate(pairs):
        body.append(_panel(samples, ax_x, ax_y, names, i * (panel_w + _GAP)))
    legend_x = width - _MARGIN_R - 110
    for j, sample in enumerate({s.source: s for s in samples}.values()):
        kind, color = _STYLES.get(sample.source, _FALLBACK_STYLE)
        y = _MARGIN_T + 12 + 14 * j
        body.append(_glyph(kind, color, legend_x, y - 3))
        body.append(
            f'<text x="{_fmt(legend_x + 8)}" y="{_fmt(y)}" font-size="10" '
            f'fill="#222222">{escape(sample.source)}</text>'
        )
    body.append("</svg>")
    return "\n".join(body) + "\n"
