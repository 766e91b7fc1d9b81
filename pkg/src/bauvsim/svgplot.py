"""Self-contained SVG emission for trajectory overlays.

Plots are written directly as SVG so they stay dependency-free and testable
by parsing. Data polylines live inside a group whose transform maps meters to
pixels with equal aspect; the polyline points are the raw meter coordinates
(repr round trip), so a parser can recover the plotted values exactly.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

from .guidance import WaypointPath

_COLORS = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_REF_COLOR = "#444444"
_WIDTH = 860.0
_MARGIN = 60.0


def _tick_step(span: float) -> float:
    if span <= 0.0:
        return 1.0
    raw = span / 6.0
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            return mult * mag
    return 10.0 * mag


def _ticks(lo: float, hi: float) -> list[float]:
    step = _tick_step(hi - lo)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12:
        ticks.append(0.0 if abs(t) < 1e-12 else t)
        t += step
    return ticks


def emit_plot(
    trials: Sequence[tuple[str, Sequence[tuple[float, float]]]],
    path: WaypointPath,
    out_path: str | Path,
) -> None:
    """Write an SVG with the reference path and each trial's (x, y) trace.

    Axes are meters with equal aspect; the legend is keyed by the trial
    labels. `trials` may be empty, in which case only the reference polyline
    is drawn.
    """
    xs = [p[0] for p in path.points]
    ys = [p[1] for p in path.points]
    for _, pts in trials:
        xs.extend(p[0] for p in pts)
        ys.extend(p[1] for p in pts)
    xmin, xmax = min(xs), max(xs)
    ymin, ymax = min(ys), max(ys)
    pad = 0.05 * max(xmax - xmin, ymax - ymin, 1e-6)
    xmin -= pad
    xmax += pad
    ymin -= pad
    ymax += pad

    scale = (_WIDTH - 2.0 * _MARGIN) / (xmax - xmin)
    height = 2.0 * _MARGIN + scale * (ymax - ymin)
    # pixel = (margin + s*(x - xmin), margin + s*(ymax - y))
    tx = _MARGIN - scale * xmin
    ty = _MARGIN + scale * ymax
    stroke = 1.6 / scale

    def px(x: float) -> float:
        return _MARGIN + scale * (x - xmin)

    def py(y: float) -> float:
        return _MARGIN + scale * (ymax - y)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {_WIDTH:.0f} {height:.0f}">',
        f'<rect x="0" y="0" width="{_WIDTH:.0f}" height="{height:.0f}" fill="white"/>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{_WIDTH - 2 * _MARGIN:.2f}" '
        f'height="{height - 2 * _MARGIN:.2f}" fill="none" stroke="#999999"/>',
    ]
    for t in _ticks(xmin, xmax):
        x = px(t)
        parts.append(
            f'<line x1="{x:.2f}" y1="{height - _MARGIN:.2f}" x2="{x:.2f}" '
            f'y2="{height - _MARGIN + 6:.2f}" stroke="#999999"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{height - _MARGIN + 20:.2f}" font-size="12" '
            f'text-anchor="middle" fill="#333333">{t:g}</text>'
        )
    for t in _ticks(ymin, ymax):
        y = py(t)
        parts.append(
            f'<line x1="{_MARGIN - 6:.2f}" y1="{y:.2f}" x2="{_MARGIN:.2f}" '
            f'y2="{y:.2f}" stroke="#999999"/>'
        )
        parts.append(
            f'<text x="{_MARGIN - 10:.2f}" y="{y + 4:.2f}" font-size="12" '
            f'text-anchor="end" fill="#333333">{t:g}</text>'
        )
    parts.append(
        f'<text x="{_WIDTH / 2:.0f}" y="{height - 10:.2f}" font-size="13" '
        f'text-anchor="middle" fill="#333333">x [m]</text>'
    )
    parts.append(
        f'<text x="16" y="{height / 2:.2f}" font-size="13" text-anchor="middle" '
        f'fill="#333333" transform="rotate(-90 16 {height / 2:.2f})">y [m]</text>'
    )

    parts.append(f'<g transform="translate({tx!r} {ty!r}) scale({scale!r} {-scale!r})">')
    ref_points = " ".join(f"{x!r},{y!r}" for x, y in path.points)
    parts.append(
        f'<polyline class="ref" points="{ref_points}" fill="none" '
        f'stroke="{_REF_COLOR}" stroke-width="{stroke:.6g}" '
        f'stroke-dasharray="{3 * stroke:.6g} {2 * stroke:.6g}"/>'
    )
    for idx, (_, pts) in enumerate(trials):
        color = _COLORS[idx % len(_COLORS)]
        trace = " ".join(f"{x!r},{y!r}" for x, y in pts)
        parts.append(
            f'<polyline class="trial" points="{trace}" fill="none" '
            f'stroke="{color}" stroke-width="{stroke:.6g}"/>'
        )
    parts.append("</g>")

    legend_y = _MARGIN + 18.0
    parts.append(
        f'<line x1="{_WIDTH - 250:.0f}" y1="{legend_y:.2f}" x2="{_WIDTH - 220:.0f}" '
        f'y2="{legend_y:.2f}" stroke="{_REF_COLOR}" stroke-width="1.6" '
        f'stroke-dasharray="5 3"/>'
    )
    parts.append(
        f'<text x="{_WIDTH - 212:.0f}" y="{legend_y + 4:.2f}" font-size="12" '
        f'fill="#333333">reference path</text>'
    )
    for idx, (label, _) in enumerate(trials):
        y = legend_y + 18.0 * (idx + 1)
        color = _COLORS[idx % len(_COLORS)]
        parts.append(
            f'<line x1="{_WIDTH - 250:.0f}" y1="{y:.2f}" x2="{_WIDTH - 220:.0f}" '
            f'y2="{y:.2f}" stroke="{color}" stroke-width="1.6"/>'
        )
        parts.append(
            f'<text x="{_WIDTH - 212:.0f}" y="{y + 4:.2f}" font-size="12" '
            f'fill="#333333">{label}</text>'
        )
    parts.append("</svg>")
    Path(out_path).write_text("\n".join(parts) + "\n")
