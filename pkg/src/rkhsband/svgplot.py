"""Static SVG rendering of confidence bands (no plotting dependency)."""

from __future__ import annotations

from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .regions import RegionBand, band_at

WIDTH, HEIGHT = 640, 400
MARGIN = 48
# fill colours from the widest band (smallest alpha) to the narrowest
FILLS = ("#c6dbef", "#9ecae1", "#6baed6", "#4292c6")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_region_plot(
    bands: Sequence[tuple[float, RegionBand]],
    f: Callable[[np.ndarray], np.ndarray] | None,
    out: str | Path,
    grid: int = 401,
) -> str:
    """Write an SVG with nested bands, the interpolant (solid), the true
    function (dashed) and the design points. Returns the SVG text.

    All bands must share one interpolant.
    """
    if not bands:
        raise ValueError("need at least one band")
    interp = bands[0][1].interpolant
    a, b = interp.spec.domain
    xs = np.linspace(a, b, grid)
    center = interp(xs)
    ordered = sorted(bands, key=lambda ab: -ab[1].z_alpha)
    edges = [band_at(r, xs) for _, r in ordered]
    truth = None if f is None else np.asarray(f(xs), dtype=float)

    finite = [center] + [e for pair in edges for e in pair if np.all(np.isfinite(e))]
    if truth is not None:
        finite.append(truth)
    lo = min(float(np.min(v)) for v in finite)
    hi = max(float(np.max(v)) for v in finite)
    if hi - lo < 1e-12:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    def px(x):
        return MARGIN + (np.asarray(x) - a) / (b - a) * (WIDTH - 2 * MARGIN)

    def py(y):
        y = np.clip(np.asarray(y, dtype=float), lo, hi)
        return HEIGHT - MARGIN - (y - lo) / (hi - lo) * (HEIGHT - 2 * MARGIN)

    def points(x, y):
        return " ".join(f"{_fmt(u)},{_fmt(v)}" for u, v in zip(px(x), py(y)))

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    for k, ((alpha, _), (lower, upper)) in enumerate(zip(ordered, edges)):
        poly = points(np.concatenate((xs, xs[::-1])), np.concatenate((upper, lower[::-1])))
        parts.append(
            f'<polygon points="{poly}" fill="{FILLS[k % len(FILLS)]}" stroke="none">'
            f"<title>{100 * (1 - alpha):g}% region</title></polygon>"
        )
    x0, y0, x1, y1 = MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN
    parts.append(
        f'<polyline points="{x0},{y1} {x0},{y0} {x1},{y0}" fill="none" stroke="black" stroke-width="1"/>'
    )
    for tick in np.linspace(a, b, 6):
        tx = _fmt(px(tick))
        parts.append(f'<line x1="{tx}" y1="{y0}" x2="{tx}" y2="{y0 + 4}" stroke="black"/>')
        parts.append(f'<text x="{tx}" y="{y0 + 18}" font-size="11" text-anchor="middle">{tick:.1f}</text>')
    for tick in np.linspace(lo, hi, 5):
        ty = _fmt(py(tick))
        parts.append(f'<line x1="{x0 - 4}" y1="{ty}" x2="{x0}" y2="{ty}" stroke="black"/>')
        parts.append(f'<text x="{x0 - 6}" y="{ty}" font-size="11" text-anchor="end">{tick:.2f}</text>')
    if truth is not None:
        parts.append(
            f'<polyline points="{points(xs, truth)}" fill="none" stroke="black" '
            'stroke-width="1.5" stroke-dasharray="6,4"/>'
        )
    parts.append(f'<polyline points="{points(xs, center)}" fill="none" stroke="#6a3d9a" stroke-width="2"/>')
    d = interp.design
    for u, v in zip(px(d.raw), py(interp.observations)):
        parts.append(f'<circle cx="{_fmt(u)}" cy="{_fmt(v)}" r="3.5" fill="#1f78b4"/>')
    parts.append("</svg>")
    text = "\n".join(parts) + "\n"
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc.strerror}") from exc
    return text
