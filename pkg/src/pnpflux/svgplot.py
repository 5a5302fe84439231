"""Minimal standalone SVG line plots for sweep output.

One polyline per series on linear axes with tick labels. No styling
contract beyond well-formed SVG; numbers in labels carry 6 significant
digits.
"""

from __future__ import annotations

import math

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

WIDTH = 720
HEIGHT = 480
MARGIN_L = 72
MARGIN_R = 24
MARGIN_T = 36
MARGIN_B = 56


def _nice_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    span = hi - lo
    raw = span / max(n, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    else:
        step = 10.0 * mag
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * span:
        ticks.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return ticks


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def render_line_plot(series: list[tuple[str, list[float], list[float]]],
                     title: str = "", xlabel: str = "", ylabel: str = "",
                     width: int = WIDTH, height: int = HEIGHT) -> str:
    """Standalone SVG with one polyline per (label, xs, ys) series."""
    pts = [(x, y) for _, xs, ys in series for x, y in zip(xs, ys)]
    if not pts:
        raise ValueError("no data points to plot")
    xmin = min(p[0] for p in pts)
    xmax = max(p[0] for p in pts)
    ymin = min(p[1] for p in pts)
    ymax = max(p[1] for p in pts)
    if xmax == xmin:
        xmin, xmax = xmin - 0.5, xmax + 0.5
    if ymax == ymin:
        ymin, ymax = ymin - 0.5, ymax + 0.5
    # 5% headroom so lines stay off the frame
    xpad = 0.05 * (xmax - xmin)
    ypad = 0.05 * (ymax - ymin)
    xmin, xmax = xmin - xpad, xmax + xpad
    ymin, ymax = ymin - ypad, ymax + ypad

    pw = width - MARGIN_L - MARGIN_R
    ph = height - MARGIN_T - MARGIN_B

    def sx(x: float) -> float:
        return MARGIN_L + (x - xmin) / (xmax - xmin) * pw

    def sy(y: float) -> float:
        return MARGIN_T + (ymax - y) / (ymax - ymin) * ph

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">')
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>')
    out.append(
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" '
        f'fill="none" stroke="#333" stroke-width="1"/>')

    for t in _nice_ticks(xmin, xmax):
        px = sx(t)
        out.append(f'<line x1="{px:.2f}" y1="{MARGIN_T + ph}" x2="{px:.2f}" '
                   f'y2="{MARGIN_T + ph + 5}" stroke="#333"/>')
        out.append(f'<text x="{px:.2f}" y="{MARGIN_T + ph + 20}" font-size="11" '
                   f'text-anchor="middle" font-family="sans-serif">{_fmt(t)}</text>')
    for t in _nice_ticks(ymin, ymax):
        py = sy(t)
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{py:.2f}" x2="{MARGIN_L}" '
                   f'y2="{py:.2f}" stroke="#333"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{py + 4:.2f}" font-size="11" '
                   f'text-anchor="end" font-family="sans-serif">{_fmt(t)}</text>')

    for idx, (label, xs, ys) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5"/>')
        if label:
            ly = MARGIN_T + 16 + 16 * idx
            out.append(f'<line x1="{width - MARGIN_R - 110}" y1="{ly - 4}" '
                       f'x2="{width - MARGIN_R - 86}" y2="{ly - 4}" stroke="{color}" '
                       f'stroke-width="1.5"/>')
            out.append(f'<text x="{width - MARGIN_R - 80}" y="{ly}" font-size="11" '
                       f'font-family="sans-serif">{label}</text>')

    if title:
        out.append(f'<text x="{width / 2:.0f}" y="{MARGIN_T - 12}" font-size="14" '
                   f'text-anchor="middle" font-family="sans-serif">{title}</text>')
    if xlabel:
        out.append(f'<text x="{MARGIN_L + pw / 2:.0f}" y="{height - 14}" font-size="12" '
                   f'text-anchor="middle" font-family="sans-serif">{xlabel}</text>')
    if ylabel:
        ly = MARGIN_T + ph / 2
        out.append(f'<text x="18" y="{ly:.0f}" font-size="12" text-anchor="middle" '
                   f'font-family="sans-serif" transform="rotate(-90 18 {ly:.0f})">{ylabel}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
