"""Self-contained SVG line charts, written directly without a renderer.

Fixed canvas, fixed palette, coordinates formatted to two decimals:
reruns on identical data produce byte-identical files.
"""

from __future__ import annotations

import math

from .errors import MissingData

WIDTH = 640.0
HEIGHT = 400.0
MARGIN_LEFT = 70.0
MARGIN_RIGHT = 20.0
MARGIN_TOP = 40.0
MARGIN_BOTTOM = 50.0

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

N_TICKS = 5


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _tick_label(value: float) -> str:
    if value == 0:
        return "0"
    if abs(value) >= 1e4 or abs(value) < 1e-3:
        return f"{value:.2e}"
    return f"{value:.4g}"


def _scale(values, lo, hi, out_lo, out_hi):
    span = hi - lo
    if span == 0:
        span = 1.0
    return [out_lo + (v - lo) / span * (out_hi - out_lo) for v in values]


def line_chart(
    series: list,
    title: str,
    x_label: str,
    y_label: str,
    path: str,
    log_y: bool = False,
) -> str:
    """Write a line chart and return its path.

    ``series`` is a list of (label, xs, ys) triples.  With ``log_y`` the
    y values must be positive and are plotted as log10, with the axis
    label annotated accordingly.
    """
    cleaned = []
    for label, xs, ys in series:
        xs = [float(x) for x in xs]
        ys = [float(y) for y in ys]
        if len(xs) != len(ys):
            raise MissingData(f"series {label!r} has mismatched lengths")
        if xs:
            cleaned.append((label, xs, ys))
    if not cleaned or all(not xs for _, xs, _ in cleaned):
        raise MissingData("no points to plot")

    if log_y:
        for label, _, ys in cleaned:
            if any(y <= 0 for y in ys):
                raise MissingData(f"log scale requires positive values in series {label!r}")
        cleaned = [
            (label, xs, [math.log10(y) for y in ys]) for label, xs, ys in cleaned
        ]
        y_label = f"log10({y_label})"

    all_x = [x for _, xs, _ in cleaned for x in xs]
    all_y = [y for _, _, ys in cleaned for y in ys]
    x_lo, x_hi = min(all_x), max(all_x)
    y_lo, y_hi = min(all_y), max(all_y)
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0

    plot_left = MARGIN_LEFT
    plot_right = WIDTH - MARGIN_RIGHT
    plot_top = MARGIN_TOP
    plot_bottom = HEIGHT - MARGIN_BOTTOM

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0f}" '
        f'height="{HEIGHT:.0f}" viewBox="0 0 {WIDTH:.0f} {HEIGHT:.0f}">',
        f'<rect x="0" y="0" width="{WIDTH:.0f}" height="{HEIGHT:.0f}" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="24" text-anchor="middle" '
        f'font-family="monospace" font-size="14">{title}</text>',
        f'<rect x="{_fmt(plot_left)}" y="{_fmt(plot_top)}" '
        f'width="{_fmt(plot_right - plot_left)}" height="{_fmt(plot_bottom - plot_top)}" '
        'fill="none" stroke="#333" stroke-width="1"/>',
    ]

    for i in range(N_TICKS):
        frac = i / (N_TICKS - 1)
        xv = x_lo + frac * (x_hi - x_lo)
        xp = plot_left + frac * (plot_right - plot_left)
        parts.append(
            f'<line x1="{_fmt(xp)}" y1="{_fmt(plot_bottom)}" x2="{_fmt(xp)}" '
            f'y2="{_fmt(plot_bottom + 5)}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{_fmt(xp)}" y="{_fmt(plot_bottom + 20)}" text-anchor="middle" '
            f'font-family="monospace" font-size="11">{_tick_label(xv)}</text>'
        )
        yv = y_lo + frac * (y_hi - y_lo)
        yp = plot_bottom - frac * (plot_bottom - plot_top)
        parts.append(
            f'<line x1="{_fmt(plot_left - 5)}" y1="{_fmt(yp)}" x2="{_fmt(plot_left)}" '
            f'y2="{_fmt(yp)}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{_fmt(plot_left - 8)}" y="{_fmt(yp + 4)}" text-anchor="end" '
            f'font-family="monospace" font-size="11">{_tick_label(yv)}</text>'
        )

    parts.append(
        f'<text x="{WIDTH / 2:.0f}" y="{HEIGHT - 10:.0f}" text-anchor="middle" '
        f'font-family="monospace" font-size="12">{x_label}</text>'
    )
    parts.append(
        f'<text x="16" y="{HEIGHT / 2:.0f}" text-anchor="middle" '
        f'font-family="monospace" font-size="12" '
        f'transform="rotate(-90 16 {HEIGHT / 2:.0f})">{y_label}</text>'
    )

    for idx, (label, xs, ys) in enumerate(cleaned):
        color = PALETTE[idx % len(PALETTE)]
        px = _scale(xs, x_lo, x_hi, plot_left, plot_right)
        py = _scale(ys, y_lo, y_hi, plot_bottom, plot_top)
        points = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(px, py))
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        for x, y in zip(px, py):
            parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="2.5" fill="{color}"/>')
        legend_y = plot_top + 16 + 16 * idx
        parts.append(
            f'<line x1="{_fmt(plot_right - 120)}" y1="{_fmt(legend_y - 4)}" '
            f'x2="{_fmt(plot_right - 100)}" y2="{_fmt(legend_y - 4)}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{_fmt(plot_right - 94)}" y="{_fmt(legend_y)}" '
            f'font-family="monospace" font-size="11">{label}</text>'
        )

    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
    return path
