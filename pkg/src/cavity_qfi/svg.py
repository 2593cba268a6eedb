"""Dependency-free SVG line plots of trajectory tables."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf")

WIDTH, HEIGHT = 720, 440
LEFT, RIGHT, TOP, BOTTOM = 70, 150, 40, 50


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    k = 0
    while first + k * step <= hi + 1e-9 * step:
        ticks.append(round(first + k * step, 12))
        k += 1
    return ticks


def _num(x: float) -> str:
    return f"{x:.2f}"


def render_svg(
    rows: Sequence[Mapping[str, float]],
    columns: Sequence[str],
    x_column: str = "gamma0_t",
    title: str = "",
) -> str:
    """One polyline per column against ``x_column``.

    Non-finite points are skipped. Output depends only on the inputs.
    """
    if len(rows) < 2:
        raise ValueError("need at least two rows to plot")
    if not columns:
        raise ValueError("no columns selected")
    known = set(rows[0])
    for name in (x_column, *columns):
        if name not in known:
            raise ValueError(f"unknown column {name!r}")

    xs = [float(r[x_column]) for r in rows]
    series = {c: [float(r[c]) for r in rows] for c in columns}
    finite = [v for vals in series.values() for v in vals if math.isfinite(v)]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = (min(finite), max(finite)) if finite else (0.0, 1.0)
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = WIDTH - LEFT - RIGHT
    plot_h = HEIGHT - TOP - BOTTOM

    def sx(x):
        return LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y):
        return TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append(
        f'<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black" stroke-width="1"/>'
    )

    for xt in nice_ticks(x_lo, x_hi):
        px = sx(xt)
        out.append(f'<line x1="{_num(px)}" y1="{TOP + plot_h}" x2="{_num(px)}" y2="{TOP + plot_h + 5}" stroke="black"/>')
        out.append(f'<text x="{_num(px)}" y="{TOP + plot_h + 18}" text-anchor="middle">{xt:g}</text>')
    for yt in nice_ticks(y_lo, y_hi):
        py = sy(yt)
        out.append(f'<line x1="{LEFT - 5}" y1="{_num(py)}" x2="{LEFT}" y2="{_num(py)}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{_num(py + 4)}" text-anchor="end">{yt:g}</text>')
    if y_lo < 0 < y_hi:
        out.append(
            f'<line x1="{LEFT}" y1="{_num(sy(0.0))}" x2="{LEFT + plot_w}" y2="{_num(sy(0.0))}" '
            'stroke="#999999" stroke-dasharray="4 3"/>'
        )
    out.append(f'<text x="{LEFT + plot_w / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle">{escape(x_column)}</text>')

    for i, (name, ys) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(
            f"{_num(sx(x))},{_num(sy(y))}" for x, y in zip(xs, ys) if math.isfinite(y)
        )
        if pts:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = TOP + 15 + 18 * i
        lx = LEFT + plot_w + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(name)}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
