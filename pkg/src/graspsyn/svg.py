"""Minimal SVG figures: radar polygons, line/bar charts and labelled scatter plots.

Output is plain SVG 1.1 text.  Coordinates are written with fixed three-decimal
formatting so figures are byte-stable across runs and locales.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["radar_svg", "line_svg", "scatter_svg", "PALETTE"]

PALETTE = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
)
_W, _H = 640, 480
_CHART_W = 780  # plot box plus a legend column


def _f(x: float) -> str:
    return format(float(x), ".3f")


def _pts(xy) -> str:
    return " ".join(f"{_f(x)},{_f(y)}" for x, y in xy)


def _text(x, y, s, size=12, anchor="middle", extra="") -> str:
    return (
        f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" text-anchor="{anchor}" '
        f'font-family="sans-serif"{extra}>{escape(str(s))}</text>'
    )


def _doc(body: list[str], title: str, width=_W, height=_H) -> str:
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        _text(width / 2, 24, title, 16),
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def _legend(names: Sequence[str], x0: float, y0: float) -> list[str]:
    out = []
    for i, name in enumerate(names):
        y = y0 + 18 * i
        colour = PALETTE[i % len(PALETTE)]
        out.append(f'<rect x="{_f(x0)}" y="{_f(y - 9)}" width="10" height="10" fill="{colour}"/>')
        out.append(_text(x0 + 16, y, name, 11, "start"))
    return out


def radar_svg(series: Mapping[str, Sequence[float]], labels: Sequence[str], title: str) -> str:
    """One closed polygon per series over equally spaced, labelled spokes.

    The first spoke points up; spokes proceed clockwise.
    """
    n = len(labels)
    if n < 3:
        raise ValueError("a radar chart needs at least 3 spokes")
    cx, cy, r = 260.0, 260.0, 180.0
    top = max([max(v) for v in series.values()] + [1e-12])
    scale = r / top
    angle = [-math.pi / 2 + 2 * math.pi * i / n for i in range(n)]
    body = ['<g stroke="#cccccc" fill="none">']
    for frac in (0.25, 0.5, 0.75, 1.0):
        ring = [(cx + frac * r * math.cos(a), cy + frac * r * math.sin(a)) for a in angle]
        body.append(f'<polygon points="{_pts(ring)}"/>')
    for a in angle:
        body.append(
            f'<line x1="{_f(cx)}" y1="{_f(cy)}" x2="{_f(cx + r * math.cos(a))}" y2="{_f(cy + r * math.sin(a))}"/>'
        )
    body.append("</g>")
    for lab, a in zip(labels, angle):
        body.append(_text(cx + (r + 22) * math.cos(a), cy + (r + 22) * math.sin(a) + 4, lab, 10))
    body.append(_text(cx, cy + r + 50, f"outer ring = {top:.4g}", 10))
    for i, (name, values) in enumerate(series.items()):
        if len(values) != n:
            raise ValueError(f"series {name!r} has {len(values)} values for {n} spokes")
        colour = PALETTE[i % len(PALETTE)]
        poly = [(cx + v * scale * math.cos(a), cy + v * scale * math.sin(a)) for v, a in zip(values, angle)]
        body.append(
            f'<polygon points="{_pts(poly)}" fill="{colour}" fill-opacity="0.12" '
            f'stroke="{colour}" stroke-width="2"><title>{escape(name)}</title></polygon>'
        )
    body += _legend(list(series), 500, 70)
    return _doc(body, title)


def _axes(xlim, ylim, xlabel, ylabel, box=(70, 50, 560, 400)):
    x0, y0, w, h = box
    (xa, xb), (ya, yb) = xlim, ylim
    xb = xb if xb > xa else xa + 1.0
    yb = yb if yb > ya else ya + 1.0

    def sx(x):
        return x0 + (x - xa) / (xb - xa) * w

    def sy(y):
        return y0 + h - (y - ya) / (yb - ya) * h

    body = [
        f'<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="none" stroke="black"/>',
        _text(x0 + w / 2, y0 + h + 40, xlabel),
        _text(18, y0 + h / 2, ylabel, 12, "middle", f' transform="rotate(-90 18 {_f(y0 + h / 2)})"'),
    ]
    for t in np.linspace(xa, xb, 6):
        body.append(_text(sx(t), y0 + h + 16, f"{t:.3g}", 10))
    for t in np.linspace(ya, yb, 6):
        body.append(_text(x0 - 6, sy(t) + 4, f"{t:.3g}", 10, "end"))
    return body, sx, sy


def line_svg(
    x: Sequence[float],
    series: Mapping[str, Sequence[float]],
    title: str,
    xlabel: str = "",
    ylabel: str = "",
    bars: Sequence[float] | None = None,
    marker: float | None = None,
) -> str:
    """Polylines over a shared x axis (NaN leaves a gap); optional bars and a vertical marker."""
    x = np.asarray(x, dtype=float)
    values = [np.asarray(v, dtype=float) for v in series.values()]
    ys = np.concatenate(values + ([np.asarray(bars, dtype=float)] if bars is not None else []))
    ys = ys[np.isfinite(ys)]
    lo = min(0.0, float(ys.min())) if ys.size else 0.0
    hi = float(ys.max()) if ys.size else 1.0
    pad = 0.5 if x.size > 1 and bars is not None else 0.0
    body, sx, sy = _axes((x.min() - pad, x.max() + pad), (lo, hi * 1.05 or 1.0), xlabel, ylabel)
    if bars is not None:
        bw = 0.6 * (sx(1.0) - sx(0.0))
        for xi, b in zip(x, bars):
            body.append(
                f'<rect x="{_f(sx(xi) - bw / 2)}" y="{_f(sy(b))}" width="{_f(bw)}" '
                f'height="{_f(sy(lo) - sy(b))}" fill="#9ecae1"/>'
            )
    for i, (name, v) in enumerate(zip(series, values)):
        colour = PALETTE[i % len(PALETTE)]
        ok = np.isfinite(v)
        # NaN entries split the series into separate runs
        breaks = np.flatnonzero(np.diff(ok.astype(int)) != 0) + 1
        for run in np.split(np.arange(v.size), breaks):
            if run.size > 1 and ok[run[0]]:
                pts = _pts(zip(map(sx, x[run]), map(sy, v[run])))
                body.append(f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="2"/>')
        for xi, yi in zip(x[ok], v[ok]):
            body.append(f'<circle cx="{_f(sx(xi))}" cy="{_f(sy(yi))}" r="3" fill="{colour}"/>')
    if marker is not None:
        body.append(
            f'<line x1="{_f(sx(marker))}" y1="50" x2="{_f(sx(marker))}" y2="450" '
            f'stroke="black" stroke-dasharray="4 3"/>'
        )
    body += _legend(list(series), 645, 70)
    return _doc(body, title, _CHART_W)


def scatter_svg(points, groups: Sequence[str], title: str, xlabel: str = "", ylabel: str = "") -> str:
    """2-D points coloured by group name; groups are coloured in first-seen order."""
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[1] != 2 or len(groups) != len(P):
        raise ValueError("need (n, 2) points and one group per point")
    names = list(dict.fromkeys(groups))
    colour = {g: PALETTE[i % len(PALETTE)] for i, g in enumerate(names)}
    span = lambda a: (float(a.min()), float(a.max())) if a.size else (0.0, 1.0)  # noqa: E731
    body, sx, sy = _axes(span(P[:, 0]), span(P[:, 1]), xlabel, ylabel)
    for (px, py), g in zip(P, groups):
        body.append(
            f'<circle cx="{_f(sx(px))}" cy="{_f(sy(py))}" r="4" fill="{colour[g]}" fill-opacity="0.8">'
            f"<title>{escape(g)}</title></circle>"
        )
    body += _legend(names, 645, 70)
    return _doc(body, title, _CHART_W)
