"""Minimal, byte-stable SVG scatter maps.

No plotting library is used so that the files are identical across runs and
easy to inspect in tests (one ``<circle>`` per point, ``class`` attributes
name the point kind).
"""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

WIDTH = HEIGHT = 640
MARGIN = 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass
class Point:
    x: float
    y: float
    label: str
    kind: str
    group: int = 0


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def scatter_svg(points, title, xlabel, ylabel, segments=(), legend=()) -> str:
    """Render points (and optional segments between point indices) to SVG text."""
    xs = np.array([p.x for p in points] or [0.0])
    ys = np.array([p.y for p in points] or [0.0])
    lo = min(xs.min(), ys.min(), 0.0)
    hi = max(xs.max(), ys.max(), 0.0)
    span = hi - lo or 1.0
    lo, hi = lo - 0.08 * span, hi + 0.08 * span

    def px(v):
        return MARGIN + (v - lo) / (hi - lo) * (WIDTH - 2 * MARGIN)

    def py(v):
        return HEIGHT - MARGIN - (v - lo) / (hi - lo) * (HEIGHT - 2 * MARGIN)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<title>{escape(title)}</title>',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line class="axis" x1="{_fmt(px(lo))}" y1="{_fmt(py(0))}" x2="{_fmt(px(hi))}" y2="{_fmt(py(0))}" stroke="#999"/>',
        f'<line class="axis" x1="{_fmt(px(0))}" y1="{_fmt(py(lo))}" x2="{_fmt(px(0))}" y2="{_fmt(py(hi))}" stroke="#999"/>',
        f'<text x="{WIDTH / 2:.0f}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="15" y="{HEIGHT / 2:.0f}" text-anchor="middle" '
        f'transform="rotate(-90 15 {HEIGHT / 2:.0f})">{escape(ylabel)}</text>',
        f'<text x="{WIDTH / 2:.0f}" y="25" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    for a, b in segments:
        pa, pb = points[a], points[b]
        out.append(
            f'<line class="partial-link" x1="{_fmt(px(pa.x))}" y1="{_fmt(py(pa.y))}" '
            f'x2="{_fmt(px(pb.x))}" y2="{_fmt(py(pb.y))}" stroke="#bbb" stroke-dasharray="3,2"/>'
        )
    for p in points:
        color = PALETTE[p.group % len(PALETTE)]
        x, y = _fmt(px(p.x)), _fmt(py(p.y))
        out.append(f'<circle class="{p.kind}" cx="{x}" cy="{y}" r="3" fill="{color}"/>')
        out.append(f'<text class="label" x="{x}" y="{_fmt(py(p.y) - 5)}" fill="{color}">{escape(p.label)}</text>')
    for i, name in enumerate(legend):
        y = 45 + 14 * i
        out.append(f'<rect x="{WIDTH - 150}" y="{y - 8}" width="8" height="8" fill="{PALETTE[i % len(PALETTE)]}"/>')
        out.append(f'<text x="{WIDTH - 138}" y="{y}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _axis_label(s, eigenvalues, shares):
    return f"Dim {s + 1} ({eigenvalues[s]:.2f}, {shares[s]:.2f}%)"


def word_map(words, samples, F, eigenvalues, shares, sample_names, dims=(0, 1)) -> str:
    a, b = dims
    pts = [Point(F[j, a], F[j, b], w, "word", int(g)) for j, (w, g) in enumerate(zip(words, samples))]
    return scatter_svg(
        pts, "Words", _axis_label(a, eigenvalues, shares), _axis_label(b, eigenvalues, shares), legend=sample_names
    )


def variable_map(columns, G, eigenvalues, shares, partial=None, sample_names=(), dims=(0, 1)) -> str:
    a, b = dims
    pts = [Point(G[k, a], G[k, b], c, "variable", len(sample_names)) for k, c in enumerate(columns)]
    segments = []
    if partial is not None:
        for l, name in enumerate(sample_names):
            for k, c in enumerate(columns):
                pts.append(Point(partial[l, k, a], partial[l, k, b], f"{c}.{name}", "partial", l))
                segments.append((k, len(pts) - 1))
    return scatter_svg(
        pts,
        "Variables",
        _axis_label(a, eigenvalues, shares),
        _axis_label(b, eigenvalues, shares),
        segments=segments,
        legend=sample_names,
    )


def group_map(sample_names, Lg, dims=(0, 1)) -> str:
    a, b = dims
    pts = [Point(Lg[l, a], Lg[l, b], n, "group", l) for l, n in enumerate(sample_names)]
    return scatter_svg(pts, "Representation of the sets", f"Dim {a + 1}", f"Dim {b + 1}")
