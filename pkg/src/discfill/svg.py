"""Deterministic SVG rendering: polygon outline, dashed axis, junction
dots, and translucent discs.  Same inputs always produce identical bytes."""

from __future__ import annotations

import numpy as np

from .geometry import Polygon
from .medial_axis import MedialAxis

_W = 640


def _fmt(v: float) -> str:
    return f"{v:.4f}"


class _Frame:
    def __init__(self, p: Polygon, width=_W, margin=0.05):
        lo, hi = p.bbox
        span = hi - lo
        pad = margin * float(np.max(span))
        self.lo = lo - pad
        self.span = span + 2 * pad
        self.scale = width / float(self.span[0])
        self.w = width
        self.h = float(self.span[1]) * self.scale

    def map(self, xy) -> tuple[float, float]:
        x = (xy[0] - self.lo[0]) * self.scale
        y = self.h - (xy[1] - self.lo[1]) * self.scale
        return x, y


def render_svg(
    p: Polygon,
    axis: MedialAxis | None = None,
    discs=None,
    samples_per_branch: int = 33,
) -> str:
    """SVG text for a polygon with optional medial axis and disc overlay."""
    fr = _Frame(p)
    out = [
        "<?xml version='1.0' encoding='UTF-8'?>",
        f"<svg xmlns='http://www.w3.org/2000/svg' width='{fr.w:.0f}' "
        f"height='{fr.h:.0f}' viewBox='0 0 {fr.w:.0f} {fr.h:.0f}'>",
        "<rect width='100%' height='100%' fill='white'/>",
    ]
    pts = " ".join(
        f"{_fmt(x)},{_fmt(y)}" for x, y in (fr.map(v) for v in p.vertices)
    )
    out.append(
        f"<polygon points='{pts}' fill='none' stroke='black' stroke-width='1.5'/>"
    )
    if discs is not None:
        for d in discs:
            cx, cy = fr.map((d.x, d.y))
            out.append(
                f"<circle cx='{_fmt(cx)}' cy='{_fmt(cy)}' r='{_fmt(d.r * fr.scale)}' "
                "fill='steelblue' fill-opacity='0.4' stroke='steelblue' stroke-width='0.8'/>"
            )
    if axis is not None:
        for b in axis.branches:
            n = 2 if b.case != "vertex_edge" else samples_per_branch
            ts = np.linspace(b.t0, b.t1, n)
            path = b.point(ts)
            coords = " ".join(
                f"{_fmt(x)},{_fmt(y)}" for x, y in (fr.map(q) for q in path)
            )
            out.append(
                f"<polyline points='{coords}' fill='none' stroke='seagreen' "
                "stroke-width='1.2' stroke-dasharray='6,4'/>"
            )
        for j in axis.junctions:
            cx, cy = fr.map(j.position)
            out.append(
                f"<circle cx='{_fmt(cx)}' cy='{_fmt(cy)}' r='3' fill='crimson'/>"
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
