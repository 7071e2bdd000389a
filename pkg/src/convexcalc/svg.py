"""SVG rendering of dividing sets.

The drawing is schematic: boundary components are circles (or the square
for a torus), endpoints sit evenly spaced on their boundary, and each
dividing curve is one dashed ``<path>``.  Regions are listed in a legend
with their sign and Euler characteristic as data attributes, so the
picture can be checked mechanically.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape, quoteattr

from .farey import Slope
from .surfaces import DividingSet

__all__ = ["render_dividing_set", "render_torus"]

_W, _H = 420, 300
_STYLE = 'fill="none" stroke="#c0392b" stroke-width="2" stroke-dasharray="6 4"'

# boundary id -> (cx, cy, r)
_LAYOUTS = {
    "disk": {1: (150, 150, 120)},
    "annulus": {1: (150, 150, 120), 2: (150, 150, 50)},
    "pants": {1: (150, 150, 130), 2: (100, 150, 30), 3: (200, 150, 30)},
    "punctured-torus": {1: (150, 150, 40)},
}


def _fmt(x):
    return f"{x:.2f}".rstrip("0").rstrip(".")


def _point(circle, k, n, outer):
    cx, cy, r = circle
    # outer boundary counterclockwise, inner ones clockwise, as seen in
    # the induced boundary orientation
    theta = 2 * math.pi * (k + 0.5) / n
    if not outer:
        theta = -theta
    return cx + r * math.cos(theta), cy - r * math.sin(theta)


def _arc_path(p0, p1, center):
    # cubic pulled toward the middle of the surface
    cx, cy = center
    c0 = ((p0[0] + cx) / 2, (p0[1] + cy) / 2)
    c1 = ((p1[0] + cx) / 2, (p1[1] + cy) / 2)
    return (f"M {_fmt(p0[0])} {_fmt(p0[1])} C {_fmt(c0[0])} {_fmt(c0[1])} "
            f"{_fmt(c1[0])} {_fmt(c1[1])} {_fmt(p1[0])} {_fmt(p1[1])}")


def _circle_path(cx, cy, r):
    return (f"M {_fmt(cx + r)} {_fmt(cy)} "
            f"A {_fmt(r)} {_fmt(r)} 0 1 0 {_fmt(cx - r)} {_fmt(cy)} "
            f"A {_fmt(r)} {_fmt(r)} 0 1 0 {_fmt(cx + r)} {_fmt(cy)} Z")


def _legend(ds: DividingSet, x0=310):
    out = [f'<g class="regions">']
    for k, r in enumerate(ds.regions):
        y = 30 + 22 * k
        out.append(
            f'<text class="region" x="{x0}" y="{y}" data-region={quoteattr(r.id)} '
            f'data-sign={quoteattr(r.sign)} data-chi="{r.chi}">'
            f'{escape(r.sign)} {escape(r.id)} (chi {r.chi})</text>')
    out.append("</g>")
    return out


def render_dividing_set(ds: DividingSet) -> str:
    """A standalone SVG document for any supported surface."""
    if ds.surface == "torus":
        slopes = {c.slope for c in ds.closed_curves}
        if len(slopes) != 1:
            raise ValueError("a torus drawing needs parallel dividing curves")
        return render_torus(slopes.pop(), len(ds.closed_curves) // 2, ds)
    layout = _LAYOUTS[ds.surface]
    counts = ds.endpoint_counts
    body = []
    for b, (cx, cy, r) in layout.items():
        body.append(f'<circle class="boundary" data-boundary="{b}" '
                    f'cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="black"/>')
    center = (layout[1][0], layout[1][1])
    if ds.surface == "annulus":
        center = (150, 150 - 85)  # pull caps away from the hole
    for j, arc in enumerate(ds.arcs):
        pts = []
        for e in (arc.start, arc.end):
            pts.append(_point(layout[e.boundary], e.index,
                              counts[e.boundary], e.boundary == 1))
        body.append(f'<path class="dividing-curve" data-arc="{j}" '
                    f'd="{_arc_path(pts[0], pts[1], center)}" {_STYLE}/>')
    for j, c in enumerate(ds.closed_curves):
        if c.trivial or not c.encloses:
            cx, cy, r = 150, 60 + 14 * j, 10
        else:
            pts = [layout[b] for b in sorted(c.encloses) if b in layout]
            cx = sum(p[0] for p in pts) / len(pts)
            cy = sum(p[1] for p in pts) / len(pts)
            r = max(math.hypot(p[0] - cx, p[1] - cy) + p[2] for p in pts) + 12
        body.append(f'<path class="dividing-curve" data-closed={quoteattr(c.label)} '
                    f'd="{_circle_path(cx, cy, r)}" {_STYLE}/>')
    return _document(ds.surface, body + _legend(ds))


def render_torus(slope: Slope, pairs: int, ds: DividingSet = None) -> str:
    """The square with opposite sides identified and 2*pairs lines of slope."""
    x0, y0, side = 30, 30, 240
    body = [f'<rect class="boundary" x="{x0}" y="{y0}" width="{side}" '
            f'height="{side}" fill="none" stroke="black"/>']
    n = 2 * pairs
    for k in range(n):
        # lines through evenly spaced base points, clipped to the square by
        # drawing them as segments of the covering line
        t = (k + 0.5) / n
        if slope.is_infinite:
            a, b = (t, 0.0), (t, 1.0)
        else:
            v = slope.value
            if v == 0:
                a, b = (0.0, t), (1.0, t)
            else:
                a, b = _clip_line(t, float(v))
        pa = (x0 + side * a[0], y0 + side * (1 - a[1]))
        pb = (x0 + side * b[0], y0 + side * (1 - b[1]))
        body.append(
            f'<path class="dividing-curve" data-slope="{slope}" '
            f'd="M {_fmt(pa[0])} {_fmt(pa[1])} L {_fmt(pb[0])} {_fmt(pb[1])}" '
            f'{_STYLE}/>')
        mid = ((pa[0] + pb[0]) / 2 + 4, (pa[1] + pb[1]) / 2 - 4)
        body.append(f'<text class="slope-label" x="{_fmt(mid[0])}" '
                    f'y="{_fmt(mid[1])}">{slope}</text>')
    if ds is not None:
        body += _legend(ds)
    return _document("torus", body)


def _clip_line(t, v):
    # the line y = v * (x - t) + 1/2 ... restricted to the unit square
    pts = []
    for x in (0.0, 1.0):
        y = 0.5 + v * (x - t)
        if 0 <= y <= 1:
            pts.append((x, y))
    for y in (0.0, 1.0):
        x = t + (y - 0.5) / v
        if 0 <= x <= 1:
            pts.append((x, y))
    pts = sorted(set(pts))
    return pts[0], pts[-1]


def _document(surface, body):
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" data-surface={quoteattr(surface)}>',
        *("  " + b for b in body),
        "</svg>",
    ]
    return "\n".join(lines) + "\n"
