"""Deterministic SVG 1.1 drawings of tree models with optional overlays."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .dendroid import DendroidApprox, Point

SIZE = 800
MARGIN = 24


class _View:
    def __init__(self, box: tuple[Fraction, Fraction, Fraction, Fraction]):
        x0, y0, x1, y1 = box
        span = max(x1 - x0, y1 - y0) or Fraction(1)
        self.x0, self.y1 = x0, y1
        self.scale = Fraction(SIZE - 2 * MARGIN) / span
        self.w = float((x1 - x0) * self.scale) + 2 * MARGIN
        self.h = float((y1 - y0) * self.scale) + 2 * MARGIN

    def xy(self, q: Point) -> str:
        # y grows downward in SVG
        x = float((q[0] - self.x0) * self.scale) + MARGIN
        y = float((self.y1 - q[1]) * self.scale) + MARGIN
        return f"{x:.2f},{y:.2f}"


def _box(m: DendroidApprox, overlays: Sequence[Sequence[Point]]):
    pts = [q for line in overlays for q in line]
    box = m.bbox()
    if box is not None:
        pts += [(box[0], box[1]), (box[2], box[3])]
    if not pts:
        return (Fraction(0), Fraction(0), Fraction(1), Fraction(1))
    xs, ys = [q[0] for q in pts], [q[1] for q in pts]
    return min(xs), min(ys), max(xs), max(ys)


def render_svg(m: DendroidApprox, overlays: Sequence[Sequence[Point]] = (),
               closed: bool = False, title: str = "") -> str:
    """Edges as polylines, p as a square, marked endpoints as dots, overlays in red."""
    overlays = [list(o) for o in overlays if o]
    view = _View(_box(m, overlays))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{view.w:.0f}" '
        f'height="{view.h:.0f}" viewBox="0 0 {view.w:.2f} {view.h:.2f}">',
    ]
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    out.append('<rect width="100%" height="100%" fill="white"/>')
    out.append('<g fill="none" stroke="black" stroke-width="0.8" stroke-linejoin="round">')
    for a, b, _ in m.edges:
        pts = " ".join(view.xy(q) for q in m.edge_points(a, b))
        out.append(f'<polyline points="{pts}"/>')
    out.append("</g>")
    out.append('<g fill="#1f5fbf">')
    for n in sorted(m.endpoints):
        if n == m.initial:
            continue
        x, y = view.xy(m.nodes[n]).split(",")
        out.append(f'<circle cx="{x}" cy="{y}" r="1.6"/>')
    out.append("</g>")
    if m.initial is not None:
        x, y = (float(v) for v in view.xy(m.nodes[m.initial]).split(","))
        out.append(f'<rect x="{x - 3:.2f}" y="{y - 3:.2f}" width="6" height="6" fill="#c00000"/>')
    if overlays:
        out.append('<g fill="none" stroke="#d02020" stroke-width="1.2">')
        tag = "polygon" if closed else "polyline"
        for line in overlays:
            out.append(f'<{tag} points="{" ".join(view.xy(q) for q in line)}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
