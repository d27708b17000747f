"""Deterministic SVG rendering of a planar complex in the unit square."""
from __future__ import annotations

from xml.sax.saxutils import escape

from .geometry import PlanarComplex


def _f(v: float) -> str:
    return repr(float(v))


def render_svg(c: PlanarComplex, stroke: float = 0.002) -> str:
    """One path per segment; labelled points become circles titled by their names."""
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1">',
           f'<g fill="none" stroke="black" stroke-width="{_f(stroke)}" stroke-linecap="round">']
    for i, j in c.segments:
        p, q = c.points[i], c.points[j]
        # flip y so that (0, 1) lands at the top-left corner
        out.append(f'<path d="M {_f(p.x)} {_f(1.0 - p.y)} L {_f(q.x)} {_f(1.0 - q.y)}"/>')
    out.append("</g>")
    names: dict[int, list[str]] = {}
    for name, idx in sorted(c.labels.items()):
        names.setdefault(idx, []).append(name)
    if names:
        out.append('<g fill="red">')
        for idx in sorted(names):
            p = c.points[idx]
            title = escape(", ".join(names[idx]))
            out.append(f'<circle cx="{_f(p.x)}" cy="{_f(1.0 - p.y)}" r="{_f(2 * stroke)}">'
                       f"<title>{title}</title></circle>")
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
