"""Static SVG drawing of a network, with optional signature bits and gauge rays."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping
from xml.sax.saxutils import escape

from .core_model import WHITE, PlanarNetwork
from .geometry import GaugeFrame
from .rational import fmt

SCALE = 80
MARGIN = 40


def _num(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def _label(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else fmt(x)


def render_svg(network: PlanarNetwork, signature: Mapping[str, int] | None = None,
               edge_vectors: Mapping[str, tuple] | None = None,
               frame: GaugeFrame | None = None) -> str:
    """SVG 1.1 text; the output depends only on the arguments."""
    xs = [float(v.x) for v in network.vertices.values()]
    ys = [float(v.y) for v in network.vertices.values()]
    x0, x1 = min(xs), max(xs)
    top = max(ys + [1.0])
    width = (x1 - x0) * SCALE + 2 * MARGIN
    height = top * SCALE + 2 * MARGIN

    def px(vid):
        v = network.vertex(vid)
        return (float(v.x) - x0) * SCALE + MARGIN, (top - float(v.y)) * SCALE + MARGIN

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_num(width)}" '
        f'height="{_num(height)}" viewBox="0 0 {_num(width)} {_num(height)}">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" '
        'markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#333"/></marker></defs>',
    ]
    base_y = top * SCALE + MARGIN
    out.append(f'<line class="boundary" x1="0" y1="{_num(base_y)}" x2="{_num(width)}" '
               f'y2="{_num(base_y)}" stroke="#999" stroke-width="1"/>')
    if frame is not None:
        d = (float(frame.dx), float(frame.dy))
        length = 2 * (width + height)
        norm = (d[0] ** 2 + d[1] ** 2) ** 0.5
        for lab in network.source_labels:
            sx, sy = px(network.boundary(lab))
            ex, ey = sx + d[0] / norm * length, sy - d[1] / norm * length
            out.append(f'<line class="ray" x1="{_num(sx)}" y1="{_num(sy)}" x2="{_num(ex)}" y2="{_num(ey)}" '
                       'stroke="#c33" stroke-width="1" stroke-dasharray="6,4"/>')
    radius = 7
    for e in network.edges.values():
        (ax, ay), (bx, by) = px(e.tail), px(e.head)
        dx, dy = bx - ax, by - ay
        norm = (dx * dx + dy * dy) ** 0.5 or 1.0
        shrink = radius if not network.is_boundary(e.head) else 3
        tx, ty = bx - dx / norm * shrink, by - dy / norm * shrink
        out.append(f'<line class="edge" id="{escape(e.id)}" x1="{_num(ax)}" y1="{_num(ay)}" '
                   f'x2="{_num(tx)}" y2="{_num(ty)}" stroke="#333" stroke-width="1.5" '
                   'marker-end="url(#arrow)"/>')
        mx, my = (ax + bx) / 2 - dy / norm * 10, (ay + by) / 2 + dx / norm * 10
        text = f"{escape(e.id)}: {_label(e.weight)}"
        if signature is not None:
            text += f" [{signature[e.id]}]"
        out.append(f'<text class="edge-label" x="{_num(mx)}" y="{_num(my)}" font-size="10" '
                   f'text-anchor="middle">{text}</text>')
        if edge_vectors is not None and e.id in edge_vectors:
            vec = ", ".join(_label(Fraction(c)) for c in edge_vectors[e.id])
            out.append(f'<text class="edge-vector" x="{_num(mx)}" y="{_num(my + 11)}" font-size="8" '
                       f'text-anchor="middle">({escape(vec)})</text>')
    for vid, v in network.vertices.items():
        cx, cy = px(vid)
        if v.is_boundary:
            out.append(f'<circle class="node boundary" id="{escape(vid)}" cx="{_num(cx)}" cy="{_num(cy)}" '
                       'r="3" fill="#333"/>')
            out.append(f'<text x="{_num(cx)}" y="{_num(cy + 16)}" font-size="11" '
                       f'text-anchor="middle">{v.label}</text>')
        else:
            fill = "#fff" if v.color == WHITE else "#000"
            out.append(f'<circle class="node {v.color}" id="{escape(vid)}" cx="{_num(cx)}" cy="{_num(cy)}" '
                       f'r="{radius}" fill="{fill}" stroke="#000" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
