"""SVG drawing of a honeycomb, optionally with its flow.

The point (x, y) is drawn at x*(0, 1) + y*(-sqrt(3)/2, -1/2), so mu
lines are vertical, nu lines run down to the right and lambda lines up to
the right. Boundary rays are drawn with a fixed length past the outermost
point. Output depends only on the input, so it is byte-identical across
runs.
"""

from __future__ import annotations

import math
from collections import Counter
from xml.sax.saxutils import escape

from ..dual_flow import Label
from .flow import HoneyFlow, cut_set
from .geometry import RAY_DIRECTION, Honeycomb, Piece, atomize, piece_endpoints

SCALE = 24.0
MARGIN = 30.0
STROKE_GAP = 2.5
RAY_LENGTH = 3

CLASS_COLOURS = {"mu": "#1f4e99", "nu": "#2a7f3f", "lambda": "#a83232"}
LABEL_COLOURS = ("#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#9a6324", "#800000", "#469990")
MU_COLOUR = "#7f7f7f"


def embed(x: float, y: float) -> tuple[float, float]:
    """Plane position of (x, y), with the vertical axis pointing up."""
    return (-math.sqrt(3) / 2 * y, x - y / 2)


def _label_colour(label: Label) -> str:
    if label.is_mu:
        return MU_COLOUR
    return LABEL_COLOURS[(label.index - 1) % len(LABEL_COLOURS)]


def _fmt(v: float) -> str:
    out = f"{v:.2f}"
    return "0.00" if out == "-0.00" else out


def _piece_ends(piece: Piece, reach: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Both ends of a piece, cutting rays off ``reach`` units past their finite end."""
    a, b = piece_endpoints(piece)
    cls = piece[0]
    dx, dy = RAY_DIRECTION[cls]
    if a is None:
        # Infinite toward decreasing parameter: only nu rays point that way.
        a = (b[0] + dx * reach, b[1] + dy * reach)
    if b is None:
        b = (a[0] + dx * reach, a[1] + dy * reach)
    return a, b


class _Canvas:
    def __init__(self, points):
        xs = [embed(*p)[0] for p in points] or [0.0]
        ys = [embed(*p)[1] for p in points] or [0.0]
        self.x0, self.y1 = min(xs), max(ys)
        self.width = (max(xs) - self.x0) * SCALE + 2 * MARGIN
        self.height = (self.y1 - min(ys)) * SCALE + 2 * MARGIN

    def at(self, pt) -> tuple[float, float]:
        ex, ey = embed(*pt)
        return (ex - self.x0) * SCALE + MARGIN, (self.y1 - ey) * SCALE + MARGIN


def _offset_line(canvas: _Canvas, a, b, shift: float) -> tuple[float, float, float, float]:
    (x1, y1), (x2, y2) = canvas.at(a), canvas.at(b)
    length = math.hypot(x2 - x1, y2 - y1) or 1.0
    nx, ny = -(y2 - y1) / length * shift, (x2 - x1) / length * shift
    return x1 + nx, y1 + ny, x2 + nx, y2 + ny


def _line(coords, colour: str, width: float, title: str) -> str:
    x1, y1, x2, y2 = (_fmt(v) for v in coords)
    return (
        f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{colour}" stroke-width="{width}">'
        f"<title>{escape(title)}</title></line>"
    )


def render_svg(h: Honeycomb, fl: HoneyFlow | None = None) -> str:
    """Draw ``h``; a segment of multiplicity m becomes m parallel strokes.

    With a flow, each atomic piece gets one stroke per label it carries,
    coloured by label, instead of the plain class-coloured strokes.
    """
    pieces = atomize(h).pieces
    points = set(h.vertices) | set(cut_set(h))
    reach = RAY_LENGTH
    ends = {piece: _piece_ends(piece, reach) for piece, _ in pieces}
    canvas = _Canvas(sorted(points | {p for pair in ends.values() for p in pair}))

    body = []
    if fl is None:
        for piece, mult in pieces:
            a, b = ends[piece]
            for k in range(mult):
                shift = (k - (mult - 1) / 2) * STROKE_GAP
                body.append(_line(_offset_line(canvas, a, b, shift), CLASS_COLOURS[piece[0]], 1.2, f"{piece[0]} {piece[1]}"))
    else:
        loads = fl.refined(cut_set(h)).loads()
        for piece, _ in pieces:
            a, b = ends[piece]
            counts: Counter = loads.get(piece, Counter())
            labels = sorted(counts)
            for k, label in enumerate(labels):
                shift = (k - (len(labels) - 1) / 2) * STROKE_GAP
                title = f"{piece[0]} {piece[1]}: {label} x{counts[label]}"
                body.append(_line(_offset_line(canvas, a, b, shift), _label_colour(label), 1.5, title))

    vertex_count = Counter(h.vertices)
    for pt in sorted(vertex_count):
        cx, cy = canvas.at(pt)
        mult = vertex_count[pt]
        body.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(2.0 + 0.8 * (mult - 1))}" fill="black" data-multiplicity="{mult}">'
            f"<title>({pt[0]},{pt[1]},{pt[0] + pt[1]}) x{mult}</title></circle>"
        )

    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(canvas.width)}" height="{_fmt(canvas.height)}" '
        f'viewBox="0 0 {_fmt(canvas.width)} {_fmt(canvas.height)}">\n'
        '<rect width="100%" height="100%" fill="white"/>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"
