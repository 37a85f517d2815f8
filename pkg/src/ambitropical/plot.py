"""SVG cross-sections of cones in R^3 taken modulo constants.

Each cell is intersected, exactly, with the plane x3 = 0 and with a Hilbert
ball (a hexagon in that plane); the resulting polygon, segment or point is
then mapped isometrically onto the plane orthogonal to (1,1,1).  Only the
final coordinates are irrational; they are computed with ``decimal`` and
rounded half-to-even to 6 digits so the output is byte-stable.
"""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import List, Sequence, Tuple

from .alcoved import AlcovedPoly
from .errors import UnsupportedDimension
from .trop_core import NEG_INF

COLORS = {"max-cone": "#9ecae1", "min-cone": "#fdd0a2", "ambitropical": "#a1d99b"}
STROKES = {"max-cone": "#3182bd", "min-cone": "#e6550d", "ambitropical": "#31a354"}
LAYER_ORDER = ("max-cone", "min-cone", "ambitropical")
CANVAS = 400

Point2 = Tuple[Fraction, Fraction]


def _clip(poly: List[Point2], a: Point2, c) -> List[Point2]:
    """Keep the part of ``poly`` where a . p >= c."""
    f = lambda p: a[0] * p[0] + a[1] * p[1] - c
    out = []
    for k, p in enumerate(poly):
        q = poly[(k + 1) % len(poly)]
        fp, fq = f(p), f(q)
        if fp >= 0:
            out.append(p)
        if (fp > 0 > fq) or (fp < 0 < fq):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def section(P: AlcovedPoly, radius) -> List[Point2]:
    """Vertices (x1, x2) of P cap {x3 = 0} cap {hilbert(x) <= radius}."""
    if P.n != 3:
        raise UnsupportedDimension("plots need n = 3", n=P.n)
    R = Fraction(radius)
    poly = [(R, Fraction(0)), (R, R), (Fraction(0), R), (-R, Fraction(0)), (-R, -R), (Fraction(0), -R)]
    # x_i - x_j >= c as a half-plane in (x1, x2) with x3 = 0
    unit = [(1, 0), (0, 1), (0, 0)]
    for i in range(3):
        for j in range(3):
            c = P.star[i][j]
            if i == j or c == NEG_INF:
                continue
            a = (unit[i][0] - unit[j][0], unit[i][1] - unit[j][1])
            poly = _clip(poly, a, Fraction(c))
            if not poly:
                return []
    return _dedupe(poly)


def _dedupe(poly):
    out = []
    for p in poly:
        if not out or p != out[-1]:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    if len(out) >= 3:
        # drop collinear middle vertices
        keep = []
        for k, p in enumerate(out):
            a, b = out[k - 1], out[(k + 1) % len(out)]
            cross = (p[0] - a[0]) * (b[1] - a[1]) - (p[1] - a[1]) * (b[0] - a[0])
            if cross != 0:
                keep.append(p)
        if len(keep) < 3:
            # degenerate: keep the two extreme points of a segment
            pts = sorted(set(out))
            return [pts[0], pts[-1]]
        out = keep
    return out


def _fmt(d: Decimal) -> str:
    q = d.quantize(Decimal("0.000001"), rounding=ROUND_HALF_EVEN)
    if q == 0:
        q = Decimal("0.000000")
    return format(q, "f")


class Canvas:
    def __init__(self, radius):
        self.radius = Fraction(radius) if radius else Fraction(1)
        self.items: List[str] = []

    def xy(self, p: Point2) -> Tuple[str, str]:
        x1, x2 = p
        with localcontext() as ctx:
            ctx.prec = 40
            s2, s6 = Decimal(2).sqrt(), Decimal(6).sqrt()
            num = lambda f: Decimal(f.numerator) / Decimal(f.denominator)
            u = num(x1 - x2) / s2
            v = num(x1 + x2) / s6
            scale = Decimal(CANVAS) * Decimal("0.45") / (num(self.radius) * Decimal("0.82"))
            half = Decimal(CANVAS) / 2
            return _fmt(half + u * scale), _fmt(half - v * scale)

    def add(self, kind: str, pts: Sequence[Point2]):
        fill, stroke = COLORS[kind], STROKES[kind]
        coords = [self.xy(p) for p in pts]
        if len(pts) >= 3:
            path = " ".join(f"{x},{y}" for x, y in coords)
            self.items.append(f'<polygon class="{kind}" points="{path}" fill="{fill}" '
                              f'fill-opacity="0.7" stroke="{stroke}" stroke-width="1.5"/>')
        elif len(pts) == 2:
            (xa, ya), (xb, yb) = coords
            self.items.append(f'<line class="{kind}" x1="{xa}" y1="{ya}" x2="{xb}" y2="{yb}" '
                              f'stroke="{stroke}" stroke-width="3"/>')
        elif len(pts) == 1:
            x, y = coords[0]
            self.items.append(f'<circle class="{kind}" cx="{x}" cy="{y}" r="4" fill="{stroke}"/>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" '
                f'viewBox="0 0 {CANVAS} {CANVAS}">\n'
                f'<rect width="{CANVAS}" height="{CANVAS}" fill="white"/>\n')
        return head + "\n".join(self.items) + "\n</svg>\n"


def plot_layers(layers, radius) -> str:
    """``layers`` maps a kind to a list of alcoved cells; draw order is fixed."""
    canvas = Canvas(radius)
    for kind in LAYER_ORDER:
        shapes = [section(P, canvas.radius if radius else 0) for P in layers.get(kind, [])]
        # larger shapes first so faces and vertices stay visible
        for pts in sorted((s for s in shapes if s), key=lambda s: (-len(s), s)):
            canvas.add(kind, pts)
    return canvas.render()
