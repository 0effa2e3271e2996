"""SVG rendering of two-dimensional complexes.

Write-only figures: triangles are filled, edges stroked, vertices dotted and
labeled with their homogeneous coordinates. Certificate domains can be
highlighted in rotating colors on top of the base complex.
"""

from fractions import Fraction

from .errors import DimensionMismatchError
from .rationals import to_homogeneous

_SIZE = 640
_MARGIN = 60
_HIGHLIGHT = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628"]


def _proj(p):
    span = _SIZE - 2 * _MARGIN
    x = _MARGIN + float(p[0]) * span
    y = _SIZE - _MARGIN - float(p[1]) * span
    return f"{x:.2f}", f"{y:.2f}"


def _polygon(points, fill, opacity, stroke="none"):
    pts = " ".join(",".join(_proj(p)) for p in points)
    return (
        f'<polygon points="{pts}" fill="{fill}" fill-opacity="{opacity}" '
        f'stroke="{stroke}"/>'
    )


def _line(a, b, color="#333333", width="1.2"):
    xa, ya = _proj(a)
    xb, yb = _proj(b)
    return f'<line x1="{xa}" y1="{ya}" x2="{xb}" y2="{yb}" stroke="{color}" stroke-width="{width}"/>'


def _label(v):
    return "[" + ",".join(str(a) for a in to_homogeneous(v)) + "]"


def triangulation_svg(tri, highlights=None, title=None):
    """An SVG 1.1 document for a triangulation of (a part of) the unit square.

    ``highlights`` is an optional list of certificate-like simplex groups;
    each group is drawn with one color of the rotating palette.
    """
    if tri.ambient_dim != 2:
        raise DimensionMismatchError("SVG rendering needs ambient dimension 2")
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_SIZE}" height="{_SIZE}" '
        f'viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<rect width="{_SIZE}" height="{_SIZE}" fill="white"/>',
    ]
    if title:
        out.append(
            f'<text x="{_MARGIN}" y="{_MARGIN // 2 + 6}" font-size="16" '
            f'font-family="monospace">{title}</text>'
        )
    unit = [(0, 0), (1, 0), (1, 1), (0, 1)]
    out.append(_polygon([tuple(map(Fraction, p)) for p in unit], "none", "0", "#bbbbbb"))
    maximal = tri.maximal_point_tuples()
    for verts in maximal:
        if len(verts) == 3:
            out.append(_polygon(verts, "#9ecae1", "0.35"))
    for group_idx, group in enumerate(highlights or []):
        color = _HIGHLIGHT[group_idx % len(_HIGHLIGHT)]
        for verts in group:
            if any(len(v) != 2 for v in verts):
                raise DimensionMismatchError(
                    "highlight simplexes must live in ambient dimension 2"
                )
            if len(verts) == 3:
                out.append(_polygon(verts, color, "0.45"))
            elif len(verts) == 2:
                out.append(_line(verts[0], verts[1], color, "4"))
    edges = set()
    for verts in maximal:
        for i in range(len(verts)):
            for j in range(i + 1, len(verts)):
                edges.add(tuple(sorted((verts[i], verts[j]))))
    for a, b in sorted(edges):
        out.append(_line(a, b))
    for v in tri.vertices:
        x, y = _proj(v)
        out.append(f'<circle cx="{x}" cy="{y}" r="3" fill="#222222"/>')
        out.append(
            f'<text x="{float(x) + 5:.2f}" y="{float(y) - 5:.2f}" font-size="11" '
            f'font-family="monospace">{_label(v)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out)
