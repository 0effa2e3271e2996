"""Stable text formats: triangulations, maps, reports, index bounds.

Everything is JSON with a fixed key order and compact separators, so
canonical objects round-trip bit-exactly. Vertices are written as integer
homogeneous tuples [a1, ..., an, d]; the vertex pool is in lexicographic
point order and simplexes are 0-based sorted index lists.
"""

import json
from fractions import Fraction

from .errors import MvRetractError
from .geometry import Triangulation
from .pwl import AffinePiece, PwlMap
from .rationals import from_homogeneous, to_homogeneous
from .retracts import HomeoDomainCertificate, IndexBounds, MultiplicityReport


def _dumps(obj):
    return json.dumps(obj, separators=(",", ":"), sort_keys=True)


def rational_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def point_to_hom(p):
    return list(to_homogeneous(p))


def hom_to_point(vec):
    if not isinstance(vec, list) or len(vec) < 2 or not all(isinstance(a, int) for a in vec):
        raise MvRetractError(f"bad homogeneous vertex {vec!r}")
    return from_homogeneous(vec)


# -- triangulations ---------------------------------------------------------


def triangulation_to_obj(tri):
    return {
        "ambient_dim": tri.ambient_dim,
        "vertices": [point_to_hom(v) for v in tri.vertices],
        "maximal_simplexes": [list(s) for s in tri.maximal_simplexes],
    }


def triangulation_from_obj(obj):
    try:
        n = obj["ambient_dim"]
        vertices = [hom_to_point(v) for v in obj["vertices"]]
        pieces = [tuple(vertices[i] for i in s) for s in obj["maximal_simplexes"]]
    except (KeyError, TypeError, IndexError) as exc:
        raise MvRetractError(f"malformed triangulation record: {exc}") from exc
    return Triangulation.from_maximal(n, pieces, check=True)


def triangulation_to_json(tri):
    return _dumps(triangulation_to_obj(tri))


def triangulation_from_json(text):
    return triangulation_from_obj(json.loads(text))


# -- piecewise-linear maps --------------------------------------------------


def pwl_map_to_obj(f):
    pieces = []
    for s in f.domain.maximal_simplexes:
        rows = f.rows[tuple(s)]
        pieces.append([list(r.coeffs) + [r.const] for r in rows])
    return {
        "domain": triangulation_to_obj(f.domain),
        "codomain_dim": f.codomain_dim,
        "pieces": pieces,
    }


def pwl_map_from_obj(obj):
    domain = triangulation_from_obj(obj["domain"])
    m = obj["codomain_dim"]
    rows = {}
    maximal = domain.maximal_simplexes
    if len(obj["pieces"]) != len(maximal):
        raise MvRetractError("piece count differs from maximal simplex count")
    for s, piece in zip(maximal, obj["pieces"]):
        rows[tuple(s)] = tuple(AffinePiece(row[:-1], row[-1]) for row in piece)
    return PwlMap(domain, m, rows)


def pwl_map_to_json(f):
    return _dumps(pwl_map_to_obj(f))


def pwl_map_from_json(text):
    return pwl_map_from_obj(json.loads(text))


# -- reports ----------------------------------------------------------------


def _simplex_to_hom(verts):
    return [point_to_hom(v) for v in verts]


def certificate_to_obj(cert):
    return {
        "simplexes": [_simplex_to_hom(s) for s in cert.simplexes],
        "images": [_simplex_to_hom(s) for s in cert.images],
    }


def certificate_from_obj(obj):
    return HomeoDomainCertificate(
        simplexes=tuple(
            tuple(hom_to_point(v) for v in s) for s in obj["simplexes"]
        ),
        images=tuple(tuple(hom_to_point(v) for v in s) for s in obj["images"]),
    )


def report_to_obj(report):
    if report.verdict == "INFINITE":
        return {
            "verdict": "INFINITE",
            "witness": _simplex_to_hom(report.witness),
        }
    return {
        "verdict": "FINITE",
        "count": report.count,
        "certificates": [certificate_to_obj(c) for c in report.certificates],
    }


def report_from_obj(obj):
    if obj["verdict"] == "INFINITE":
        return MultiplicityReport(
            verdict="INFINITE",
            witness=tuple(hom_to_point(v) for v in obj["witness"]),
        )
    return MultiplicityReport(
        verdict="FINITE",
        count=obj["count"],
        certificates=tuple(certificate_from_obj(c) for c in obj["certificates"]),
    )


def report_to_json(report):
    return _dumps(report_to_obj(report))


def report_from_json(text):
    return report_from_obj(json.loads(text))


def index_bounds_to_obj(b):
    return {
        "lower": b.lower,
        "upper": "UNBOUNDED" if b.upper is None else b.upper,
        "min_component_measure": None
        if b.min_component_measure is None
        else rational_str(b.min_component_measure),
    }


def index_bounds_from_obj(obj):
    upper = obj["upper"]
    lam = obj["min_component_measure"]
    return IndexBounds(
        lower=obj["lower"],
        upper=None if upper == "UNBOUNDED" else upper,
        min_component_measure=None if lam is None else Fraction(lam),
    )


def index_bounds_to_json(b):
    return _dumps(index_bounds_to_obj(b))


def index_bounds_from_json(text):
    return index_bounds_from_obj(json.loads(text))
