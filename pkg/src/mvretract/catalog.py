"""Named constructions used across the test suite and the CLI.

The two-dimensional staircase family with Fibonacci denominators (whose
stage-n retraction admits at least 2^n inducing domains), the broken-line
domains W_p folded onto the coordinate cross L, and a handful of small
canonical retractions.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import terms
from .errors import UnknownFixtureError
from .geometry import Simplex, Triangulation, kuhn_triangulation
from .linalg import affine_map_through
from .pwl import AffinePiece, PwlMap, compose
from .rationals import from_homogeneous
from .retracts import ZRetraction, verify_pwl_retraction, verify_z_retraction

STAGE_CAP_DEFAULT = 6


def fib(k):
    """1, 1, 2, 3, 5, ... (1-based)."""
    a, b = 1, 1
    for _ in range(k - 1):
        a, b = b, a + b
    return a


@dataclass(frozen=True)
class FibonacciStage:
    n: int
    u_simplex: Simplex
    v_simplex: Simplex
    rho: PwlMap
    sigma: ZRetraction


def _hp(*vec):
    return from_homogeneous(vec)


def _pieces_to_map(piece_images):
    """Build a map from (vertices, aligned vertex images) triangles.

    The per-piece affine extension must come out with integer coefficients;
    anything else means the construction data is inconsistent and is raised
    rather than patched.
    """
    pieces = [verts for verts, _ in piece_images]
    tri = Triangulation.from_maximal(2, pieces)
    by_verts = {}
    for verts, images in piece_images:
        order = sorted(range(len(verts)), key=lambda i: verts[i])
        sorted_verts = tuple(verts[i] for i in order)
        sorted_images = tuple(images[i] for i in order)
        mat, off = affine_map_through(sorted_verts, sorted_images)
        by_verts[sorted_verts] = tuple(
            AffinePiece(mat[j], off[j]) for j in range(2)
        )
    rows = {tuple(s): by_verts[tri.points_of(s)] for s in tri.maximal_simplexes}
    return PwlMap(tri, 2, rows)


def _stage_rho(n):
    """The retraction of the stage n-1 triangle onto the stage n triangle."""
    o = (Fraction(0), Fraction(0))
    b = _hp(n, 1, fib(n + 1))
    prev_apex = _hp(n - 1, 1, fib(n))
    left_prev = _hp(1, 0, fib(n - 1))
    left_new = _hp(1, 0, fib(n))
    v_n = (o, b, prev_apex)
    u_n = (o, left_new, b)
    piece_images = [
        (v_n, (o, b, left_new)),
        (u_n, u_n),
    ]
    t_count = fib(n - 2) if n >= 3 else 0
    for j in range(t_count):
        lo = _hp(1, 0, fib(n - 1) + j)
        hi = _hp(1, 0, fib(n - 1) + j + 1)
        tri = (b, lo, hi)
        if j == t_count - 1:
            piece_images.append((tri, (b, o, hi)))
        else:
            piece_images.append((tri, (b, o, o)))
    return _pieces_to_map(piece_images), Simplex(u_n), Simplex(v_n)


_stage_cache = {}


def fibonacci_stage(n, cap=STAGE_CAP_DEFAULT):
    """Stage n of the staircase family: triangles, step map, composed retraction."""
    if n < 1:
        raise ValueError("stage index must be >= 1")
    if n > cap:
        raise ValueError(f"stage {n} exceeds the configured cap {cap}")
    if n in _stage_cache:
        return _stage_cache[n]
    if n == 1:
        tri = kuhn_triangulation(2)
        one = Fraction(1)
        u1 = Simplex([(0, 0), (one, 0), (one, one)])
        v1 = Simplex([(0, 0), (0, one), (one, one)])
        rows = {}
        for s in tri.maximal_simplexes:
            verts = tri.points_of(s)
            if verts == v1.vertices:
                rows[tuple(s)] = (AffinePiece((0, 1), 0), AffinePiece((1, 0), 0))
            else:
                rows[tuple(s)] = (AffinePiece((1, 0), 0), AffinePiece((0, 1), 0))
        rho = PwlMap(tri, 2, rows)
        stage = FibonacciStage(1, u1, v1, rho, verify_pwl_retraction(rho))
    else:
        prev = fibonacci_stage(n - 1, cap=max(cap, n))
        rho, u_n, v_n = _stage_rho(n)
        sigma = compose(rho, prev.sigma.map)
        stage = FibonacciStage(n, u_n, v_n, rho, verify_pwl_retraction(sigma))
    _stage_cache[n] = stage
    return stage


def wp_domain(p):
    """The broken line through (2/p, 1/p) and (1/(p-1), 0), p >= 3."""
    if p < 3:
        raise ValueError("wp_domain needs p >= 3")
    o = (Fraction(0), Fraction(0))
    top = (Fraction(0), Fraction(1))
    knee = (Fraction(2, p), Fraction(1, p))
    foot = (Fraction(1, p - 1), Fraction(0))
    right = (Fraction(1), Fraction(0))
    return Triangulation.from_maximal(
        2, [(top, o), (o, knee), (knee, foot), (foot, right)]
    )


def l_domain():
    """The union of the two coordinate edges at the origin of the square."""
    o = (Fraction(0), Fraction(0))
    return Triangulation.from_maximal(
        2, [((Fraction(0), Fraction(1)), o), (o, (Fraction(1), Fraction(0)))]
    )


_CANONICAL_TERMS = {
    "half_meet": ["x1 /\\ ~x1"],
    "half_tau": ["(x1 /\\ ~x1) /\\ ((~x1 (+) ~x1) (.) (~x1 (+) ~x1))"],
    "half_join": ["x1 \\/ ~x1"],
    "cyl_proj": ["x1", "0"],
    "L_fold": ["x1 (-) x2", "x2 (-) x1"],
}


def canonical_names():
    return sorted(_CANONICAL_TERMS)


def canonical(name):
    """A verified retraction for one of the stable fixture names."""
    if name not in _CANONICAL_TERMS:
        raise UnknownFixtureError(
            f"unknown fixture {name!r}; available: {', '.join(canonical_names())}"
        )
    return verify_z_retraction([terms.parse(t) for t in _CANONICAL_TERMS[name]])
