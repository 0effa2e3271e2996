"""Rational simplexes and simplicial complexes with exact predicates.

The module provides the geometric substrate for the whole package:
regularity of simplexes (integer homogeneous vertex vectors extending to a
lattice basis), Farey mediants and blow-ups, hyperplane refinement by a
recursive pulling triangulation, desingularization into regular
triangulations, Lebesgue measure, closed-domain and interior-connectivity
decisions, and exact polyhedron comparison.

Points are tuples of Fraction; an affine functional h is a pair
(coeffs, const) meaning h(x) = coeffs . x + const. All subdivision code uses
the pulling rule (cone from the lexicographically least vertex), which keeps
subdivisions compatible across shared faces and output canonical.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial, gcd

from .errors import (
    BlowUpCapExceededError,
    DimensionMismatchError,
    ImproperComplexError,
    NotClosedDomainError,
    NotRegularError,
    PointOutsideSupportError,
    ZeroDimensionalError,
)
from .linalg import (
    affine_hull_functionals,
    det,
    mat_rank,
    primitive_functional,
    rref,
    solve_unique,
)
from .rationals import denominator, from_homogeneous, is_basis_extendable, to_homogeneous


def normalize_point(p):
    return tuple(Fraction(c) for c in p)


def eval_functional(h, p):
    coeffs, const = h
    return sum((a * x for a, x in zip(coeffs, p)), Fraction(const))


def functional_key(h):
    """Dedup key for a functional: primitive integers up to overall sign."""
    coeffs, const = primitive_functional(*h)
    return coeffs, const


def barycentric(verts, p):
    """Barycentric coordinates of p in the simplex, or None if p is off its hull."""
    n = len(verts[0])
    rows = [[Fraction(v[i]) for v in verts] for i in range(n)]
    rows.append([Fraction(1)] * len(verts))
    return solve_unique(rows, list(p) + [Fraction(1)])


def point_in_simplex(p, verts):
    lam = barycentric(verts, p)
    return lam is not None and all(x >= 0 for x in lam)


def affinely_independent(points):
    if len(points) == 1:
        return True
    v0 = points[0]
    rows = [[Fraction(a) - Fraction(b) for a, b in zip(v, v0)] for v in points[1:]]
    return mat_rank(rows) == len(points) - 1


@dataclass(frozen=True)
class Simplex:
    """A rational simplex given by its (lexicographically sorted) vertices."""

    vertices: tuple

    def __init__(self, vertices):
        vs = tuple(sorted(normalize_point(v) for v in vertices))
        if not vs:
            raise ValueError("a simplex needs at least one vertex")
        n = len(vs[0])
        if any(len(v) != n for v in vs):
            raise DimensionMismatchError("vertices of unequal ambient dimension")
        if len(set(vs)) != len(vs) or not affinely_independent(vs):
            raise ValueError(f"vertices are not affinely independent: {vs}")
        object.__setattr__(self, "vertices", vs)

    @property
    def ambient_dim(self):
        return len(self.vertices[0])

    @property
    def dim(self):
        return len(self.vertices) - 1


def _as_vertex_tuple(s):
    if isinstance(s, Simplex):
        return s.vertices
    return tuple(sorted(normalize_point(v) for v in s))


# ---------------------------------------------------------------------------
# membership machinery: hull equations and extended barycentric functionals


def simplex_hull_functionals(verts):
    """Canonical functionals vanishing exactly on the affine hull."""
    return affine_hull_functionals(verts)


def simplex_facet_functionals(verts):
    """Affine functionals on R^n restricting to the barycentric coordinates.

    Extension off the hull is along the orthogonal complement, so the
    functionals stay rational and the sign tests remain meaningful for points
    near (but off) lower-dimensional simplexes.
    """
    verts = [normalize_point(v) for v in verts]
    n = len(verts[0])
    m = len(verts) - 1
    if m == 0:
        return [((Fraction(0),) * n, Fraction(1))]
    v0 = verts[0]
    bcols = [[verts[j + 1][i] - v0[i] for i in range(n)] for j in range(m)]
    gram = [[sum(bcols[a][i] * bcols[b][i] for i in range(n)) for b in range(m)] for a in range(m)]
    out = []
    total_coeffs = [Fraction(0)] * n
    total_const = Fraction(0)
    for j in range(m):
        target = [Fraction(1) if a == j else Fraction(0) for a in range(m)]
        w = solve_unique(gram, target)
        coeffs = tuple(sum(w[a] * bcols[a][i] for a in range(m)) for i in range(n))
        const = -sum(c * x for c, x in zip(coeffs, v0))
        out.append((coeffs, const))
        total_coeffs = [t + c for t, c in zip(total_coeffs, coeffs)]
        total_const += const
    lam0 = (tuple(-c for c in total_coeffs), Fraction(1) - total_const)
    return [lam0] + out


@dataclass(frozen=True)
class _Membership:
    eqs: tuple
    ineqs: tuple

    def contains(self, p):
        return all(eval_functional(h, p) == 0 for h in self.eqs) and all(
            eval_functional(h, p) >= 0 for h in self.ineqs
        )


def simplex_membership(verts):
    return _Membership(
        tuple(simplex_hull_functionals(verts)),
        tuple(simplex_facet_functionals(verts)),
    )


# ---------------------------------------------------------------------------
# exact clipping of a simplex by a hyperplane (pulling triangulation)


def _cut_point(u, w, hu, hw):
    t = hu / (hu - hw)
    return tuple(a + t * (b - a) for a, b in zip(u, w))


def clip_simplex(verts, h, mode):
    """Triangulate conv(verts) cap {h <= 0}, {h >= 0}, or {h = 0}.

    Returns a list of simplexes (sorted vertex tuples) of the clipped set's
    own dimension; the empty list when the set is empty. Subdivisions of a
    common face computed from different parent simplexes coincide, because
    the construction only depends on the face and the functional.
    """
    verts = tuple(sorted(normalize_point(v) for v in verts))
    if mode == "ge":
        coeffs, const = h
        return clip_simplex(verts, (tuple(-c for c in coeffs), -const), "le")
    vals = [eval_functional(h, v) for v in verts]
    if mode == "le":
        if all(v <= 0 for v in vals):
            return [verts]
        if all(v >= 0 for v in vals):
            zeros = tuple(v for v, x in zip(verts, vals) if x == 0)
            return [zeros] if zeros else []
        return _clip_strict(verts, vals, h, "le")
    if mode == "eq":
        if all(v == 0 for v in vals):
            return [verts]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            zeros = tuple(v for v, x in zip(verts, vals) if x == 0)
            return [zeros] if zeros else []
        return _clip_strict(verts, vals, h, "eq")
    raise ValueError(f"unknown clip mode {mode!r}")


def _side_vertex_set(verts, vals, mode):
    keep = [v for v, x in zip(verts, vals) if (x <= 0 if mode == "le" else x == 0)]
    cuts = []
    for i, u in enumerate(verts):
        for j in range(i + 1, len(verts)):
            w = verts[j]
            if vals[i] * vals[j] < 0:
                cuts.append(_cut_point(u, w, vals[i], vals[j]))
    return tuple(sorted(set(keep + cuts)))


def _clip_strict(verts, vals, h, mode):
    d = len(verts) - 1
    target_dim = d if mode == "le" else d - 1
    vset = _side_vertex_set(verts, vals, mode)
    if len(vset) == target_dim + 1:
        return [vset]
    w0 = vset[0]
    facets = []
    if mode == "le":
        plane_vs = _side_vertex_set(verts, vals, "eq")
        facets.append((plane_vs, verts, "eq"))
        for i in range(d + 1):
            g = verts[:i] + verts[i + 1 :]
            gvals = vals[:i] + vals[i + 1 :]
            if any(x < 0 for x in gvals):
                facets.append((_side_vertex_set(g, gvals, "le"), g, "le"))
    else:
        seen = set()
        for i in range(d + 1):
            g = verts[:i] + verts[i + 1 :]
            gvals = vals[:i] + vals[i + 1 :]
            fv = _side_vertex_set(g, gvals, "eq")
            if len(fv) < target_dim or fv in seen:
                continue
            if _affine_dim(fv) != target_dim - 1:
                continue
            seen.add(fv)
            facets.append((fv, g, "eq"))
    out = []
    for fv, base, fmode in facets:
        if w0 in fv:
            continue
        for piece in clip_simplex(base, h, fmode):
            if len(piece) == target_dim:
                out.append(tuple(sorted((w0,) + piece)))
    return out


def _affine_dim(points):
    if not points:
        return -1
    if len(points) == 1:
        return 0
    v0 = points[0]
    rows = [[a - b for a, b in zip(v, v0)] for v in points[1:]]
    return mat_rank(rows)


# ---------------------------------------------------------------------------
# triangulations


@dataclass(frozen=True)
class Triangulation:
    """A finite simplicial complex with rational vertices.

    ``vertices`` is the lexicographically sorted vertex pool and
    ``simplexes`` the face-closed set of index tuples (ascending indices).
    """

    ambient_dim: int
    vertices: tuple
    simplexes: frozenset

    @classmethod
    def from_maximal(cls, ambient_dim, pieces, check=False):
        pieces = [_as_vertex_tuple(p) for p in pieces]
        pool = sorted({v for piece in pieces for v in piece})
        if any(len(v) != ambient_dim for v in pool):
            raise DimensionMismatchError("vertex dimension differs from ambient")
        for piece in pieces:
            if not affinely_independent(piece):
                raise ImproperComplexError(f"degenerate simplex {piece}")
        index = {v: i for i, v in enumerate(pool)}
        simplexes = set()
        for piece in pieces:
            idx = tuple(sorted(index[v] for v in piece))
            for mask in range(1, 1 << len(idx)):
                face = tuple(idx[i] for i in range(len(idx)) if mask >> i & 1)
                simplexes.add(face)
        tri = cls(ambient_dim, tuple(pool), frozenset(simplexes))
        if check:
            tri.validate_properness()
        return tri

    @classmethod
    def empty(cls, ambient_dim):
        return cls(ambient_dim, (), frozenset())

    @property
    def is_empty(self):
        return not self.simplexes

    def points_of(self, idx_tuple):
        return tuple(self.vertices[i] for i in idx_tuple)

    @cached_property
    def maximal_simplexes(self):
        """Index tuples not contained in another simplex, sorted.

        Face closure means a non-maximal simplex is a facet of some simplex,
        so one pass marking facets suffices.
        """
        non_max = set()
        for s in self.simplexes:
            for i in range(len(s)):
                non_max.add(s[:i] + s[i + 1 :])
        return sorted(s for s in self.simplexes if s not in non_max)

    def maximal_point_tuples(self):
        return [self.points_of(s) for s in self.maximal_simplexes]

    @cached_property
    def _maximal_lookup(self):
        out = []
        for s in self.maximal_simplexes:
            pts = self.points_of(s)
            out.append((s, _bbox(pts), simplex_membership(pts)))
        return out

    def find_containing_maximal(self, p):
        p = normalize_point(p)
        for s, (lo, hi), member in self._maximal_lookup:
            if all(a <= x <= b for a, x, b in zip(lo, p, hi)) and member.contains(p):
                return s
        return None

    def contains_point(self, p):
        return self.find_containing_maximal(p) is not None

    def validate_properness(self):
        """Check pairwise intersections are common faces; raise otherwise."""
        maxima = self.maximal_simplexes
        pts = [self.points_of(s) for s in maxima]
        boxes = [_bbox(t) for t in pts]
        for i in range(len(maxima)):
            for j in range(i + 1, len(maxima)):
                if not _bbox_overlap(boxes[i], boxes[j]):
                    continue
                shared = tuple(sorted(set(maxima[i]) & set(maxima[j])))
                shared_pts = self.points_of(shared) if shared else ()
                for v in simplex_pair_intersection_vertices(pts[i], pts[j]):
                    if not shared_pts or not point_in_simplex(v, shared_pts):
                        raise ImproperComplexError(
                            f"simplexes {pts[i]} and {pts[j]} overlap off their common face"
                        )


def _bbox(verts):
    lo = tuple(min(v[i] for v in verts) for i in range(len(verts[0])))
    hi = tuple(max(v[i] for v in verts) for i in range(len(verts[0])))
    return lo, hi


def _bbox_overlap(a, b):
    return all(a[0][i] <= b[1][i] and b[0][i] <= a[1][i] for i in range(len(a[0])))


def kuhn_triangulation(n):
    """The standard unimodular triangulation of the unit n-cube."""
    from itertools import permutations

    pieces = []
    for perm in permutations(range(n)):
        vert = [Fraction(0)] * n
        chain = [tuple(vert)]
        for i in perm:
            vert[i] = Fraction(1)
            chain.append(tuple(vert))
        pieces.append(tuple(chain))
    return Triangulation.from_maximal(n, pieces)


# ---------------------------------------------------------------------------
# regularity, mediants, blow-ups


def is_regular(simplex):
    """Whether the homogeneous vertex vectors extend to a lattice basis."""
    verts = _as_vertex_tuple(simplex)
    return is_basis_extendable([to_homogeneous(v) for v in verts])


def is_regular_triangulation(tri):
    # a face of a regular simplex is regular, so maximal simplexes suffice
    return all(is_regular(t) for t in tri.maximal_point_tuples())


def is_strongly_regular_triangulation(tri):
    if not is_regular_triangulation(tri):
        raise NotRegularError("triangulation has a non-regular simplex")
    for t in tri.maximal_point_tuples():
        g = 0
        for v in t:
            g = gcd(g, denominator(v))
        if g != 1:
            return False
    return True


def mediant_point(verts):
    """Affine correspondent of the sum of the homogeneous vertex vectors."""
    hom = [to_homogeneous(v) for v in verts]
    total = [sum(col) for col in zip(*hom)]
    return from_homogeneous(total)


def farey_mediant(simplex):
    verts = _as_vertex_tuple(simplex)
    if len(verts) < 2:
        raise ZeroDimensionalError("mediant of a single point is undefined")
    if not is_regular(verts):
        raise NotRegularError(f"simplex {verts} is not regular")
    return mediant_point(verts)


def simplest_interior_point(verts):
    """Minimal-denominator point of the relative interior, lex-least on ties.

    The mediant witnesses an interior point, so its denominator bounds the
    search; scanning scaled lattice points below that bound is exact.
    """
    verts = [normalize_point(v) for v in verts]
    if len(verts) == 1:
        return verts[0]
    bound = denominator(mediant_point(verts))
    n = len(verts[0])
    lo = [min(v[i] for v in verts) for i in range(n)]
    hi = [max(v[i] for v in verts) for i in range(n)]
    for d in range(1, bound + 1):
        best = None
        axes = []
        for i in range(n):
            first = (lo[i] * d).__ceil__()
            last = (hi[i] * d).__floor__()
            axes.append(range(first, last + 1))
        from itertools import product

        for a in product(*axes):
            p = tuple(Fraction(x, d) for x in a)
            if denominator(p) != d or (best is not None and p >= best):
                continue
            lam = barycentric(verts, p)
            if lam is not None and all(x > 0 for x in lam):
                best = p
        if best is not None:
            return best
    raise AssertionError("mediant denominator bound failed")


def blow_up(tri, b):
    """Stellar subdivision of the complex at a point of its support.

    Simplexes containing b are replaced by cones from b over their faces
    avoiding b. The replacement set is face-closed by construction and cone
    vertices are affinely independent (b is off the hull of any face not
    containing it), so the new complex is assembled directly.
    """
    b = normalize_point(b)
    home = tri.find_containing_maximal(b)
    if home is None:
        raise PointOutsideSupportError(f"{b} is outside the support")
    lam = barycentric(tri.points_of(home), b)
    carrier = frozenset(i for i, x in zip(home, lam) if x > 0)
    new_pool = tuple(sorted(set(tri.vertices) | {b}))
    idx_of = {v: i for i, v in enumerate(new_pool)}
    remap = {i: idx_of[v] for i, v in enumerate(tri.vertices)}
    b_idx = idx_of[b]
    out = set()
    for s in tri.simplexes:
        if not carrier <= set(s):
            out.add(tuple(sorted(remap[i] for i in s)))
            continue
        for mask in range(1 << len(s)):
            face = tuple(s[i] for i in range(len(s)) if mask >> i & 1)
            if carrier <= set(face):
                continue
            out.add(tuple(sorted(tuple(remap[i] for i in face) + (b_idx,))))
    return Triangulation(tri.ambient_dim, new_pool, frozenset(out))


def lebesgue_measure_ndim(simplex):
    """n-dimensional volume: |det(v1-v0,...,vn-v0)| / n!, zero below full dimension."""
    verts = _as_vertex_tuple(simplex)
    n = len(verts[0])
    if len(verts) != n + 1:
        return Fraction(0)
    v0 = verts[0]
    rows = [[x - y for x, y in zip(v, v0)] for v in verts[1:]]
    return abs(det(rows)) / factorial(n)


def triangulation_measure(tri):
    return sum(
        (lebesgue_measure_ndim(t) for t in tri.maximal_point_tuples()),
        Fraction(0),
    )


def is_closed_domain(tri):
    n = tri.ambient_dim
    return all(len(s) == n + 1 for s in tri.maximal_simplexes)


def _facet_adjacency_growth(tri):
    n = tri.ambient_dim
    top = [s for s in tri.maximal_simplexes if len(s) == n + 1]
    if not top:
        return [], []
    grown = [top[0]]
    grown_sets = [set(top[0])]
    rest = top[1:]
    while True:
        pick = next(
            (
                s
                for s in rest
                if any(len(set(s) & g) == n for g in grown_sets)
            ),
            None,
        )
        if pick is None:
            break
        grown.append(pick)
        grown_sets.append(set(pick))
        rest.remove(pick)
    return grown, rest


def interior_connected(tri):
    """Whether the interior is connected, by greedy facet-sharing growth."""
    if not is_closed_domain(tri):
        raise NotClosedDomainError("support is not a closed domain")
    _, rest = _facet_adjacency_growth(tri)
    return not rest


def facet_components(tri):
    """Facet-connected components of the top-dimensional simplexes."""
    n = tri.ambient_dim
    remaining = [s for s in tri.maximal_simplexes if len(s) == n + 1]
    comps = []
    while remaining:
        comp = [remaining.pop(0)]
        changed = True
        while changed:
            changed = False
            for s in list(remaining):
                if any(len(set(s) & set(g)) == n for g in comp):
                    comp.append(s)
                    remaining.remove(s)
                    changed = True
        comps.append(sorted(comp))
    return comps


def refine_along_hyperplane(tri, h):
    """Refine so every simplex lies in {h<=0} or {h>=0}; support unchanged."""
    h = (tuple(Fraction(c) for c in h[0]), Fraction(h[1]))
    pieces = []
    for t in tri.maximal_point_tuples():
        pieces.extend(clip_simplex(t, h, "le"))
        pieces.extend(clip_simplex(t, h, "ge"))
    return Triangulation.from_maximal(tri.ambient_dim, pieces)


def desingularize(tri, max_blow_ups=100_000):
    """Refine into a regular triangulation by blow-ups at simplest points.

    Repeatedly blows up at the minimal-denominator relative-interior point
    of a minimal-dimension non-regular simplex (whose proper faces are then
    all regular), tracking the non-regular worklist incrementally. Plain
    mediants would not do: a segment's homogeneous determinant survives
    mediant insertion whenever the vector sum is primitive, so badness of a
    segment like [1/7, 3/7] would respawn forever. The output is verified
    simplex by simplex; the step cap turns a runaway loop into an error
    instead of a hang.
    """
    memo = {}

    def regular(pts):
        if pts not in memo:
            memo[pts] = is_basis_extendable([to_homogeneous(v) for v in pts])
        return memo[pts]

    current = {tri.points_of(s) for s in tri.simplexes}
    pending = {pts for pts in current if not regular(pts)}
    steps = 0
    while pending:
        steps += 1
        if steps > max_blow_ups:
            raise BlowUpCapExceededError(f"exceeded {max_blow_ups} blow-ups")
        bad = min(pending, key=lambda pts: (len(pts), pts))
        tri = blow_up(tri, simplest_interior_point(bad))
        new_set = {tri.points_of(s) for s in tri.simplexes}
        pending = {pts for pts in pending if pts in new_set}
        pending.update(
            pts for pts in new_set - current if not regular(pts)
        )
        current = new_set
    return tri


# ---------------------------------------------------------------------------
# exact covering and polyhedron comparison


def _cut_functionals(cover):
    cuts = []
    seen = set()
    for verts in cover:
        for h in list(simplex_hull_functionals(verts)) + simplex_facet_functionals(verts):
            key = functional_key(h)
            if key not in seen and any(c != 0 for c in key[0]):
                seen.add(key)
                cuts.append(h)
    return cuts


def covered(target, cover):
    """Exact test that a simplex is contained in a union of simplexes."""
    target = _as_vertex_tuple(target)
    cover = [_as_vertex_tuple(c) for c in cover]
    if not cover:
        return False
    members = [simplex_membership(c) for c in cover]
    cuts = _cut_functionals(cover)

    def rec(verts, first_cut):
        if any(all(m.contains(v) for v in verts) for m in members):
            return True
        for k in range(first_cut, len(cuts)):
            h = cuts[k]
            vals = [eval_functional(h, v) for v in verts]
            if any(v > 0 for v in vals) and any(v < 0 for v in vals):
                pieces = clip_simplex(verts, h, "le") + clip_simplex(verts, h, "ge")
                return all(rec(p, k + 1) for p in pieces)
        return False

    return rec(target, 0)


def _support_is_unit_cube(tri):
    """Exact sufficient test: vertices inside the cube and full measure."""
    if not tri.vertices:
        return False
    if not all(0 <= c <= 1 for v in tri.vertices for c in v):
        return False
    return triangulation_measure(tri) == 1


def polyhedra_equal(p_tri, q_tri):
    """Whether two triangulations have the same support, decided exactly."""
    if p_tri.ambient_dim != q_tri.ambient_dim:
        raise DimensionMismatchError("ambient dimensions differ")
    ps = p_tri.maximal_point_tuples()
    qs = q_tri.maximal_point_tuples()
    if not ps or not qs:
        return not ps and not qs
    if set(ps) == set(qs):
        return True
    if _support_is_unit_cube(p_tri) and _support_is_unit_cube(q_tri):
        return True
    return all(covered(a, qs) for a in ps) and all(covered(b, ps) for b in qs)


def simplex_pair_intersection_vertices(verts_a, verts_b):
    """Vertices of the (possibly empty) polytope conv(A) cap conv(B)."""
    from itertools import combinations

    verts_a = _as_vertex_tuple(verts_a)
    verts_b = _as_vertex_tuple(verts_b)
    n = len(verts_a[0])
    ma, mb = simplex_membership(verts_a), simplex_membership(verts_b)
    eqs = list(ma.eqs) + list(mb.eqs)
    ineqs = list(ma.ineqs) + list(mb.ineqs)
    eq_rows = [list(h[0]) for h in eqs]
    eq_rank = mat_rank(eq_rows) if eq_rows else 0
    need = n - eq_rank
    found = set()
    for chosen in combinations(range(len(ineqs)), need):
        rows = eq_rows + [list(ineqs[i][0]) for i in chosen]
        rhs = [-h[1] for h in eqs] + [-ineqs[i][1] for i in chosen]
        sol = solve_unique(rows, rhs)
        if sol is None:
            continue
        if all(eval_functional(h, sol) >= 0 for h in ineqs):
            found.add(sol)
    return sorted(found)


def simplexes_disjoint(verts_a, verts_b):
    return not simplex_pair_intersection_vertices(verts_a, verts_b)


def triangulation_hyperplanes(tri):
    """Deduped cut functionals spanning a triangulation's simplex boundaries."""
    return _cut_functionals(tri.maximal_point_tuples())
