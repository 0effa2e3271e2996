"""Decision procedures for retractions of the unit cube.

Verification of idempotent term maps, the subcomplex of pieces acting
homeomorphically, exact counting of the domains witnessing distinct
retractions (finite with certificates, or infinite with a low-dimensional
witness simplex), index bounds, and the range/algebra comparison procedures.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor

from .errors import (
    DimensionMismatchError,
    NotIdempotentError,
    ShapeMismatchError,
    VerificationError,
)
from .geometry import (
    Triangulation,
    affinely_independent,
    barycentric,
    covered,
    desingularize,
    facet_components,
    functional_key,
    is_closed_domain,
    is_regular,
    lebesgue_measure_ndim,
    point_in_simplex,
    polyhedra_equal,
    simplex_facet_functionals,
    simplex_membership,
    simplex_pair_intersection_vertices,
    simplexes_disjoint,
    triangulation_measure,
)
from .linalg import int_det
from .pwl import (
    PwlMap,
    _refine_by_functionals,
    apply_rows,
    barycenter,
    compile_terms,
    compose,
    fixed_point_set,
    idempotence_witness,
    pwl_diff_witness,
    pwl_equal,
    refine_map_domain,
    restrict,
)
from .rationals import denominator
from .terms import arity


@dataclass(frozen=True)
class ZRetraction:
    """An idempotent integer piecewise-linear endomap with its cached range."""

    map: PwlMap
    range: Triangulation
    source_terms: tuple = None

    @property
    def ambient_dim(self):
        return self.map.ambient_dim


@dataclass(frozen=True)
class HomeoDomainCertificate:
    """One domain mapped bijectively onto the range.

    ``simplexes`` are the top-dimensional simplexes of the domain and
    ``images`` the image points of their vertices, aligned entrywise; the
    inverse of the induced homeomorphism is the simplexwise linear extension
    images -> simplexes, which determines the associated retraction.
    """

    simplexes: tuple
    images: tuple


@dataclass(frozen=True)
class MultiplicityReport:
    verdict: str
    count: int = None
    certificates: tuple = ()
    witness: tuple = None

    @property
    def is_finite(self):
        return self.verdict == "FINITE"


@dataclass(frozen=True)
class IndexBounds:
    lower: int
    upper: int  # None means unbounded
    min_component_measure: Fraction


def verify_z_retraction(term_list):
    """Compile terms, check idempotence, and cache the fixed-point range."""
    n = len(term_list)
    for t in term_list:
        if arity(t) > n:
            raise DimensionMismatchError("term arity exceeds the tuple length")
    f = compile_terms(list(term_list), n)
    w = pwl_diff_witness(compose(f, f), f)
    if w is not None:
        raise NotIdempotentError(w)
    return ZRetraction(map=f, range=fixed_point_set(f), source_terms=tuple(term_list))


def verify_pwl_retraction(f, source_terms=None):
    """Verify idempotence of an explicitly given piecewise-linear endomap.

    Terms compiled through :func:`verify_z_retraction` go through the
    composed-map equality check; this entry point uses the equivalent
    image-inside-fixed-set criterion, which scales to maps with many pieces.
    """
    if f.codomain_dim != f.ambient_dim:
        raise ShapeMismatchError("a retraction must be an endomap")
    w = idempotence_witness(f)
    if w is not None:
        raise NotIdempotentError(w)
    return ZRetraction(map=f, range=fixed_point_set(f), source_terms=source_terms)


# ---------------------------------------------------------------------------
# the subcomplex of pieces acting homeomorphically


def _piece_is_homeo(verts, images):
    if len(set(images)) != len(images) or not affinely_independent(images):
        return False
    if any(denominator(i) != denominator(v) for v, i in zip(verts, images)):
        return False
    return is_regular(images)


def _homeo_data(z):
    """(delta, fmap, nabla) with delta regular and linearizing the map."""
    delta = desingularize(z.map.domain)
    fmap = refine_map_domain(z.map, delta)
    vertex_image = {}
    for s in delta.maximal_simplexes:
        rows = fmap.rows[s]
        for i in s:
            vertex_image.setdefault(i, apply_rows(rows, delta.vertices[i]))
    nabla = []
    for s in sorted(delta.simplexes, key=lambda s: (len(s), s)):
        verts = delta.points_of(s)
        images = tuple(vertex_image[i] for i in s)
        if _piece_is_homeo(verts, images):
            nabla.append(s)
    return delta, fmap, nabla


def homeo_subcomplex(z):
    """The linearizing regular triangulation and its homeomorphic simplexes."""
    delta, _, nabla = _homeo_data(z)
    return delta, nabla


# ---------------------------------------------------------------------------
# certification of a candidate domain


def _inverse_transport(image_verts, domain_verts, p):
    lam = barycentric(image_verts, p)
    return tuple(
        sum((l * v[i] for l, v in zip(lam, domain_verts)), Fraction(0))
        for i in range(len(domain_verts[0]))
    )


def _pairwise_injective(pairs):
    """Whether simplexwise injections glue to an injection of the union.

    ``pairs`` lists (domain_vertices, image_vertices). Two pieces are
    compatible iff their inverse maps agree on every vertex of the
    intersection of the image simplexes.
    """
    for i in range(len(pairs)):
        di, ii = pairs[i]
        for j in range(i + 1, len(pairs)):
            dj, ij = pairs[j]
            for p in simplex_pair_intersection_vertices(ii, ij):
                if _inverse_transport(ii, di, p) != _inverse_transport(ij, dj, p):
                    return False
    return True


def _certify(pairs, target_pieces):
    """Full bijectivity check of glued pieces onto the target polyhedron."""
    if not _pairwise_injective(pairs):
        return False
    total = sum((lebesgue_measure_ndim(img) for _, img in pairs), Fraction(0))
    target_measure = sum(
        (lebesgue_measure_ndim(t) for t in target_pieces), Fraction(0)
    )
    if total != target_measure:
        return False
    images = [img for _, img in pairs]
    return all(covered(t, images) for t in target_pieces)


def _rows_unimodular(rows):
    """Whether an integer affine piece is invertible with an integer inverse."""
    return abs(int_det([list(r.coeffs) for r in rows])) == 1


def certify_homeo_domain(z, simplexes):
    """Whether the union of the given top-dimensional pieces maps bijectively onto the range.

    Each piece must lie in a single linearity domain and map by a unimodular
    affine piece (equivalently, restrict to a piecewise-unimodular,
    denominator-preserving homeomorphism onto its image); the union must then
    hit the range injectively and exactly.
    """
    n = z.ambient_dim
    pairs = []
    for simplex in simplexes:
        verts = tuple(sorted(tuple(Fraction(c) for c in v) for v in
                             (simplex.vertices if hasattr(simplex, "vertices") else simplex)))
        if len(verts) != n + 1:
            return False
        parent = z.map.domain.find_containing_maximal(barycenter(verts))
        if parent is None or not all(
            point_in_simplex(v, z.map.domain.points_of(parent)) for v in verts
        ):
            return False
        rows = z.map.rows[parent]
        if not _rows_unimodular(rows):
            return False
        pairs.append((verts, tuple(apply_rows(rows, v) for v in verts)))
    return _certify(pairs, _range_pieces(z))


def _range_pieces(z):
    """The range as the union of the linearizing simplexes fixed pointwise."""
    n = z.ambient_dim
    out = []
    for s in z.map.domain.maximal_simplexes:
        if len(s) != n + 1:
            continue
        verts = z.map.domain.points_of(s)
        rows = z.map.rows[s]
        if all(apply_rows(rows, v) == v for v in verts):
            out.append(verts)
    return out


# ---------------------------------------------------------------------------
# multiplicity


def _exact_covers(cover_cells, num_cells, compatible=None):
    """All subsets of candidates covering every cell exactly once.

    ``cover_cells`` maps candidate keys to frozensets of cell indices.
    ``compatible`` optionally prunes pairs that can never share a solution
    (dropping only subsets the full certification would reject anyway).
    Deterministic: cells are chosen fewest-candidates-first and candidates
    in sorted order.
    """
    cell_cands = {c: set() for c in range(num_cells)}
    for cand, cells in cover_cells.items():
        for c in cells:
            cell_cands[c].add(cand)
    solutions = []

    def search(uncovered, usable, chosen):
        if not uncovered:
            solutions.append(frozenset(chosen))
            return
        cell = min(uncovered, key=lambda c: (len(cell_cands[c] & usable), c))
        options = sorted(cell_cands[cell] & usable)
        for cand in options:
            if compatible is not None and any(
                not compatible(cand, c) for c in chosen
            ):
                continue
            cells = cover_cells[cand]
            next_usable = {
                u for u in usable if u == cand or not (cover_cells[u] & cells)
            }
            next_usable.discard(cand)
            chosen.append(cand)
            search(uncovered - cells, next_usable, chosen)
            chosen.pop()

    search(frozenset(range(num_cells)), set(cover_cells), [])
    return sorted(solutions, key=sorted)


def multiplicity(z):
    """Count the retraction-inducing domains, or detect the infinite case.

    The verdict is INFINITE exactly when the range fails to be a closed
    domain, witnessed by a maximal simplex of deficient dimension; otherwise
    the certified domains are enumerated by exact-cover backtracking over a
    common refinement of the range. Candidate pieces are the unimodular
    top-dimensional simplexes of the map's own linearizing triangulation;
    any domain inducing a retraction is a union of such pieces.
    """
    n = z.ambient_dim
    low = sorted(
        z.range.points_of(s)
        for s in z.range.maximal_simplexes
        if len(s) < n + 1
    )
    if low:
        return MultiplicityReport(verdict="INFINITE", witness=low[0])
    delta = z.map.domain
    nabla_top = [
        s
        for s in delta.maximal_simplexes
        if len(s) == n + 1 and _rows_unimodular(z.map.rows[s])
    ]
    targets = _range_pieces(z)
    assert sum((lebesgue_measure_ndim(t) for t in targets), Fraction(0)) == \
        triangulation_measure(z.range)
    images = {
        s: tuple(apply_rows(z.map.rows[s], v) for v in delta.points_of(s))
        for s in nabla_top
    }
    funcs = []
    seen = set()
    for img in images.values():
        for h in simplex_facet_functionals(img):
            key = functional_key(h)
            if key not in seen:
                seen.add(key)
                funcs.append(h)
    cells = [
        piece for t in targets for piece in _refine_by_functionals(t, funcs)
    ]
    memberships = {s: simplex_membership(images[s]) for s in nabla_top}
    cover_cells = {}
    for s in nabla_top:
        m = memberships[s]
        mine = frozenset(
            ci for ci, cell in enumerate(cells) if all(m.contains(v) for v in cell)
        )
        cover_cells[s] = mine
    compat_cache = {}

    def compatible(a, b):
        key = (a, b) if a <= b else (b, a)
        if key not in compat_cache:
            compat_cache[key] = _pairwise_injective(
                [(delta.points_of(a), images[a]), (delta.points_of(b), images[b])]
            )
        return compat_cache[key]

    certificates = []
    for solution in _exact_covers(cover_cells, len(cells), compatible):
        pairs = sorted((delta.points_of(s), images[s]) for s in solution)
        if _certify(pairs, targets):
            certificates.append(
                HomeoDomainCertificate(
                    simplexes=tuple(p[0] for p in pairs),
                    images=tuple(p[1] for p in pairs),
                )
            )
    certificates.sort(key=lambda c: c.simplexes)
    return MultiplicityReport(
        verdict="FINITE", count=len(certificates), certificates=tuple(certificates)
    )


# ---------------------------------------------------------------------------
# index bounds


def _verify_copy(candidate, rng):
    """Verify a candidate copy is Z-homeomorphic to the range.

    Only the single-simplex case has an implementable witness here: both
    sides regular with matching vertex denominators, which by the
    denominator-preservation criterion yields a simplexwise Z-homeomorphism.
    """
    cand_max = candidate.maximal_point_tuples()
    rng_max = rng.maximal_point_tuples()
    if len(cand_max) != 1 or len(rng_max) != 1:
        raise VerificationError(
            "only single-simplex candidate copies can be verified"
        )
    q, p = cand_max[0], rng_max[0]
    if len(q) != len(p):
        return False
    if not (is_regular(q) and is_regular(p)):
        raise VerificationError("cannot verify copies of non-regular simplexes")
    return sorted(map(denominator, q)) == sorted(map(denominator, p))


def index_bounds(z, candidate_copies=None):
    """Bounds on the index of the algebra presented by the retraction.

    Non-closed-domain ranges report an unbounded index. In one dimension the
    closed form (two retractions exactly when the segment is at most half the
    interval) is used for both bounds; otherwise the upper bound is the
    binomial pigeonhole bound from the smallest interior component measure
    and the lower bound combines the multiplicity with verified disjoint
    copies supplied by the caller.
    """
    rng = z.range
    if not is_closed_domain(rng):
        return IndexBounds(lower=1, upper=None, min_component_measure=None)
    comps = facet_components(rng)
    comp_measures = [
        sum((lebesgue_measure_ndim(rng.points_of(s)) for s in comp), Fraction(0))
        for comp in comps
    ]
    lam = min(comp_measures)
    k = len(comps)
    if z.ambient_dim == 1:
        iota = 2 if lam <= Fraction(1, 2) else 1
        return IndexBounds(lower=iota, upper=iota, min_component_measure=lam)
    upper = comb(floor(1 / lam), k)
    lower = multiplicity(z).count or 1
    if candidate_copies:
        pieces = [rng.maximal_point_tuples()]
        verified = 1
        for cand in candidate_copies:
            if not _verify_copy(cand, rng):
                continue
            cand_pieces = cand.maximal_point_tuples()
            if all(
                simplexes_disjoint(a, b)
                for group in pieces
                for a in group
                for b in cand_pieces
            ):
                verified += 1
                pieces.append(cand_pieces)
        lower = max(lower, verified)
    lower = min(lower, upper) if upper is not None else lower
    return IndexBounds(lower=lower, upper=upper, min_component_measure=lam)


# ---------------------------------------------------------------------------
# range and algebra comparison


def same_range(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError("ambient dimensions differ")
    return polyhedra_equal(a.range, b.range)


def is_z_homeo_onto(f, sub, target):
    """Whether f restricted to |sub| is a Z-homeomorphism onto |target|."""
    g = restrict(f, sub)
    lam = desingularize(g.domain)
    g = refine_map_domain(g, lam)
    pairs = []
    for s in lam.maximal_simplexes:
        verts = lam.points_of(s)
        images = g.image_simplex_vertices(s)
        if not is_regular(verts) or not _piece_is_homeo(verts, images):
            return False
        pairs.append((verts, images))
    if not _pairwise_injective(pairs):
        return False
    images = [img for _, img in pairs]
    targets = target.maximal_point_tuples()
    return all(covered(t, targets) for t in images) and all(
        covered(t, images) for t in targets
    )


def same_algebra(a, b):
    """Whether the two retractions generate the same subalgebra.

    With equal ranges this reduces to equality of the maps; otherwise the
    first map must act homeomorphically on the second's range and absorb it
    under composition.
    """
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError("ambient dimensions differ")
    if polyhedra_equal(a.range, b.range):
        return pwl_equal(a.map, b.map)
    return is_z_homeo_onto(a.map, b.range, a.range) and pwl_equal(
        compose(a.map, b.map), a.map
    )
