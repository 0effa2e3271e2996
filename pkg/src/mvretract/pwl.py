"""Piecewise-linear maps with integer coefficients over rational triangulations.

A map is stored as a linearizing triangulation of its domain together with
one integer affine row per output coordinate on each maximal simplex.
Compilation from terms, exact equality, composition, restriction, and fixed
point sets all live here.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import terms as tm
from .errors import (
    ArityError,
    DiscontinuityError,
    NotASubsetError,
    PointOutsideDomainError,
    ShapeMismatchError,
)
from .geometry import (
    Triangulation,
    _affine_dim,
    affinely_independent,
    clip_simplex,
    covered,
    eval_functional,
    kuhn_triangulation,
    normalize_point,
    point_in_simplex,
    polyhedra_equal,
    triangulation_hyperplanes,
)
from .linalg import rref


@dataclass(frozen=True)
class AffinePiece:
    """x -> coeffs . x + const with integer data."""

    coeffs: tuple
    const: int

    def __init__(self, coeffs, const):
        cs = tuple(int(c) for c in coeffs)
        if any(Fraction(c) != cs[i] for i, c in enumerate(coeffs)) or Fraction(const) != int(const):
            raise ValueError("affine piece coefficients must be integers")
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "const", int(const))

    def apply(self, p):
        return sum((c * x for c, x in zip(self.coeffs, p)), Fraction(self.const))


def apply_rows(rows, p):
    return tuple(r.apply(p) for r in rows)


def barycenter(verts):
    k = len(verts)
    return tuple(sum(col, Fraction(0)) / k for col in zip(*verts))


class PwlMap:
    """A continuous piecewise-affine map with integer coefficient rows."""

    def __init__(self, domain, codomain_dim, rows):
        self.domain = domain
        self.codomain_dim = codomain_dim
        self.rows = {tuple(k): tuple(v) for k, v in rows.items()}
        maximal = set(map(tuple, domain.maximal_simplexes))
        if set(self.rows) != maximal:
            raise ShapeMismatchError("rows must cover exactly the maximal simplexes")
        for s, rs in self.rows.items():
            if len(rs) != codomain_dim:
                raise ShapeMismatchError("row count differs from codomain dimension")
        self._check_vertices()

    def _check_vertices(self):
        seen = {}
        for s, rs in sorted(self.rows.items()):
            for i in s:
                v = self.domain.vertices[i]
                img = apply_rows(rs, v)
                if any(x < 0 or x > 1 for x in img):
                    raise ValueError(f"vertex image {img} leaves the unit cube")
                if seen.setdefault(i, img) != img:
                    raise DiscontinuityError(
                        f"pieces disagree at vertex {v}: {seen[i]} vs {img}"
                    )

    @property
    def ambient_dim(self):
        return self.domain.ambient_dim

    def evaluate(self, p):
        p = normalize_point(p)
        s = self.domain.find_containing_maximal(p)
        if s is None:
            raise PointOutsideDomainError(f"{p} is outside the map's domain")
        return apply_rows(self.rows[s], p)

    def image_simplex_vertices(self, s):
        rs = self.rows[tuple(s)]
        return tuple(apply_rows(rs, self.domain.vertices[i]) for i in s)


def evaluate_map(f, p):
    return f.evaluate(p)


def identity_map(n):
    tri = kuhn_triangulation(n)
    rows = {}
    for s in tri.maximal_simplexes:
        rows[tuple(s)] = tuple(
            AffinePiece(tuple(1 if j == i else 0 for j in range(n)), 0) for i in range(n)
        )
    return PwlMap(tri, n, rows)


# ---------------------------------------------------------------------------
# compilation of terms


def _split_piece(verts, h):
    vals = [eval_functional(h, v) for v in verts]
    if any(v > 0 for v in vals) and any(v < 0 for v in vals):
        return clip_simplex(verts, h, "le") + clip_simplex(verts, h, "ge")
    return [verts]


def _form_neg(form):
    coeffs, const = form
    return tuple(-c for c in coeffs), 1 - const


def _form_sum(a, b, shift):
    return tuple(x + y for x, y in zip(a[0], b[0])), a[1] + b[1] + shift


def _compile_node(t, chart, n):
    if all(id(t) in forms for _, forms in chart):
        return chart
    if isinstance(t, tm.Var):
        form = (tuple(1 if j == t.index - 1 else 0 for j in range(n)), 0)
        for _, forms in chart:
            forms[id(t)] = form
        return chart
    if isinstance(t, tm.Const):
        form = ((0,) * n, t.value)
        for _, forms in chart:
            forms[id(t)] = form
        return chart
    if isinstance(t, tm.Neg):
        chart = _compile_node(t.arg, chart, n)
        for _, forms in chart:
            forms.setdefault(id(t), _form_neg(forms[id(t.arg)]))
        return chart
    chart = _compile_node(t.left, chart, n)
    chart = _compile_node(t.right, chart, n)
    out = []
    for verts, forms in chart:
        if id(t) in forms:
            out.append((verts, forms))
            continue
        fu, fv = forms[id(t.left)], forms[id(t.right)]
        if isinstance(t, (tm.OPlus, tm.OTimes)):
            # both truncations switch branch on the locus u + v - 1 = 0
            locus = _form_sum(fu, fv, -1)
            low, high = (
                (_form_sum(fu, fv, 0), ((0,) * n, 1))
                if isinstance(t, tm.OPlus)
                else (((0,) * n, 0), _form_sum(fu, fv, -1))
            )
        else:
            locus = tuple(x - y for x, y in zip(fu[0], fv[0])), fu[1] - fv[1]
            low, high = (fu, fv) if isinstance(t, tm.Meet) else (fv, fu)
        pieces = _split_piece(verts, locus)
        for piece in pieces:
            new_forms = forms if len(pieces) == 1 else dict(forms)
            val = eval_functional(locus, barycenter(piece))
            new_forms[id(t)] = low if val <= 0 else high
            out.append((piece, new_forms))
    return out


def compile_terms(term_list, n):
    """Compile terms into one map I^n -> I^m, m = len(term_list)."""
    for t in term_list:
        if tm.arity(t) > n:
            raise ArityError(f"term arity {tm.arity(t)} exceeds ambient dimension {n}")
    tri0 = kuhn_triangulation(n)
    chart = [(t, {}) for t in tri0.maximal_point_tuples()]
    for t in term_list:
        chart = _compile_node(t, chart, n)
    domain = Triangulation.from_maximal(n, [verts for verts, _ in chart])
    by_verts = {verts: forms for verts, forms in chart}
    rows = {}
    for s in domain.maximal_simplexes:
        forms = by_verts[domain.points_of(s)]
        rows[tuple(s)] = tuple(
            AffinePiece(*forms[id(t)]) for t in term_list
        )
    return PwlMap(domain, len(term_list), rows)


def compile_term(t, n=None):
    n = tm.arity(t) if n is None else n
    return compile_terms([t], max(n, 1))


# ---------------------------------------------------------------------------
# refinement, equality, composition, restriction


def _refine_by_functionals(verts, functionals):
    cur = [verts]
    dim = len(verts)
    for h in functionals:
        nxt = []
        for piece in cur:
            nxt.extend(p for p in _split_piece(piece, h) if len(p) == dim)
        cur = nxt
    return cur


def refine_map_domain(f, finer):
    """Re-express a map over a finer triangulation of the same support."""
    rows = {}
    for s in finer.maximal_simplexes:
        pts = finer.points_of(s)
        parent = f.domain.find_containing_maximal(barycenter(pts))
        if parent is None:
            raise NotASubsetError("refinement leaves the original domain")
        rows[tuple(s)] = f.rows[parent]
    return PwlMap(finer, f.codomain_dim, rows)


def pwl_diff_witness(f, g):
    """A rational point where the maps differ, or None when they are equal."""
    if f.codomain_dim != g.codomain_dim or f.ambient_dim != g.ambient_dim:
        raise ShapeMismatchError("map shapes differ")
    if not polyhedra_equal(f.domain, g.domain):
        raise ShapeMismatchError("domain supports differ")
    hyps = triangulation_hyperplanes(g.domain)
    for s in f.domain.maximal_simplexes:
        pts = f.domain.points_of(s)
        for piece in sorted(_refine_by_functionals(pts, hyps)):
            gs = g.domain.find_containing_maximal(barycenter(piece))
            frows, grows = f.rows[s], g.rows[gs]
            for v in piece:
                if apply_rows(frows, v) != apply_rows(grows, v):
                    return v
    return None


def pwl_equal(f, g):
    return pwl_diff_witness(f, g) is None


def compose(f, g):
    """Exact composition f o g."""
    if g.codomain_dim != f.ambient_dim:
        raise ShapeMismatchError("codomain of g differs from domain dimension of f")
    hyps = triangulation_hyperplanes(f.domain)
    pieces = []
    rows_for = {}
    for s in g.domain.maximal_simplexes:
        pts = g.domain.points_of(s)
        grows = g.rows[s]
        pulled = []
        for coeffs, const in hyps:
            pc = tuple(
                sum(coeffs[j] * grows[j].coeffs[i] for j in range(len(grows)))
                for i in range(g.ambient_dim)
            )
            pk = sum((coeffs[j] * grows[j].const for j in range(len(grows))), Fraction(const))
            pulled.append((pc, pk))
        for piece in _refine_by_functionals(pts, pulled):
            q = apply_rows(grows, barycenter(piece))
            fs = f.domain.find_containing_maximal(q)
            if fs is None:
                raise NotASubsetError(f"image point {q} is outside the outer domain")
            frows = f.rows[fs]
            comp = []
            for fr in frows:
                coeffs = tuple(
                    sum(fr.coeffs[j] * grows[j].coeffs[i] for j in range(len(grows)))
                    for i in range(g.ambient_dim)
                )
                const = sum(fr.coeffs[j] * grows[j].const for j in range(len(grows))) + fr.const
                comp.append(AffinePiece(coeffs, const))
            pieces.append(piece)
            rows_for[piece] = tuple(comp)
    domain = Triangulation.from_maximal(g.ambient_dim, pieces)
    rows = {tuple(s): rows_for[domain.points_of(s)] for s in domain.maximal_simplexes}
    return PwlMap(domain, f.codomain_dim, rows)


def restrict(f, sub):
    """Restriction of f to a sub-polyhedron, re-triangulated to linearity."""
    parts = sub.maximal_point_tuples()
    whole = f.domain.maximal_point_tuples()
    if not all(covered(p, whole) for p in parts):
        raise NotASubsetError("restriction target is not inside the domain")
    hyps = triangulation_hyperplanes(f.domain)
    pieces = []
    rows_for = {}
    for pts in parts:
        for piece in _refine_by_functionals(pts, hyps):
            parent = f.domain.find_containing_maximal(barycenter(piece))
            pieces.append(piece)
            rows_for[piece] = f.rows[parent]
    domain = Triangulation.from_maximal(sub.ambient_dim, pieces)
    rows = {tuple(s): rows_for[domain.points_of(s)] for s in domain.maximal_simplexes}
    return PwlMap(domain, f.codomain_dim, rows)


# ---------------------------------------------------------------------------
# idempotence without self-composition


def _image_simplex_of_piece(img_points, ambient):
    """conv of a piece's vertex images as a simplex, or None when that fails.

    An affine image of a simplex in ambient dimension <= 2 is always again a
    simplex (triangle, segment, or point); for rank-one collapses the
    lexicographic extremes span it in any dimension.
    """
    uniq = sorted(set(img_points))
    if len(uniq) == 1 or affinely_independent(uniq):
        return tuple(uniq)
    if _affine_dim(uniq) == 1:
        return (uniq[0], uniq[-1])
    return None


def idempotence_witness(f):
    """A point p with f(f(p)) != f(p), or None when f is idempotent.

    Decided by checking that the image of every linear piece lies inside the
    fixed-point set, which is equivalent to idempotence and far cheaper than
    materializing the self-composition for large piece counts. Falls back to
    the composed map when some piece's image is too degenerate to triangulate
    directly (only possible above ambient dimension two).
    """
    if f.codomain_dim != f.ambient_dim:
        raise ShapeMismatchError("idempotence needs an endomap")
    fix = fixed_point_set(f)
    fix_pieces = fix.maximal_point_tuples()
    for s in sorted(f.rows):
        verts = f.domain.points_of(s)
        rows = f.rows[s]
        img = [apply_rows(rows, v) for v in verts]
        simplex = _image_simplex_of_piece(img, f.ambient_dim)
        if simplex is None:
            ff = compose(f, f)
            return pwl_diff_witness(ff, f)
        if fix_pieces and covered(simplex, fix_pieces):
            continue
        return _non_fixed_preimage(f, fix, s, simplex)
    return None


def _non_fixed_preimage(f, fix, s, img_simplex):
    """A domain point of piece s whose image is not fixed by f."""
    cuts = triangulation_hyperplanes(f.domain)
    if not fix.is_empty:
        cuts = cuts + triangulation_hyperplanes(fix)
    pieces = _refine_by_functionals(img_simplex, cuts)
    bad = None
    for piece in sorted(pieces):
        for y in piece:
            if f.evaluate(y) != y:
                bad = y
                break
        if bad:
            break
    assert bad is not None, "covering test failed but every image vertex is fixed"
    verts = f.domain.points_of(s)
    rows = f.rows[s]
    functionals = []
    for j in range(f.ambient_dim):
        functionals.append((tuple(Fraction(c) for c in rows[j].coeffs),
                            Fraction(rows[j].const) - bad[j]))
    cur = [verts]
    for h in functionals:
        cur = [q for piece in cur for q in clip_simplex(piece, h, "eq")]
    assert cur, "image point has no preimage in its own piece"
    return sorted(cur)[0][0]


# ---------------------------------------------------------------------------
# fixed points


def fixed_point_set(f):
    """Triangulation of {x : f(x) = x} for an endomap of I^n."""
    n = f.ambient_dim
    if f.codomain_dim != n:
        raise ShapeMismatchError("fixed points need an endomap")
    pieces = []
    for s in f.domain.maximal_simplexes:
        pts = f.domain.points_of(s)
        rs = f.rows[s]
        raw = []
        for j in range(n):
            coeffs = list(rs[j].coeffs)
            coeffs[j] -= 1
            raw.append([Fraction(c) for c in coeffs] + [Fraction(rs[j].const)])
        red, _ = rref(raw)
        functionals = []
        inconsistent = False
        for row in red:
            if all(x == 0 for x in row[:-1]):
                if row[-1] != 0:
                    inconsistent = True
                    break
                continue
            functionals.append((tuple(row[:-1]), row[-1]))
        if inconsistent:
            continue
        cur = [pts]
        for h in functionals:
            cur = [q for piece in cur for q in clip_simplex(piece, h, "eq")]
        pieces.extend(cur)
    if not pieces:
        return Triangulation.empty(n)
    tri = Triangulation.from_maximal(n, pieces)
    tri.validate_properness()
    for s in tri.maximal_simplexes:
        pts = tri.points_of(s)
        for probe in pts + (barycenter(pts),):
            assert f.evaluate(probe) == tuple(probe)
    return tri
