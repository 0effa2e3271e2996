"""Exact linear algebra over Q and Z used by the geometry and map layers.

Matrices are plain lists of rows; entries are ints or fractions.Fraction.
Everything here is deterministic and allocation-light; no floating point.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd


def mat_copy(rows):
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows):
    """Reduced row echelon form. Returns (new_rows, pivot_column_list)."""
    a = mat_copy(rows)
    if not a:
        return a, []
    m, n = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, pivots


def mat_rank(rows):
    return len(rref(rows)[1])


def nullspace(rows):
    """Canonical basis of {x : rows . x = 0}, one vector per free column."""
    if not rows:
        return []
    n = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(tuple(vec))
    return basis


def solve_unique(a_rows, b):
    """Solve A x = b; returns the solution tuple only when it is unique."""
    if not a_rows:
        return None
    n = len(a_rows[0])
    aug = [[Fraction(x) for x in row] + [Fraction(bv)] for row, bv in zip(a_rows, b)]
    red, pivots = rref(aug)
    for row in red:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    if len([p for p in pivots if p < n]) < n:
        return None
    sol = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        if p < n:
            sol[p] = red[r][-1]
    return tuple(sol)


def det(rows):
    """Determinant of a square matrix, exact."""
    a = mat_copy(rows)
    n = len(a)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if a[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            sign = -sign
        result *= a[c][c]
        inv = a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result * sign


def int_det(rows):
    d = det(rows)
    assert d.denominator == 1
    return d.numerator


def maximal_minor_gcd(rows):
    """gcd of all k x k minors of an integer k x n matrix (k <= n)."""
    k = len(rows)
    n = len(rows[0])
    if k > n:
        raise ValueError("more rows than columns")
    g = 0
    for cols in combinations(range(n), k):
        minor = [[row[c] for c in cols] for row in rows]
        g = gcd(g, abs(int_det(minor)))
        if g == 1:
            return 1
    return g


def smith_diagonal(rows):
    """Invariant factors (nonnegative, each dividing the next) of an integer matrix."""
    if not rows or not rows[0]:
        return []
    a = [[int(x) for x in row] for row in rows]
    m, n = len(a), len(a[0])
    diag = []
    s = 0
    while s < m and s < n:
        pos, best = None, None
        for i in range(s, m):
            for j in range(s, n):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, pos = v, (i, j)
        if pos is None:
            break
        i, j = pos
        a[s], a[i] = a[i], a[s]
        for row in a:
            row[s], row[j] = row[j], row[s]
        dirty = False
        for i in range(m):
            if i != s and a[i][s]:
                q = a[i][s] // a[s][s]
                a[i] = [x - q * y for x, y in zip(a[i], a[s])]
                dirty = dirty or a[i][s] != 0
        for j in range(n):
            if j != s and a[s][j]:
                q = a[s][j] // a[s][s]
                for i in range(m):
                    a[i][j] -= q * a[i][s]
                dirty = dirty or a[s][j] != 0
        if dirty:
            continue
        p = abs(a[s][s])
        bad = next(
            (
                i
                for i in range(s + 1, m)
                for j in range(s + 1, n)
                if a[i][j] % p
            ),
            None,
        )
        if bad is not None:
            a[s] = [x + y for x, y in zip(a[s], a[bad])]
            continue
        diag.append(p)
        s += 1
    return diag


def affine_map_through(domain_points, image_points):
    """The unique affine map sending n+1 independent points of R^n as prescribed.

    Returns (matrix_rows, offset) with exact rational entries, or None when the
    domain points are affinely dependent.
    """
    n = len(domain_points[0])
    if len(domain_points) != n + 1:
        raise ValueError("need exactly n+1 domain points")
    sys_rows = [[Fraction(x) for x in p] + [Fraction(1)] for p in domain_points]
    mat = []
    off = []
    for j in range(len(image_points[0])):
        sol = solve_unique(sys_rows, [p[j] for p in image_points])
        if sol is None:
            return None
        mat.append(tuple(sol[:n]))
        off.append(sol[n])
    return [tuple(r) for r in mat], tuple(off)


def primitive_functional(coeffs, const):
    """Scale an affine functional to primitive integers, first nonzero positive."""
    vals = [Fraction(x) for x in coeffs] + [Fraction(const)]
    denom = 1
    for v in vals:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [int(v * denom) for v in vals]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    lead = next((v for v in ints if v), 0)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(ints[:-1]), ints[-1]


def affine_hull_functionals(points):
    """Canonical primitive functionals (a, c) with a.x + c = 0 on all points.

    The number returned is the codimension of the affine hull.
    """
    n = len(points[0])
    rows = [[Fraction(x) for x in p] + [Fraction(1)] for p in points]
    return [primitive_functional(vec[:n], vec[n]) for vec in nullspace(rows)]
