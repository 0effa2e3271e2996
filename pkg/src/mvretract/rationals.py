"""Rational points of the unit cube and their integer homogeneous coordinates.

A point is a tuple of fractions.Fraction values. Its homogeneous coordinate
vector is den(p) * (p, 1), an integer vector with coprime entries whose last
entry is the least common denominator of the coordinates.
"""

from fractions import Fraction
from math import gcd

from .errors import DimensionMismatchError
from .linalg import maximal_minor_gcd, mat_rank, smith_diagonal

Rational = Fraction


def point(*coords):
    """Build a rational point from ints, fractions, or 'p/q' strings."""
    return tuple(Fraction(c) for c in coords)


def denominator(p):
    """Least common denominator of the coordinates; 1 for integer points."""
    d = 1
    for c in p:
        q = Fraction(c).denominator
        d = d * q // gcd(d, q)
    return d


def to_homogeneous(p):
    d = denominator(p)
    return tuple(int(Fraction(c) * d) for c in p) + (d,)


def from_homogeneous(vec, require_unit_cube=False):
    """Affine correspondent of an integer vector with positive last entry.

    Non-primitive vectors are accepted (mediant sums arrive unreduced); the
    resulting point is always in lowest terms. With ``require_unit_cube`` the
    point must lie in [0,1]^n.
    """
    *nums, d = vec
    if d <= 0:
        raise ValueError("last homogeneous entry must be positive")
    p = tuple(Fraction(a, d) for a in nums)
    if require_unit_cube and not all(0 <= c <= 1 for c in p):
        raise ValueError(f"affine correspondent {p} lies outside the unit cube")
    return p


def in_unit_cube(p):
    return all(0 <= Fraction(c) <= 1 for c in p)


def is_basis_extendable(vectors):
    """Whether integer vectors extend to a basis of Z^d (d = common length).

    Decided by Smith normal form in higher dimension and by the gcd of the
    maximal minors below that; the two agree and the small route doubles as
    the test oracle. Rationally dependent input returns False.
    """
    vectors = [tuple(int(x) for x in v) for v in vectors]
    if not vectors:
        return True
    d = len(vectors[0])
    if any(len(v) != d for v in vectors):
        raise DimensionMismatchError("homogeneous vectors of unequal length")
    if len(vectors) > d or mat_rank(vectors) < len(vectors):
        return False
    if d <= 4:
        return maximal_minor_gcd(vectors) == 1
    return all(f == 1 for f in smith_diagonal(vectors))
