import random
from fractions import Fraction as F

import pytest

from mvretract.errors import DimensionMismatchError
from mvretract.linalg import maximal_minor_gcd, smith_diagonal
from mvretract.rationals import (
    denominator,
    from_homogeneous,
    is_basis_extendable,
    point,
    to_homogeneous,
)


def test_denominator_examples():
    assert denominator(point(0, 0)) == 1
    assert denominator(point("1/3", "1/2")) == 6
    assert denominator(point("2/5", "1/5")) == 5


def test_to_homogeneous_examples():
    assert to_homogeneous(point(0, 0)) == (0, 0, 1)
    assert to_homogeneous(point(1, "1/2")) == (2, 1, 2)
    assert to_homogeneous(point("2/5", "1/5")) == (2, 1, 5)


def test_from_homogeneous_examples():
    assert from_homogeneous((0, 0, 1)) == point(0, 0)
    assert from_homogeneous((3, 1, 5)) == point("3/5", "1/5")
    assert from_homogeneous((1, 0, 3)) == point("1/3", 0)


def test_from_homogeneous_accepts_unreduced():
    assert from_homogeneous((3, 6)) == (F(1, 2),)


def test_from_homogeneous_cube_flag():
    assert from_homogeneous((3, 2)) == (F(3, 2),)
    with pytest.raises(ValueError):
        from_homogeneous((3, 2), require_unit_cube=True)


def test_homogeneous_round_trip():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randint(1, 4)
        p = tuple(F(rng.randint(0, 40), rng.randint(1, 40)) for _ in range(n))
        p = tuple(min(c, F(1)) for c in p)
        assert from_homogeneous(to_homogeneous(p)) == p


def test_denominator_of_affine_correspondent():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(1, 3)
        vec = [rng.randint(0, 9) for _ in range(n)] + [rng.randint(1, 12)]
        from math import gcd

        g = 0
        for a in vec:
            g = gcd(g, a)
        if g != 1:
            continue
        assert denominator(from_homogeneous(vec)) == vec[-1]


def test_basis_extendable_examples():
    assert is_basis_extendable([(0, 0, 1), (1, 0, 1), (1, 1, 1)])
    assert not is_basis_extendable([(1, 3), (2, 3)])
    assert is_basis_extendable([(1, 1, 3)])


def test_basis_extendable_rejects_dependent():
    assert not is_basis_extendable([(1, 0, 1), (2, 0, 2)])
    assert not is_basis_extendable([(1, 0), (0, 1), (1, 1)])


def test_basis_extendable_ragged_input():
    with pytest.raises(DimensionMismatchError):
        is_basis_extendable([(1, 0, 1), (1, 0)])


def _random_unimodular(rng, d):
    """Product of elementary integer row operations: always determinant +-1."""
    mat = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    for _ in range(8):
        i, j = rng.sample(range(d), 2)
        c = rng.randint(-3, 3)
        mat[i] = [a + c * b for a, b in zip(mat[i], mat[j])]
        if rng.random() < 0.3:
            mat[i], mat[j] = mat[j], mat[i]
    return mat


def _matmul(rows, mat):
    d = len(mat)
    return [
        tuple(sum(row[k] * mat[k][j] for k in range(d)) for j in range(d))
        for row in rows
    ]


def test_basis_extendable_invariances():
    rng = random.Random(23)
    for _ in range(120):
        d = rng.randint(2, 5)
        k = rng.randint(1, d)
        rows = [tuple(rng.randint(-4, 4) for _ in range(d)) for _ in range(k)]
        base = is_basis_extendable(rows)
        shuffled = rows[:]
        rng.shuffle(shuffled)
        assert is_basis_extendable(shuffled) == base
        assert is_basis_extendable(_matmul(rows, _random_unimodular(rng, d))) == base


def test_smith_route_matches_minor_gcd_oracle():
    rng = random.Random(41)
    for _ in range(200):
        d = rng.randint(2, 6)
        k = rng.randint(1, d)
        rows = [[rng.randint(-5, 5) for _ in range(d)] for _ in range(k)]
        diag = smith_diagonal(rows)
        snf_ok = len(diag) == k and all(f == 1 for f in diag)
        gcd_ok = maximal_minor_gcd(rows) == 1
        assert snf_ok == gcd_ok


def test_large_fibonacci_denominators_do_not_overflow():
    a, b = 1, 1
    for _ in range(300):
        a, b = b, a + b
    p = (F(1, b),)
    assert to_homogeneous(p) == (1, b)
    assert denominator(p) == b
