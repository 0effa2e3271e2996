import random
from fractions import Fraction as F
from math import comb, floor

import pytest

from mvretract import catalog, geometry as geo, pwl, retracts as rt, terms
from mvretract.errors import (
    DimensionMismatchError,
    NotIdempotentError,
    VerificationError,
)
from mvretract.geometry import Triangulation, lebesgue_measure_ndim

from test_terms import random_term


def pt(*cs):
    return tuple(F(c) for c in cs)


def zr(*texts):
    return rt.verify_z_retraction([terms.parse(t) for t in texts])


HALF_MEET = "x1 /\\ ~x1"
HALF_TAU = "(x1 /\\ ~x1) /\\ ((~x1 (+) ~x1) (.) (~x1 (+) ~x1))"


def test_verify_examples():
    z = zr(HALF_MEET)
    assert z.range.maximal_point_tuples() == [(pt(0), pt("1/2"))]
    ident = zr("x1", "x2")
    assert geo.polyhedra_equal(ident.range, geo.kuhn_triangulation(2))
    with pytest.raises(NotIdempotentError) as err:
        zr("x1 (+) x1")
    assert err.value.witness == (F(1, 4),)
    f = pwl.compile_terms([terms.parse("x1 (+) x1")], 1)
    assert f.evaluate(f.evaluate(err.value.witness)) == (F(1),)
    assert f.evaluate(err.value.witness) == (F(1, 2),)


def test_verify_rejects_excess_arity():
    with pytest.raises(DimensionMismatchError):
        rt.verify_z_retraction([terms.parse("x2")])


def test_homeo_subcomplex_examples():
    z = zr(HALF_MEET)
    delta, nabla = rt.homeo_subcomplex(z)
    tops = {delta.points_of(s) for s in nabla if len(s) == 2}
    assert tops == {(pt(0), pt("1/2")), (pt("1/2"), pt(1))}

    xi = zr("x1", "0")
    delta, nabla = rt.homeo_subcomplex(xi)
    assert not [s for s in nabla if len(s) == 3]

    ident = zr("x1", "x2")
    delta, nabla = rt.homeo_subcomplex(ident)
    assert set(nabla) == set(delta.simplexes)


def test_certify_homeo_domain_examples():
    z = zr(HALF_MEET)
    lower = (pt(0), pt("1/2"))
    upper = (pt("1/2"), pt(1))
    assert rt.certify_homeo_domain(z, [lower])
    assert rt.certify_homeo_domain(z, [upper])
    assert not rt.certify_homeo_domain(z, [lower, upper])
    assert not rt.certify_homeo_domain(z, [])


def test_multiplicity_examples():
    rep = rt.multiplicity(zr(HALF_MEET))
    assert rep.verdict == "FINITE" and rep.count == 2
    assert [c.simplexes for c in rep.certificates] == [
        ((pt(0), pt("1/2")),),
        ((pt("1/2"), pt(1)),),
    ]

    rep_tau = rt.multiplicity(zr(HALF_TAU))
    assert rep_tau.verdict == "FINITE" and rep_tau.count == 1
    assert rep_tau.certificates[0].simplexes == ((pt(0), pt("1/2")),)

    xi = rt.multiplicity(zr("x1", "0"))
    assert xi.verdict == "INFINITE"
    assert len(xi.witness) == 2 and len(xi.witness[0]) == 2

    rho = rt.multiplicity(zr("x1 (-) x2", "x2 (-) x1"))
    assert rho.verdict == "INFINITE"
    assert len(rho.witness) == 2

    for n in (1, 2):
        ident = rt.verify_z_retraction([terms.parse(f"x{i + 1}") for i in range(n)])
        rep_id = rt.multiplicity(ident)
        assert rep_id.verdict == "FINITE" and rep_id.count == 1


def test_multiplicity_dichotomy_matches_closed_domain():
    cases = [
        zr(HALF_MEET),
        zr(HALF_TAU),
        zr("x1 \\/ ~x1"),
        zr("x1", "0"),
        zr("x1 (-) x2", "x2 (-) x1"),
        zr("x1", "x2"),
        catalog.fibonacci_stage(1).sigma,
        catalog.fibonacci_stage(2).sigma,
    ]
    for z in cases:
        rep = rt.multiplicity(z)
        assert (rep.verdict == "INFINITE") == (not geo.is_closed_domain(z.range))
        if rep.is_finite:
            assert rep.count >= 1
            sets = [frozenset(c.simplexes) for c in rep.certificates]
            assert len(sets) == len(set(sets))


def _report_soundness(z, rep):
    assert rep.is_finite
    bounds = rt.index_bounds(z)
    lam = bounds.min_component_measure
    comps = geo.facet_components(z.range)
    assert rep.count <= comb(floor(1 / lam), len(comps))
    measures = set()
    for cert in rep.certificates:
        m = sum((lebesgue_measure_ndim(s) for s in cert.simplexes), F(0))
        measures.add(m)
        for simplex, image in zip(cert.simplexes, cert.images):
            for v, iv in zip(simplex, image):
                from mvretract.rationals import denominator

                assert denominator(iv) == denominator(v)
    assert len(measures) == 1
    for i, a in enumerate(rep.certificates):
        for b in rep.certificates[i + 1 :]:
            for sa in a.simplexes:
                for sb in b.simplexes:
                    hits = geo.simplex_pair_intersection_vertices(sa, sb)
                    if hits:
                        # touching is fine; interior overlap is not
                        assert geo._affine_dim(tuple(hits)) < z.ambient_dim


def test_report_soundness_cross_checks():
    for z in (zr(HALF_MEET), zr(HALF_TAU), zr("x1", "x2"), catalog.fibonacci_stage(2).sigma):
        _report_soundness(z, rt.multiplicity(z))


def test_index_bounds_examples():
    b = rt.index_bounds(zr(HALF_MEET))
    assert (b.lower, b.upper, b.min_component_measure) == (2, 2, F(1, 2))
    b = rt.index_bounds(zr("x1 /\\ (~x1 (+) ~x1)"))
    assert (b.lower, b.upper) == (1, 1)
    for n in (1, 2):
        ident = rt.verify_z_retraction([terms.parse(f"x{i + 1}") for i in range(n)])
        b = rt.index_bounds(ident)
        assert (b.lower, b.upper, b.min_component_measure) == (1, 1, F(1))


def test_index_bounds_unbounded_for_thin_range():
    b = rt.index_bounds(zr("x1", "0"))
    assert b.upper is None and b.min_component_measure is None


def test_index_bounds_with_candidate_copies():
    st1 = catalog.fibonacci_stage(1)
    with pytest.raises(VerificationError):
        # multi-simplex candidates have no implementable witness here
        rt.index_bounds(st1.sigma, candidate_copies=[geo.kuhn_triangulation(2)])
    # upper triangle touches the range along the diagonal: not disjoint, so
    # it cannot raise the lower bound beyond the multiplicity
    upper = Triangulation.from_maximal(2, [(pt(0, 0), pt(0, 1), pt(1, 1))])
    assert rt.index_bounds(st1.sigma, candidate_copies=[upper]).lower == 2

    st2 = catalog.fibonacci_stage(2)
    # a regular triangle with matching vertex denominators, strictly separated
    # from the range U_2 by the line y = x/2 + 1/2: verifies and stays counted
    copy = Triangulation.from_maximal(2, [(pt(0, 1), pt(1, 1), pt(0, "1/2"))])
    bounds = rt.index_bounds(st2.sigma, candidate_copies=[copy])
    assert bounds.lower == 4 and bounds.upper == comb(4, 1)


def test_same_range_examples():
    sigma = zr(HALF_MEET)
    tau = zr(HALF_TAU)
    join = zr("x1 \\/ ~x1")
    assert rt.same_range(sigma, tau)
    assert not rt.same_range(sigma, join)
    assert rt.same_range(sigma, sigma)
    with pytest.raises(DimensionMismatchError):
        rt.same_range(sigma, zr("x1", "x2"))


def test_same_algebra_examples():
    sigma = zr(HALF_MEET)
    tau = zr(HALF_TAU)
    join = zr("x1 \\/ ~x1")
    assert rt.same_algebra(sigma, join)
    assert not rt.same_algebra(sigma, tau)
    assert rt.same_algebra(sigma, sigma)
    # distinct same-range retractions generate incomparable algebras
    assert rt.same_range(sigma, tau) and not pwl.pwl_equal(sigma.map, tau.map)


def test_same_algebra_on_random_idempotents():
    rng = random.Random(61)
    found = 0
    while found < 6:
        t = random_term(rng, 3, max_var=1)
        try:
            z = rt.verify_z_retraction([t])
        except NotIdempotentError:
            continue
        found += 1
        assert rt.same_algebra(z, z)


def test_is_z_homeo_onto_wp():
    rho = zr("x1 (-) x2", "x2 (-) x1")
    L = catalog.l_domain()
    for p in (3, 4, 5, 6):
        assert rt.is_z_homeo_onto(rho.map, catalog.wp_domain(p), L)
    bad = Triangulation.from_maximal(
        2, [(pt(0, 1), pt(0, 0)), (pt(0, 0), pt("1/2", "1/2"))]
    )
    assert not rt.is_z_homeo_onto(rho.map, bad, L)
