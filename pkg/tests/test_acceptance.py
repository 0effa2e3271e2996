"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run with -s to see them on success).
All comparisons are exact rational arithmetic; the only tolerances are the
stated wall-clock budgets.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction as F
from math import comb, floor, gcd

from mvretract import catalog, geometry as geo, pwl, retracts as rt, terms
from mvretract.geometry import Triangulation, lebesgue_measure_ndim
from mvretract.rationals import denominator

from test_terms import random_term


def pt(*cs):
    return tuple(F(c) for c in cs)


@contextmanager
def criterion(number, description):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(
            f"CRITERION {number}: FAIL ({time.perf_counter() - start:.2f}s) {description}",
            flush=True,
        )
        raise
    print(
        f"CRITERION {number}: PASS ({time.perf_counter() - start:.2f}s) {description}",
        flush=True,
    )


HALF_MEET = "x1 /\\ ~x1"
HALF_TAU = "(x1 /\\ ~x1) /\\ ((~x1 (+) ~x1) (.) (~x1 (+) ~x1))"

_finite_reports = []


def _record(z, rep):
    if rep.is_finite:
        _finite_reports.append((z, rep))
    return rep


def test_criterion_1_half_interval_multiplicities():
    with criterion(1, "multiplicities 2 and 1 for the two half-interval retractions"):
        t0 = time.perf_counter()
        z_meet = rt.verify_z_retraction([terms.parse(HALF_MEET)])
        rep = _record(z_meet, rt.multiplicity(z_meet))
        assert time.perf_counter() - t0 < 1.0
        assert rep.verdict == "FINITE" and rep.count == 2
        assert [c.simplexes for c in rep.certificates] == [
            ((pt(0), pt("1/2")),),
            ((pt("1/2"), pt(1)),),
        ]
        t0 = time.perf_counter()
        z_tau = rt.verify_z_retraction([terms.parse(HALF_TAU)])
        rep_tau = _record(z_tau, rt.multiplicity(z_tau))
        assert time.perf_counter() - t0 < 1.0
        assert rep_tau.verdict == "FINITE" and rep_tau.count == 1
        assert rep_tau.certificates[0].simplexes == ((pt(0), pt("1/2")),)


def test_criterion_2_infinite_cases_and_wp_domains():
    with criterion(2, "projection and fold are infinite; W_p certified for p=3..6"):
        t0 = time.perf_counter()
        xi = rt.verify_z_retraction([terms.parse("x1"), terms.parse("0")])
        rep_xi = rt.multiplicity(xi)
        assert rep_xi.verdict == "INFINITE"
        assert len(rep_xi.witness) - 1 == 1 < 2
        rho = rt.verify_z_retraction(
            [terms.parse("x1 (-) x2"), terms.parse("x2 (-) x1")]
        )
        rep_rho = rt.multiplicity(rho)
        assert rep_rho.verdict == "INFINITE"
        assert len(rep_rho.witness) - 1 == 1 < 2
        cross = catalog.l_domain()
        domains = [catalog.wp_domain(p) for p in (3, 4, 5, 6)]
        for dom in domains:
            assert rt.is_z_homeo_onto(rho.map, dom, cross)
        for i, a in enumerate(domains):
            for b in domains[i + 1 :]:
                assert not geo.polyhedra_equal(a, b)
        assert time.perf_counter() - t0 < 5.0


def test_criterion_3_fibonacci_stages():
    with criterion(3, "staircase stages count 2, 4, and at least 8"):
        st1 = catalog.fibonacci_stage(1)
        rep1 = _record(st1.sigma, rt.multiplicity(st1.sigma))
        assert rep1.verdict == "FINITE" and rep1.count == 2
        st2 = catalog.fibonacci_stage(2)
        rep2 = _record(st2.sigma, rt.multiplicity(st2.sigma))
        assert rep2.verdict == "FINITE" and rep2.count == 4
        t0 = time.perf_counter()
        st3 = catalog.fibonacci_stage(3)
        rep3 = _record(st3.sigma, rt.multiplicity(st3.sigma))
        assert time.perf_counter() - t0 < 600.0
        assert rep3.verdict == "FINITE" and rep3.count >= 8


def test_criterion_4_one_dimensional_index():
    with criterion(4, "segment index 2 iff the length is at most one half"):
        t0 = time.perf_counter()
        cases = [
            ("x1 /\\ (~x1 (-) x1)", F(1, 3), 2),
            (HALF_MEET, F(1, 2), 2),
            ("x1 /\\ (~x1 (+) ~x1)", F(2, 3), 1),
            ("x1 /\\ (~x1 (+) ~x1 (+) ~x1)", F(3, 4), 1),
        ]
        for text, r, iota in cases:
            z = rt.verify_z_retraction([terms.parse(text)])
            segment = Triangulation.from_maximal(1, [(pt(0), pt(r))])
            assert geo.polyhedra_equal(z.range, segment)
            bounds = rt.index_bounds(z)
            assert bounds.lower == bounds.upper == iota
            assert bounds.min_component_measure == r
            _record(z, rt.multiplicity(z))
        assert time.perf_counter() - t0 < 1.0


def test_criterion_5_identity_retractions():
    with criterion(5, "identity on the cube has exactly one inducing domain"):
        t0 = time.perf_counter()
        for n in (1, 2):
            ident = rt.verify_z_retraction(
                [terms.parse(f"x{i + 1}") for i in range(n)]
            )
            rep = _record(ident, rt.multiplicity(ident))
            assert rep.verdict == "FINITE" and rep.count == 1
        assert time.perf_counter() - t0 < 1.0


TAUTOLOGIES = [
    "~~x1 <-> x1",
    "x1 (+) x2 <-> x2 (+) x1",
    "x1 (.) x2 <-> x2 (.) x1",
    "(x1 (+) x2) (+) x3 <-> x1 (+) (x2 (+) x3)",
    "(x1 (.) x2) (.) x3 <-> x1 (.) (x2 (.) x3)",
    "x1 (+) 0 <-> x1",
    "x1 (+) 1 <-> 1",
    "x1 (.) 1 <-> x1",
    "x1 (.) 0 <-> 0",
    "~0 <-> 1",
    "x1 (+) ~x1",
    "~(x1 (.) x2) <-> ~x1 (+) ~x2",
    "~(x1 (+) x2) <-> ~x1 (.) ~x2",
    "~(~x1 (+) x2) (+) x2 <-> ~(~x2 (+) x1) (+) x1",
    "x1 -> (x2 -> x1)",
    "(x1 -> x2) -> ((x2 -> x3) -> (x1 -> x3))",
    "((x1 -> x2) -> x2) -> ((x2 -> x1) -> x1)",
    "(~x1 -> ~x2) -> (x2 -> x1)",
    "x1 /\\ x2 <-> x1 (.) (x1 -> x2)",
    "x1 \\/ x2 <-> (x1 -> x2) -> x2",
]

NON_TAUTOLOGIES = [
    "x1",
    "~x1",
    "0",
    "x1 (+) x1 <-> x1",
    "x1 -> ~x1",
    "x1 (.) x2",
    "x1 <-> x2",
    "x1 \\/ ~x1",
    "x1 -> x1 (.) x1",
    "x1 (+) x1 <-> x1 (.) x1",
    "x2",
    "x1 /\\ x2 <-> x1 \\/ x2",
    "~(x1 -> x2)",
    "x1 (-) x2",
    "x2 -> x1",
    "x1 (+) x2",
    "x1 <-> ~x1",
    "x1 (.) x1",
    "x1 /\\ ~x1",
    "(x1 -> x2) -> x1",
]


def _tautology_witness(text):
    t = terms.parse(text)
    n = max(terms.arity(t), 1)
    f = pwl.compile_terms([t], n)
    one = pwl.compile_terms([terms.Const(1)], n)
    return f, pwl.pwl_diff_witness(f, one)


def _farey_fractions(max_den):
    out = set()
    for q in range(1, max_den + 1):
        for a in range(q + 1):
            if gcd(a, q) == 1:
                out.add(F(a, q))
    return sorted(out)


def _grid(max_den):
    fr = _farey_fractions(max_den)
    pts = []
    for x in fr:
        qx = x.denominator
        for y in fr:
            qy = y.denominator
            if qx * qy // gcd(qx, qy) <= max_den:
                pts.append((x, y))
    return pts


def test_criterion_6_tautology_engine():
    with criterion(6, "tautology corpus and grid-oracle agreement on 200 random pairs"):
        for text in TAUTOLOGIES:
            _, witness = _tautology_witness(text)
            assert witness is None, f"rejected tautology {text}"
        for text in NON_TAUTOLOGIES:
            f, witness = _tautology_witness(text)
            assert witness is not None, f"accepted non-tautology {text}"
            assert f.evaluate(witness) != (F(1),)
        rng = random.Random(2024)
        for _ in range(200):
            a = random_term(rng, 5)
            b = random_term(rng, 5)
            fa = pwl.compile_terms([a], 2)
            fb = pwl.compile_terms([b], 2)
            decided = pwl.pwl_equal(fa, fb)
            max_den = max(denominator(v) for v in fa.domain.vertices + fb.domain.vertices)
            grid = _grid(2 * max_den)
            sampled = all(
                terms.evaluate(a, p) == terms.evaluate(b, p) for p in grid
            )
            assert decided == sampled


def test_criterion_7_geometry_properties():
    with criterion(7, "blow-up, measure, desingularization, and denominator properties"):
        rng = random.Random(4242)
        u1 = (pt(0, 0), pt(1, 0), pt(1, 1))
        v1 = (pt(0, 0), pt(0, 1), pt(1, 1))
        step0 = Triangulation.from_maximal(2, [u1, v1])

        # 500 random Farey blow-ups: regularity, subdivision, support measure
        steps_done = 0
        while steps_done < 500:
            tri = step0
            for _ in range(10):
                s = rng.choice(tri.maximal_simplexes)
                size = rng.randint(2, len(s))
                face = tuple(sorted(rng.sample(list(s), size)))
                mediant = geo.farey_mediant(geo.Simplex(tri.points_of(face)))
                new = geo.blow_up(tri, mediant)
                steps_done += 1
                assert geo.is_regular_triangulation(new)
                assert geo.triangulation_measure(new) == 1
                olds = tri.maximal_point_tuples()
                for piece in new.maximal_point_tuples():
                    assert any(
                        all(geo.point_in_simplex(v, old) for v in piece)
                        for old in olds
                    )
                tri = new

        # 500 desingularizations of non-regular inputs
        for case in range(500):
            if case % 2:
                q = rng.randint(2, 9)
                a = rng.randint(0, q - 2)
                seg = Triangulation.from_maximal(1, [((F(a, q),), (F(a + 2, q),))])
                out = geo.desingularize(seg)
                src = seg
            else:
                s = rng.choice(step0.maximal_simplexes)
                verts = step0.points_of(s)
                weights = [F(rng.randint(1, 3)) for _ in verts]
                total = sum(weights)
                b = tuple(
                    sum((w * v[i] for w, v in zip(weights, verts)), F(0)) / total
                    for i in range(2)
                )
                src = geo.blow_up(step0, b)
                out = geo.desingularize(src)
            for s in out.simplexes:
                assert geo.is_regular(out.points_of(s))
            assert geo.polyhedra_equal(out, src)

        # denominator preservation on every certificate vertex of criteria 1-3
        assert _finite_reports, "criteria 1-3 must run before this check"
        for _, rep in _finite_reports:
            for cert in rep.certificates:
                for simplex, image in zip(cert.simplexes, cert.images):
                    for v, iv in zip(simplex, image):
                        assert denominator(iv) == denominator(v)


def test_criterion_8_soundness_cross_checks():
    with criterion(8, "binomial bound, equal certificate measures, disjoint interiors"):
        assert _finite_reports
        for z, rep in _finite_reports:
            comps = geo.facet_components(z.range)
            lam = min(
                sum((lebesgue_measure_ndim(z.range.points_of(s)) for s in comp), F(0))
                for comp in comps
            )
            assert rep.count <= comb(floor(1 / lam), len(comps))
            measures = {
                sum((lebesgue_measure_ndim(s) for s in cert.simplexes), F(0))
                for cert in rep.certificates
            }
            assert len(measures) == 1
            for i, a in enumerate(rep.certificates):
                for b in rep.certificates[i + 1 :]:
                    for sa in a.simplexes:
                        for sb in b.simplexes:
                            hits = geo.simplex_pair_intersection_vertices(sa, sb)
                            if hits:
                                assert geo._affine_dim(tuple(hits)) < z.ambient_dim


def test_criterion_9_algebra_equality():
    with criterion(9, "fold and mirrored fold agree; distinct same-range maps differ"):
        sigma = rt.verify_z_retraction([terms.parse(HALF_MEET)])
        join = rt.verify_z_retraction([terms.parse("x1 \\/ ~x1")])
        tau = rt.verify_z_retraction([terms.parse(HALF_TAU)])
        assert rt.same_algebra(sigma, join)
        assert rt.same_range(sigma, tau)
        assert not rt.same_algebra(sigma, tau)
