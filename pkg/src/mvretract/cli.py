"""Command-line surface for the workbench.

One subcommand per decision procedure, plus fixture generation and SVG
rendering. Exit codes: 0 when a question is decided or an object built,
1 when a yes/no question is answered negatively, 2 on input errors.
"""

import argparse
import json
import sys
from fractions import Fraction

from . import catalog, formats, terms
from .errors import MvRetractError, NotIdempotentError, ParseError
from .geometry import is_closed_domain, interior_connected
from .pwl import compile_terms, pwl_diff_witness
from .render import triangulation_svg
from .retracts import (
    index_bounds,
    multiplicity,
    same_algebra,
    same_range,
    verify_z_retraction,
)

EXIT_OK, EXIT_NO, EXIT_INPUT = 0, 1, 2


def _point_str(p):
    return "(" + ", ".join(formats.rational_str(c) for c in p) + ")"


def _simplex_str(verts):
    return "conv(" + ", ".join(_point_str(v) for v in verts) + ")"


def _tri_human(tri):
    if tri.is_empty:
        return "empty"
    return "\n".join(_simplex_str(t) for t in tri.maximal_point_tuples())


def _parse_terms(args_terms):
    return [terms.parse(text) for text in args_terms]


def _parse_term_list(text):
    return [terms.parse(part) for part in text.split(";") if part.strip()]


def _retraction_from(args):
    if getattr(args, "fixture", None):
        name = args.fixture
        if name.startswith("fib-"):
            return catalog.fibonacci_stage(int(name.split("-", 1)[1])).sigma
        return catalog.canonical(name)
    if not args.terms:
        raise MvRetractError("supply terms or --fixture")
    return verify_z_retraction(_parse_terms(args.terms))


def _fixture_triangulation(name):
    if name == "L":
        return catalog.l_domain()
    if name.startswith("wp-"):
        return catalog.wp_domain(int(name.split("-", 1)[1]))
    if name.startswith("fib-"):
        return catalog.fibonacci_stage(int(name.split("-", 1)[1])).sigma.map.domain
    return catalog.canonical(name).map.domain


def _emit(args, human, structured):
    print(structured if args.format == "structured" else human)


# -- subcommand bodies -------------------------------------------------------


def _cmd_eval(args):
    point = tuple(Fraction(c) for c in args.point.split(","))
    values = [terms.evaluate(t, point) for t in _parse_terms(args.terms)]
    _emit(
        args,
        " ".join(formats.rational_str(v) for v in values),
        json.dumps({"values": [formats.rational_str(v) for v in values]}),
    )
    return EXIT_OK


def _cmd_tautology(args):
    t = terms.parse(args.terms[0])
    n = max(terms.arity(t), 1)
    f = compile_terms([t], n)
    one = compile_terms([terms.Const(1)], n)
    w = pwl_diff_witness(f, one)
    if w is None:
        _emit(args, "tautology", json.dumps({"tautology": True}))
        return EXIT_OK
    _emit(
        args,
        f"not a tautology; value {formats.rational_str(f.evaluate(w)[0])} at {_point_str(w)}",
        json.dumps({"tautology": False, "witness": formats.point_to_hom(w)}),
    )
    return EXIT_NO


def _cmd_check_retraction(args):
    try:
        z = verify_z_retraction(_parse_terms(args.terms))
    except NotIdempotentError as exc:
        _emit(
            args,
            f"not a retraction: {exc}",
            json.dumps({"retraction": False, "witness": formats.point_to_hom(exc.witness)}),
        )
        return EXIT_NO
    _emit(
        args,
        "retraction with range:\n" + _tri_human(z.range),
        json.dumps(
            {"retraction": True, "range": formats.triangulation_to_obj(z.range)}
        ),
    )
    return EXIT_OK


def _cmd_range(args):
    z = _retraction_from(args)
    _emit(args, _tri_human(z.range), formats.triangulation_to_json(z.range))
    return EXIT_OK


def _cmd_closed_domain(args):
    z = _retraction_from(args)
    ok = is_closed_domain(z.range)
    _emit(args, "closed domain" if ok else "not a closed domain",
          json.dumps({"closed_domain": ok}))
    return EXIT_OK if ok else EXIT_NO


def _cmd_interior_connected(args):
    z = _retraction_from(args)
    ok = interior_connected(z.range)
    _emit(args, "connected interior" if ok else "disconnected interior",
          json.dumps({"interior_connected": ok}))
    return EXIT_OK if ok else EXIT_NO


def _report_human(report):
    if report.verdict == "INFINITE":
        return f"INFINITE, witness {_simplex_str(report.witness)}"
    lines = [f"FINITE({report.count})"]
    for i, cert in enumerate(report.certificates):
        body = " + ".join(_simplex_str(s) for s in cert.simplexes)
        lines.append(f"  domain {i + 1}: {body}")
    return "\n".join(lines)


def _cmd_multiplicity(args):
    report = multiplicity(_retraction_from(args))
    _emit(args, _report_human(report), formats.report_to_json(report))
    return EXIT_OK


def _cmd_index_bounds(args):
    copies = []
    for path in args.copies or []:
        with open(path, encoding="utf-8") as fh:
            copies.append(formats.triangulation_from_json(fh.read()))
    bounds = index_bounds(_retraction_from(args), candidate_copies=copies or None)
    upper = "UNBOUNDED" if bounds.upper is None else str(bounds.upper)
    lam = (
        "-"
        if bounds.min_component_measure is None
        else formats.rational_str(bounds.min_component_measure)
    )
    _emit(
        args,
        f"lower {bounds.lower}, upper {upper}, min component measure {lam}",
        formats.index_bounds_to_json(bounds),
    )
    return EXIT_OK


def _cmd_same_range(args):
    a = verify_z_retraction(_parse_term_list(args.first))
    b = verify_z_retraction(_parse_term_list(args.second))
    ok = same_range(a, b)
    _emit(args, "same range" if ok else "different ranges",
          json.dumps({"same_range": ok}))
    return EXIT_OK if ok else EXIT_NO


def _cmd_same_algebra(args):
    a = verify_z_retraction(_parse_term_list(args.first))
    b = verify_z_retraction(_parse_term_list(args.second))
    ok = same_algebra(a, b)
    _emit(args, "same algebra" if ok else "different algebras",
          json.dumps({"same_algebra": ok}))
    return EXIT_OK if ok else EXIT_NO


def _cmd_fixture(args):
    name = args.name
    if name == "L" or name.startswith("wp-"):
        payload = formats.triangulation_to_json(_fixture_triangulation(name))
        human = _tri_human(_fixture_triangulation(name))
    elif name.startswith("fib-"):
        stage = catalog.fibonacci_stage(int(name.split("-", 1)[1]))
        payload = json.dumps(
            {
                "map": formats.pwl_map_to_obj(stage.sigma.map),
                "range": formats.triangulation_to_obj(stage.sigma.range),
            },
            separators=(",", ":"),
            sort_keys=True,
        )
        human = f"stage {stage.n} retraction onto {_simplex_str(stage.u_simplex.vertices)}"
    else:
        z = catalog.canonical(name)
        payload = json.dumps(
            {
                "map": formats.pwl_map_to_obj(z.map),
                "range": formats.triangulation_to_obj(z.range),
            },
            separators=(",", ":"),
            sort_keys=True,
        )
        human = "retraction with range:\n" + _tri_human(z.range)
    text = payload if args.format == "structured" else human
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    return EXIT_OK


def _cmd_render_svg(args):
    if args.infile:
        with open(args.infile, encoding="utf-8") as fh:
            tri = formats.triangulation_from_json(fh.read())
        title = args.infile
    elif args.fixture:
        tri = _fixture_triangulation(args.fixture)
        title = args.fixture
    else:
        raise MvRetractError("render-svg needs --in or --fixture")
    highlights = None
    if args.highlight:
        with open(args.highlight, encoding="utf-8") as fh:
            report = formats.report_from_json(fh.read())
        highlights = [cert.simplexes for cert in report.certificates]
    svg = triangulation_svg(tri, highlights=highlights, title=title)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg + "\n")
    print(f"wrote {args.out}")
    return EXIT_OK


# -- wiring -------------------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="mvretract",
        description="exact workbench for term-defined piecewise-linear retractions of the unit cube",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument(
            "--format", choices=("human", "structured"), default="human"
        )
        return p

    p = add("eval", _cmd_eval, help="evaluate terms at a rational point")
    p.add_argument("terms", nargs="+", metavar="TERM")
    p.add_argument("--point", required=True, help="comma-separated rationals, e.g. 1/3,1/2")

    p = add("tautology", _cmd_tautology, help="decide whether a term is constantly 1")
    p.add_argument("terms", nargs=1, metavar="TERM")

    p = add("check-retraction", _cmd_check_retraction, help="verify idempotence of a term tuple")
    p.add_argument("terms", nargs="+", metavar="TERM")

    for name, fn, hlp in (
        ("range", _cmd_range, "fixed-point range of a retraction"),
        ("closed-domain", _cmd_closed_domain, "is the range a closed domain?"),
        ("interior-connected", _cmd_interior_connected, "is the range interior connected?"),
        ("multiplicity", _cmd_multiplicity, "count retraction-inducing domains"),
        ("index-bounds", _cmd_index_bounds, "bounds on the index invariant"),
    ):
        p = add(name, fn, help=hlp)
        p.add_argument("terms", nargs="*", metavar="TERM")
        p.add_argument("--fixture", help="named fixture instead of terms (e.g. half_meet, fib-2)")
        if name == "index-bounds":
            p.add_argument("--copies", action="append", metavar="FILE",
                           help="triangulation file with a candidate disjoint copy")

    for name, fn, hlp in (
        ("same-range", _cmd_same_range, "do two retractions share their range?"),
        ("same-algebra", _cmd_same_algebra, "do two retractions generate the same algebra?"),
    ):
        p = add(name, fn, help=hlp)
        p.add_argument("first", metavar="TERMS_A", help="semicolon-separated terms")
        p.add_argument("second", metavar="TERMS_B", help="semicolon-separated terms")

    p = add("fixture", _cmd_fixture, help="emit a named construction")
    p.add_argument("name", help="half_meet | half_tau | half_join | cyl_proj | L_fold | L | wp-P | fib-N")
    p.add_argument("--out", help="write the structured payload to a file")

    p = add("render-svg", _cmd_render_svg, help="draw a 2-D triangulation")
    p.add_argument("--in", dest="infile", help="triangulation file")
    p.add_argument("--fixture", help="named fixture to draw")
    p.add_argument("--highlight", help="multiplicity report file whose certificates to color")
    p.add_argument("--out", required=True)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MvRetractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
