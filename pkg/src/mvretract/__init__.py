"""mvretract: exact workbench for piecewise-linear retractions of the unit cube.

Terms of the infinite-valued Lukasiewicz calculus compile to continuous
piecewise-linear maps with integer coefficients; idempotent ones retract the
cube onto a rational polyhedron. The package decides idempotence, computes
ranges, counts the domains inducing distinct retractions onto the same
algebra (with certificates, or an infinite-case witness), bounds the index
invariant, and ships the geometric toolkit (regular triangulations, mediants,
blow-ups, desingularization) those procedures run on.
"""

from .errors import MvRetractError
from .geometry import (
    Simplex,
    Triangulation,
    blow_up,
    desingularize,
    farey_mediant,
    interior_connected,
    is_closed_domain,
    is_regular,
    is_strongly_regular_triangulation,
    kuhn_triangulation,
    lebesgue_measure_ndim,
    polyhedra_equal,
    refine_along_hyperplane,
)
from .pwl import (
    AffinePiece,
    PwlMap,
    compile_term,
    compile_terms,
    compose,
    evaluate_map,
    fixed_point_set,
    pwl_equal,
    restrict,
)
from .rationals import (
    Rational,
    denominator,
    from_homogeneous,
    is_basis_extendable,
    to_homogeneous,
)
from .retracts import (
    HomeoDomainCertificate,
    IndexBounds,
    MultiplicityReport,
    ZRetraction,
    certify_homeo_domain,
    homeo_subcomplex,
    index_bounds,
    is_z_homeo_onto,
    multiplicity,
    same_algebra,
    same_range,
    verify_pwl_retraction,
    verify_z_retraction,
)
from .terms import arity, evaluate, parse

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
