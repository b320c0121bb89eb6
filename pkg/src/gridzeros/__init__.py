"""gridzeros: an exact laboratory for zeros of trivariate polynomials on
Cartesian products, the curve and incidence systems they induce, and the
additive-structure (degeneracy) dichotomy behind quadratic extremal
constructions."""

__version__ = "0.1.0"

from .scalars import GaussRat
from .poly import MPoly, UPolyView
from .parse import parse_poly, PolyParseError
from .elim import poly_gcd, resultant, squarefree_part, rational_roots
from .roots import complex_roots, RootFindingError
from .counting import (
    CountReport,
    GridSet,
    analyze,
    count_zeros,
    cs_chain_check,
    quadruple_stats,
    reference_bounds,
    scaling_sweep,
    witness_fiber_check,
)
from .curves import (
    CurveFamily,
    PlaneCurve,
    PopularReport,
    bezout_check,
    build_family,
    dual_curve,
    exceptional_set,
    family_common_degree,
    gamma_curve,
    popular_components,
)
from .degeneracy import (
    DEGENERATE,
    INCONCLUSIVE,
    NONDEGENERATE,
    DegeneracyVerdict,
    GPoly,
    QuadSystem,
    build_G,
    build_quad_system,
    degeneracy_test,
    jacobian_consistency,
    reduce_mod_V,
    sample_V_points,
)
from .constructions import (
    COMPOSED,
    PRODUCT,
    SUM,
    SpecialForm,
    extremal_sets,
    form_from_dict,
    to_poly,
    verify_quadratic_growth,
)
from .incidence import (
    CurveMultiset,
    PointSet2,
    bounded_multiplicity_check,
    incidence_bound_report,
    incidence_count,
    multiplicity_partition,
)
from .applications import (
    CantileverPoint,
    CurvePointSet,
    PlanePoint,
    cantilever_build,
    collinear_quadruples,
    collinear_triples,
    collinearity_det,
    cubic_point_set,
    directions_count,
    distance_triple_poly,
    line_point_set,
    parabola_point_set,
    third_intersection_cubic,
)
from .common import InputError, InvariantViolation
