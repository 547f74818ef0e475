"""Exact combinatorics of genus-zero tropical stable maps.

A pure-Python, exact-arithmetic library for simplicial rational cone
complexes, their subdivisions (stellar, common refinement, smoothing,
slope-sensitive), decorated combinatorial types with balancing and
per-divisor bookkeeping checks, two independent smoothability decision
procedures (an exact feasibility solve and a constructive lift), and a
catalogue-driven type enumerator.  Everything runs over the rationals:
no floats anywhere.
"""

from .cones import (
    ComplexError,
    Cone,
    ConeComplex,
    CoordinateProjection,
    ORIGIN,
    PLFunction,
    build_snc_tropicalization,
    coordinate_projection,
    evaluate_pl,
    minimal_containing_cone,
)
from .combtypes import (
    CombinatorialType,
    DecoratedGraph,
    NumericalData,
    TypeProblem,
    ValidationCheck,
    ValidationReport,
    check_gathmann,
    check_global_balancing,
    collect_sensitive_slopes,
    lift_numerical_data,
    pushforward_type,
    solve_balancing,
    validate_type,
)
from .enumeration import DegreeCatalogue, canonical_code, enumerate_types, sensitize_for_data
from .feasibility import LinearSystem, fm_feasible, simplex_feasible
from .linalg import LinAlgError, is_unimodular, lattice_index, primitive
from .render import RenderError, render, render_dot, render_svg
from .smoothing import (
    Realization,
    SensitivityReport,
    check_sensitivity_consequences,
    smooth_construct,
    smoothable_lp,
    smoothable_simplex,
    verify_realization,
)
from .subdivide import (
    Subdivision,
    common_refinement,
    compose,
    identity_subdivision,
    resolve_smooth,
    sensitize,
    slice_by_hyperplane,
    stellar,
    stellar_at_point,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexError",
    "Cone",
    "ConeComplex",
    "CoordinateProjection",
    "ORIGIN",
    "PLFunction",
    "build_snc_tropicalization",
    "coordinate_projection",
    "evaluate_pl",
    "minimal_containing_cone",
    "CombinatorialType",
    "DecoratedGraph",
    "NumericalData",
    "TypeProblem",
    "ValidationCheck",
    "ValidationReport",
    "check_gathmann",
    "check_global_balancing",
    "collect_sensitive_slopes",
    "lift_numerical_data",
    "pushforward_type",
    "solve_balancing",
    "validate_type",
    "DegreeCatalogue",
    "canonical_code",
    "enumerate_types",
    "sensitize_for_data",
    "LinearSystem",
    "fm_feasible",
    "simplex_feasible",
    "LinAlgError",
    "is_unimodular",
    "lattice_index",
    "primitive",
    "RenderError",
    "render",
    "render_dot",
    "render_svg",
    "Realization",
    "SensitivityReport",
    "check_sensitivity_consequences",
    "smooth_construct",
    "smoothable_lp",
    "smoothable_simplex",
    "verify_realization",
    "Subdivision",
    "common_refinement",
    "compose",
    "identity_subdivision",
    "resolve_smooth",
    "sensitize",
    "slice_by_hyperplane",
    "stellar",
    "stellar_at_point",
    "__version__",
]
