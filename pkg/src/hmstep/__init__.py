"""Exact-rational step-function metric geometry.

Step functions on [0, 1) over a finite metric space, the integral metric
between them, windowed-average functionals and their pseudometrics, the
equiconnecting splice operators, and Dugundji extension systems for the
open interval and square.  Everything is arbitrary-precision rational;
there is no floating point in the core, so the property suites assert
exact equality.
"""

from ._backend import BACKEND
from .errors import ValidationError
from .space import (
    FiniteMetricSpace,
    SpaceMap,
    TestFunctional,
    functional_norm,
    functional_range,
    functional_value_bounds,
    lipschitz_seminorm,
    validate_space,
)
from .stepfn import (
    StepFunction,
    canonicalize,
    common_refinement,
    constant,
    evaluate,
    from_pairs,
    hm_distance,
    in_hm_n,
    neighborhood_contains,
    piece_count,
    pushforward,
)
from .functionals import (
    Window,
    WindowedFunctional,
    convex_midpoint_vector,
    indicator,
    project,
    pseudometric,
    sample_family,
    window_average,
)
from .equiconnect import (
    CertificateCheck,
    ContinuityCertificate,
    SimplexWeights,
    check_certificate,
    e1,
    e_n,
    hm_midpoint,
    make_certificate,
)
from .dugundji import (
    BoundaryData,
    IntervalSystem,
    SquareSystem,
    boundary_continuity_probe,
    build_system,
    dyadic_path,
    extend,
    shrink_probe,
    tabulate_boundary,
    verify_system,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ValidationError",
    "FiniteMetricSpace",
    "SpaceMap",
    "TestFunctional",
    "functional_norm",
    "functional_range",
    "functional_value_bounds",
    "lipschitz_seminorm",
    "validate_space",
    "StepFunction",
    "canonicalize",
    "common_refinement",
    "constant",
    "evaluate",
    "from_pairs",
    "hm_distance",
    "in_hm_n",
    "neighborhood_contains",
    "piece_count",
    "pushforward",
    "Window",
    "WindowedFunctional",
    "convex_midpoint_vector",
    "indicator",
    "project",
    "pseudometric",
    "sample_family",
    "window_average",
    "CertificateCheck",
    "ContinuityCertificate",
    "SimplexWeights",
    "check_certificate",
    "e1",
    "e_n",
    "hm_midpoint",
    "make_certificate",
    "BoundaryData",
    "IntervalSystem",
    "SquareSystem",
    "boundary_continuity_probe",
    "build_system",
    "dyadic_path",
    "extend",
    "shrink_probe",
    "tabulate_boundary",
    "verify_system",
    "__version__",
]
