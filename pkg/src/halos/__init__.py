"""Construction, certification, and rendering for the family z^n + lambda/z^d."""

from .family import (
    CriticalData,
    MapParams,
    PoleError,
    check_rotational_symmetry,
    critical_data,
    eval_derivative,
    eval_map,
    preimages,
    validate_pair,
)
from .numerics import (
    ContinuationError,
    Curve,
    CurveSamplingError,
    Polynomial,
    RootSolveError,
    continue_roots,
    curve_distance,
    extract_contour,
    solve_roots,
    winding_number,
)
from .regions import (
    ConstructionError,
    PacManRegion,
    ParamRectangle,
    RegionSystem,
    build_W,
    build_region_system,
    select_epsilon,
    theta_bounds,
    trace_preimage_pair,
)
from .certify import (
    CertificationReport,
    CheckResult,
    check_containment,
    check_degree_two,
    check_error_reproduction,
    check_original_ray_error,
    check_unique_critical_point,
    check_winding,
    run_full_certification,
    winding_survey,
)
from .render import (
    RasterImage,
    Viewport,
    render_dynamical_plane,
    render_parameter_plane,
    write_image,
)

__version__ = "0.1.0"

__all__ = [
    "CriticalData", "MapParams", "PoleError", "check_rotational_symmetry",
    "critical_data", "eval_derivative", "eval_map", "preimages", "validate_pair",
    "ContinuationError", "Curve", "CurveSamplingError", "Polynomial",
    "RootSolveError", "continue_roots", "curve_distance", "extract_contour",
    "solve_roots", "winding_number",
    "ConstructionError", "PacManRegion", "ParamRectangle", "RegionSystem",
    "build_W", "build_region_system", "select_epsilon", "theta_bounds",
    "trace_preimage_pair",
    "CertificationReport", "CheckResult", "check_containment",
    "check_degree_two", "check_error_reproduction", "check_original_ray_error",
    "check_unique_critical_point", "check_winding", "run_full_certification",
    "winding_survey",
    "RasterImage", "Viewport", "render_dynamical_plane",
    "render_parameter_plane", "write_image",
    "__version__",
]
