"""Fourier support-function toolkit for parametric isoperimetric-type inequalities."""

from .curve_model import (
    PlanePoint,
    SupportFourier,
    boundary_point,
    check_convexity,
    curvature_radius,
    eval_support,
    evolute_point,
    is_disk,
    load_curve,
    random_convex_curve,
    save_curve,
)
from .errors import ConditionNotMet, NotConvexError, SolverError, UndefinedConstantError
from .inequality import (
    PRESET_NAMES,
    ParamSet,
    check_conditions,
    classical_checks,
    eval_W,
    f_poly,
    fourier_lower_bound,
    load_params,
    preset,
    verify_chain,
)
from .oracle import cross_check, oracle_quantities, periodic_quadrature
from .quantities import (
    QuantitySet,
    circumradius_inradius,
    extremal_curvature_radii,
    full_quantities,
    spectral_quantities,
    total_squared_curvature,
)
from .stability import (
    Stability,
    classify_stability,
    h1_distance,
    h2_distance_sq,
    instability_witness,
    stability_constants,
    steiner_disk,
    verify_stability,
)
