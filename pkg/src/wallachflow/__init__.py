"""Planar dynamical-system analysis of the volume-normalized curvature flow
on three-parameter families of homogeneous metrics."""

from .blowup import blowup_linearizations, delta_u_roots, shifted_quadratic_parts
from .core import LieData, Parameters, params_from_dims, symmetric_functions, validate
from .equilibria import (
    CaseDiscriminants,
    EquilibriumRay,
    FamilyTag,
    newton_census,
    normalize_unit_volume,
    quartic_coefficients,
    quartic_discriminant,
    residual,
    solve_all,
    solve_general,
    solve_sum_half,
    solve_two_equal,
)
from .flow import (
    MetricPoint,
    Velocity3,
    b_term,
    phi,
    vector_field_2d,
    vector_field_3d,
    volume,
)
from .integrate import Trajectory, classify_limit, integrate_flow, integrate_flow_3d
from .linearize import (
    Classification,
    Linearization,
    PointKind,
    classify,
    f1,
    f2,
    jacobian_2d_fd,
    linearize_at,
    sigma_expression,
    sigma_zero_family,
    sigma_zero_points,
)
from .surfaces import (
    Region,
    SurfaceSample,
    component_classify,
    edge_curve,
    grad_q,
    omega_slice_a1_half,
    q1_eval,
    q_eval,
    scan_grid,
)

__version__ = "0.1.0"

__all__ = [
    "LieData",
    "Parameters",
    "params_from_dims",
    "symmetric_functions",
    "validate",
    "MetricPoint",
    "Velocity3",
    "b_term",
    "vector_field_3d",
    "vector_field_2d",
    "volume",
    "phi",
    "EquilibriumRay",
    "FamilyTag",
    "CaseDiscriminants",
    "residual",
    "solve_two_equal",
    "solve_sum_half",
    "solve_general",
    "solve_all",
    "newton_census",
    "quartic_coefficients",
    "quartic_discriminant",
    "normalize_unit_volume",
    "Linearization",
    "Classification",
    "PointKind",
    "f1",
    "f2",
    "linearize_at",
    "classify",
    "sigma_expression",
    "sigma_zero_family",
    "sigma_zero_points",
    "jacobian_2d_fd",
    "shifted_quadratic_parts",
    "delta_u_roots",
    "blowup_linearizations",
    "Region",
    "SurfaceSample",
    "q_eval",
    "grad_q",
    "q1_eval",
    "edge_curve",
    "omega_slice_a1_half",
    "component_classify",
    "scan_grid",
    "Trajectory",
    "integrate_flow",
    "integrate_flow_3d",
    "classify_limit",
]
