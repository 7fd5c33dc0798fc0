"""Numerical geometry of space-like graphs in pseudo-Euclidean space."""

from .calibration import (
    boundary_point,
    boundary_quantities,
    calibration_value,
    growth_scan,
    lemma1_residual,
    stokes_check,
    volume_identity,
)
from .config import parse_config, parse_surface
from .errors import (
    ChartError,
    ConfigError,
    EvaluationError,
    GeometryError,
    InputError,
    MeanCurvatureDegenerateError,
    NotSpaceLikeError,
    PoleError,
    SignatureViolationError,
    UnsupportedCodimensionError,
)
from .expression import expression_surface
from .geometry import Signature, SurfaceDef, curvature, mean_curvature_scalar, point_geometry
from .hyperbolic import composite_mth, gauss_map, h1, h2, horoball_check, isometry_residual
from .surfaces import cylinder, hyperboloid, plane, polynomial, radial, without_derivatives

__all__ = [name for name in dir() if not name.startswith("_")]
