"""Exact-arithmetic workbench for classical vs. relativistic kinematics.

The package checks, mechanically and at desk scale, the transformation
algebra and the logical translations that connect classical kinematics with
special relativity: radarization and its factor maps, the speed remaps, the
two-sorted axiom catalogs, the translation functions between the theories,
and sampling-based model evaluation of translated axioms.
"""

from .scalars import (
    EXACT,
    F64,
    DivisionByZero,
    FieldError,
    NegativeArgument,
    NotPerfectSquare,
    PythagoreanVelocity,
    exact_sqrt,
    field_by_name,
    pythagorean_velocity,
)
from .geometry import (
    GeometryError,
    HorizontalSegment,
    LightCone,
    WorldlineSegment,
    collinear,
    on_cone,
    segment_velocity,
    space,
    space_sq,
    time_diff,
)
from .transforms import (
    AffineMap4,
    SpeedNotSTL,
    Singular,
    TransformClass,
    TransformError,
    boost_to_rest,
    classify,
    clock_scale,
    compose_all,
    core_map,
    einstein_sync,
    ftl_of_stl,
    galilean_boost,
    lorentz_boost,
    radarization,
    rotation_to_axis,
    stl_of_ftl,
    x_map,
    y_map,
)

__version__ = "0.1.0"
