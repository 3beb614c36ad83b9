"""qclab: quasi-convex subsets of model Alexandrov spaces, checked numerically.

Model spaces (spheres, Euclidean spaces, flat cones, spindles), their
direction spaces, gradient flows of distance functions, and falsification
checkers for quasi-convexity and extremality.
"""
from __future__ import annotations

from ._kernels import BACKEND
from .checks import (
    CheckReport,
    check_corollaryC,
    check_def01,
    check_extremal,
    check_gradient_invariance,
    check_prop21,
    check_theoremA,
    estimate_join_epsilon,
    run_quasiconvex_checks,
    verify_fixed_point_set,
    verify_intersection,
    verify_suspension_structure,
    witness_margin,
)
from .directions import DirectionSet, DirectionSpace, Farthest, farthest_direction, set_distance
from .flow import (
    Curve,
    FlowConfig,
    gradient_curve,
    join_in_subset,
    radial_curve,
    tangent_curve,
)
from .scene import Scene, load_scene, parse_point, preset_names
from .spaceform import (
    InvalidTriangle,
    alexandrov_lemma_compare,
    comparison_angle,
    comparison_angles,
    model_diameter,
    right_angle_bound_check,
    side_from_angle,
)
from .spaces import Cone, Euclidean, Isometry, ModelSpace, Sphere, Spindle, builtin_isometries, make_space
from .subsets import SubsetSpec, fixed_point_set, intersect
from .tangent import dist_derivative, finite_difference, tangent_cone_estimate

__version__ = "0.1.0"

__all__ = [n for n in dir() if not n.startswith("_") and n != "annotations"]
