"""Packings of lines, planes and subspaces in Grassmannian spaces."""
from .core import (
    Packing,
    Plane,
    chordal_distance,
    complement,
    distance,
    geodesic_distance,
    max_angle_distance,
    min_distance,
    orthonormalize,
    pairwise_distances,
    principal_angles,
    projection_matrix,
    random_plane,
)
from .bounds import BoundReport, audit, orthoplex_bound, simplex_bound
from .optimizer import OptimConfig, OptimResult, optimize
from .errors import GrassPackError

__version__ = "0.1.0"
