"""Tight pyramids and close-packing building blocks, checked numerically."""
from .errors import GeometryDomainError, SolverError
from .geometry import (
    SphericalTriangleAngles,
    right_corner_profile,
    split_corner_profile,
    monte_carlo_solid_angle,
    polygon_cone_solid_angle,
    solid_angle_from_rays,
    triangle_solid_angle,
)
from .polyhedron import Polyhedron, read_off

__version__ = "0.1.0"
