"""Null projections of simplicial cycles and involutions of strict ovaloids."""
from .core import EPS, AffineMap, GeometryError, Hyperplane, Simplex, independent, project_map, simplex_degenerate
from .chains import SimplicialChain, boundary, negate, pushforward, reduce, translate, union
from .nullproj import (NONZERO, ZERO_EXACT, ZERO_PROBABLE, ZeroVerdict, hull_reduce, null_directions_sweep,
                       planar_zero_test, projects_to_zero, winding_number)
from .ovaloid import AxisBox, Ellipsoid, composed_involution, equator, involution, signed_height, steiner

__version__ = "0.1.0"
