"""Planar supports for points and non-piercing axis-parallel rectangles."""
from .geometry import (
    Instance,
    InstanceError,
    LEdge,
    Point,
    Rect,
    Violation,
    dumps_instance,
    edge_discretely_pierces_rect,
    edges_cross,
    is_delaunay,
    is_nonpiercing_family,
    loads_instance,
    perturb_to_general_position,
    rect_pierces,
    validate_general_position,
)
from .generators import KINDS, generate, handcrafted
from .oracle import (
    ValidationError,
    check_planarity,
    check_support,
    floodfill_discretely_pierces,
    naive_build_support,
    verify_graph,
)
from .partition import ColoredPartition, layered_support, min_color, union_graph, verify_comparability
from .slabs import assert_slab_connectivity, compute_slab, compute_strips
from .render import render_svg
from .support import BuildStats, SupportGraph, dumps_edges, loads_edges
from .sweep import DivergenceError, fast_build_support

__version__ = "0.1.0"

__all__ = [
    "assert_slab_connectivity",
    "BuildStats",
    "check_planarity",
    "check_support",
    "ColoredPartition",
    "compute_slab",
    "compute_strips",
    "DivergenceError",
    "dumps_edges",
    "dumps_instance",
    "edge_discretely_pierces_rect",
    "edges_cross",
    "fast_build_support",
    "floodfill_discretely_pierces",
    "generate",
    "handcrafted",
    "Instance",
    "InstanceError",
    "is_delaunay",
    "is_nonpiercing_family",
    "KINDS",
    "layered_support",
    "LEdge",
    "loads_edges",
    "loads_instance",
    "min_color",
    "naive_build_support",
    "perturb_to_general_position",
    "Point",
    "Rect",
    "rect_pierces",
    "render_svg",
    "SupportGraph",
    "union_graph",
    "validate_general_position",
    "ValidationError",
    "verify_comparability",
    "verify_graph",
    "Violation",
]
