"""Root systems, singular invariant differential operators and a numerical
harness for comparing convex hulls of supports of f and Df."""

from .convexgeo import ConvexBody, convex_hull, hausdorff, support_function
from .diffop import DiffOp, check_factorization, regularize
from .rootsys import RootSystem, build_root_system, generate_group, parabolic_subgroup

__all__ = [
    "ConvexBody", "convex_hull", "hausdorff", "support_function",
    "DiffOp", "check_factorization", "regularize",
    "RootSystem", "build_root_system", "generate_group", "parabolic_subgroup",
]
__version__ = "0.1.0"
