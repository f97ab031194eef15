"""Bounds on the rank of primitive Vassiliev invariants.

Two reduction algorithms over permutations give upper bounds, a thickening
map on caterpillar diagrams gives lower bounds, and generating series turn
primitive ranks into ranks of the whole diagram algebra.
"""

__version__ = "0.1.0"

from .perm import LinComb, Perm, compose, identity, orbit_minimize, theta  # noqa: E402
from .series import KNOWN_PRIMITIVES, algebra_ranks  # noqa: E402

__all__ = [
    "KNOWN_PRIMITIVES",
    "LinComb",
    "Perm",
    "__version__",
    "algebra_ranks",
    "compose",
    "identity",
    "orbit_minimize",
    "theta",
]
