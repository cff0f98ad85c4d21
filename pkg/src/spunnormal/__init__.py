"""Spun-normal surface toolkit for ideally triangulated cusped 3-manifolds."""

from .triangulation import (
    IdealTriangulation,
    TriangulationError,
    parse_triangulation,
    serialize_triangulation,
)

__version__ = "0.1.0"

__all__ = [
    "IdealTriangulation",
    "TriangulationError",
    "parse_triangulation",
    "serialize_triangulation",
    "__version__",
]
