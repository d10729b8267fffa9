"""Exact arrangements of polygonal curves, touching/crossing classification and charging audits."""

from .arrangement import (
    Arrangement,
    GeneralPositionError,
    IntersectionPoint,
    OrientationError,
    build_arrangement,
    oriented_arrangement,
    validate_general_position,
)
from .geometry import BiInfiniteMonotone, Closed, CurveRecord, DegenerateInput, OpenMonotone, Point, point
from .kernel import BACKEND

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "BACKEND",
    "BiInfiniteMonotone",
    "Closed",
    "CurveRecord",
    "DegenerateInput",
    "GeneralPositionError",
    "IntersectionPoint",
    "OpenMonotone",
    "OrientationError",
    "Point",
    "build_arrangement",
    "oriented_arrangement",
    "point",
    "validate_general_position",
]
