"""Backend selection for the intersection kernels.

The compiled ``_ckernel`` is used when it was built and the family's scaled
coordinates are small enough for 64-bit products; otherwise ``_pykernel``
runs the identical algorithm on Python integers.  Set
``TANGENCY_CHARGE_PURE=1`` to force the pure-Python path.
"""

from __future__ import annotations

import math
import os
from array import array
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional

from . import _pykernel
from .geometry import Closed

try:
    from . import _ckernel
except ImportError:  # pragma: no cover - depends on the build
    _ckernel = None

SMALL = 1 << 30

_forced_pure = os.environ.get("TANGENCY_CHARGE_PURE", "") not in ("", "0")


def backend() -> str:
    return "python" if (_ckernel is None or _forced_pure) else "cython"


BACKEND = backend()


@contextmanager
def use_backend(name: str):
    """Temporarily force ``"python"`` (or allow ``"cython"``) kernels."""
    global _forced_pure
    if name not in ("python", "cython"):
        raise ValueError(name)
    if name == "cython" and _ckernel is None:
        raise RuntimeError("compiled kernel not available")
    saved = _forced_pure
    _forced_pure = name == "python"
    try:
        yield
    finally:
        _forced_pure = saved


@dataclass
class ScaledCurve:
    xs: object
    ys: object
    left: Optional[tuple[int, int]]
    right: Optional[tuple[int, int]]
    closed: bool
    small: bool


def _pair(f):
    return None if f is None else (f.numerator, f.denominator)


def scale_family(geoms) -> tuple[int, list[ScaledCurve]]:
    """Scale every vertex by the common denominator of all coordinates."""
    den = 1
    for g in geoms:
        for v in g.vertices:
            den = math.lcm(den, v.x.denominator, v.y.denominator)
    out = []
    for g in geoms:
        xs = [int(v.x * den) for v in g.vertices]
        ys = [int(v.y * den) for v in g.vertices]
        left = _pair(getattr(g, "left_ray_slope", None))
        right = _pair(getattr(g, "right_ray_slope", None))
        mags = [abs(t) for t in xs + ys]
        for s in (left, right):
            if s is not None:
                mags.extend((abs(s[0]), s[1]))
        small = max(mags) < SMALL
        if small:
            xs, ys = array("q", xs), array("q", ys)
        out.append(ScaledCurve(xs, ys, left, right, isinstance(g, Closed), small))
    return den, out


def _fast(*curves) -> bool:
    return _ckernel is not None and not _forced_pure and all(c.small for c in curves)


def monotone_signs(a: ScaledCurve, b: ScaledCurve):
    mod = _ckernel if _fast(a, b) else _pykernel
    return mod.monotone_signs(a.xs, a.ys, a.left, a.right, b.xs, b.ys, b.left, b.right)


def segment_hits(a: ScaledCurve, b: ScaledCurve):
    mod = _ckernel if _fast(a, b) else _pykernel
    return mod.segment_hits(a.xs, a.ys, a.closed, b.xs, b.ys, b.closed)
