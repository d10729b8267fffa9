"""Exact rational plane geometry for polygonal curves.

Every coordinate is a :class:`fractions.Fraction`; no predicate ever touches a
float.  Curves come in three shapes:

* :class:`OpenMonotone` -- an x-monotone polyline over a bounded x-interval,
* :class:`BiInfiniteMonotone` -- the same, continued by a ray at each end,
* :class:`Closed` -- a simple polygon with an optional orientation.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Optional, Sequence, Union

Rational = Fraction


class DegenerateInput(ValueError):
    """Raised when an input violates the general-position assumptions."""


def Q(value) -> Fraction:
    """Coerce ``value`` (int, Fraction, or a ``"p/q"`` string) to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact coordinates")
    return Fraction(value)


def fmt(value: Fraction) -> str:
    """Serialize a Fraction as ``"p/q"`` (always with a denominator)."""
    return f"{value.numerator}/{value.denominator}"


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    def __repr__(self):
        return f"Point({self.x}, {self.y})"


def point(x, y) -> Point:
    return Point(Q(x), Q(y))


class Segment(NamedTuple):
    p: Point
    q: Point


def cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the turn a -> b -> c (+1 left, -1 right, 0 collinear)."""
    v = cross(a.x, a.y, b.x, b.y, c.x, c.y)
    return (v > 0) - (v < 0)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


# ---------------------------------------------------------------------------
# curve geometries


def _as_points(vertices) -> tuple[Point, ...]:
    return tuple(v if isinstance(v, Point) else point(*v) for v in vertices)


@dataclass(frozen=True)
class OpenMonotone:
    vertices: tuple[Point, ...]

    def __post_init__(self):
        vs = _as_points(self.vertices)
        object.__setattr__(self, "vertices", vs)
        if len(vs) < 2:
            raise DegenerateInput("a monotone curve needs at least 2 vertices")
        for u, v in zip(vs, vs[1:]):
            if not u.x < v.x:
                raise DegenerateInput(f"vertex abscissas not strictly increasing at {u} -> {v}")

    kind = "open"
    left_ray_slope = None
    right_ray_slope = None

    @cached_property
    def xs(self) -> list[Fraction]:
        return [v.x for v in self.vertices]

    @property
    def domain(self) -> tuple[Optional[Fraction], Optional[Fraction]]:
        return self.vertices[0].x, self.vertices[-1].x

    def segments(self) -> list[Segment]:
        vs = self.vertices
        return [Segment(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]

    def slopes(self) -> list[Fraction]:
        vs = self.vertices
        return [(v.y - u.y) / (v.x - u.x) for u, v in zip(vs, vs[1:])]


@dataclass(frozen=True)
class BiInfiniteMonotone:
    vertices: tuple[Point, ...]
    left_ray_slope: Fraction
    right_ray_slope: Fraction

    def __post_init__(self):
        vs = _as_points(self.vertices)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "left_ray_slope", Q(self.left_ray_slope))
        object.__setattr__(self, "right_ray_slope", Q(self.right_ray_slope))
        if len(vs) < 2:
            raise DegenerateInput("a monotone curve needs at least 2 vertices")
        for u, v in zip(vs, vs[1:]):
            if not u.x < v.x:
                raise DegenerateInput(f"vertex abscissas not strictly increasing at {u} -> {v}")

    kind = "biinfinite"

    @cached_property
    def xs(self) -> list[Fraction]:
        return [v.x for v in self.vertices]

    @property
    def domain(self) -> tuple[Optional[Fraction], Optional[Fraction]]:
        return None, None

    def segments(self) -> list[Segment]:
        vs = self.vertices
        return [Segment(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]

    def slopes(self) -> list[Fraction]:
        vs = self.vertices
        inner = [(v.y - u.y) / (v.x - u.x) for u, v in zip(vs, vs[1:])]
        return [self.left_ray_slope, *inner, self.right_ray_slope]


def signed_area2(vertices: Sequence[Point]) -> Fraction:
    """Twice the signed area (positive for counter-clockwise order)."""
    total = Fraction(0)
    n = len(vertices)
    for i in range(n):
        u, v = vertices[i], vertices[(i + 1) % n]
        total += u.x * v.y - v.x * u.y
    return total


@dataclass(frozen=True)
class Closed:
    """A simple polygon.

    The vertex list is the traversal order.  When ``orientation`` is given the
    vertices are re-ordered (keeping the first vertex) so the traversal
    matches it.
    """

    vertices: tuple[Point, ...]
    orientation: Optional[str] = None

    def __post_init__(self):
        vs = _as_points(self.vertices)
        if len(vs) < 3:
            raise DegenerateInput("a closed curve needs at least 3 vertices")
        if self.orientation not in (None, "cw", "ccw"):
            raise ValueError(f"bad orientation {self.orientation!r}")
        area = signed_area2(vs)
        if area == 0:
            raise DegenerateInput("closed curve has zero area")
        if self.orientation is not None and (area > 0) != (self.orientation == "ccw"):
            vs = (vs[0],) + tuple(reversed(vs[1:]))
        object.__setattr__(self, "vertices", vs)

    kind = "closed"

    @cached_property
    def is_ccw(self) -> bool:
        return signed_area2(self.vertices) > 0

    def oriented(self, orientation: str) -> "Closed":
        return Closed(self.vertices, orientation)

    def segments(self) -> list[Segment]:
        vs = self.vertices
        n = len(vs)
        return [Segment(vs[i], vs[(i + 1) % n]) for i in range(n)]

    def locate(self, p: Point) -> tuple[int, Fraction]:
        """Traversal position of ``p``: (edge index, parameter in [0, 1))."""
        vs = self.vertices
        n = len(vs)
        for i in range(n):
            if p == vs[i]:
                return i, Fraction(0)
        for i in range(n):
            u, v = vs[i], vs[(i + 1) % n]
            if orient(u, v, p) == 0 and _within(u, v, p):
                if u.x != v.x:
                    return i, (p.x - u.x) / (v.x - u.x)
                return i, (p.y - u.y) / (v.y - u.y)
        raise ValueError(f"{p} is not on the curve")


CurveGeometry = Union[OpenMonotone, BiInfiniteMonotone, Closed]


def is_monotone(geom) -> bool:
    return isinstance(geom, (OpenMonotone, BiInfiniteMonotone))


@dataclass(frozen=True)
class CurveRecord:
    id: int
    cls: Optional[str]
    geometry: CurveGeometry

    def __post_init__(self):
        if self.cls not in (None, "S1", "S2"):
            raise ValueError(f"bad class {self.cls!r}")

    def with_geometry(self, geometry) -> "CurveRecord":
        return CurveRecord(self.id, self.cls, geometry)

    def with_class(self, cls) -> "CurveRecord":
        return CurveRecord(self.id, cls, self.geometry)


# ---------------------------------------------------------------------------
# segments


def _within(a: Point, b: Point, p: Point) -> bool:
    # p known collinear with a-b
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def segment_intersection(s1, s2) -> Union[None, Point, Segment]:
    """Exact intersection of two closed segments.

    Returns ``None``, the single common :class:`Point`, or the common
    :class:`Segment` when the two overlap in infinitely many points.
    """
    a, b = s1
    c, d = s2
    if a == b or c == d:
        raise DegenerateInput("segment with coincident endpoints")
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 == o2 == o3 == o4 == 0:
        lo = max(min(a, b), min(c, d))
        hi = min(max(a, b), max(c, d))
        if lo > hi:
            return None
        if lo == hi:
            return lo
        return Segment(lo, hi)
    if o1 * o2 > 0 or o3 * o4 > 0:
        return None
    ex, ey = b.x - a.x, b.y - a.y
    fx, fy = d.x - c.x, d.y - c.y
    den = ex * fy - ey * fx
    t = ((c.x - a.x) * fy - (c.y - a.y) * fx) / den
    return Point(a.x + t * ex, a.y + t * ey)


# ---------------------------------------------------------------------------
# monotone evaluation


def eval_at(curve, x) -> Fraction:
    """The y-coordinate of the monotone ``curve`` above abscissa ``x``."""
    geom = curve.geometry if isinstance(curve, CurveRecord) else curve
    x = Q(x)
    vs = geom.vertices
    xs = geom.xs
    if x < xs[0]:
        if isinstance(geom, OpenMonotone):
            raise ValueError(f"x={x} left of the curve's domain")
        return vs[0].y + geom.left_ray_slope * (x - vs[0].x)
    if x > xs[-1]:
        if isinstance(geom, OpenMonotone):
            raise ValueError(f"x={x} right of the curve's domain")
        return vs[-1].y + geom.right_ray_slope * (x - vs[-1].x)
    i = bisect.bisect_left(xs, x)
    if xs[i] == x:
        return vs[i].y
    u, v = vs[i - 1], vs[i]
    return u.y + (v.y - u.y) * (x - u.x) / (v.x - u.x)


# ---------------------------------------------------------------------------
# local classification


@dataclass(frozen=True)
class Crossing:
    def key(self):
        return ("X",)


@dataclass(frozen=True)
class Touching:
    """A non-crossing common point.

    ``upper_or_left`` names the locally upper curve for monotone curves.  For
    closed curves it is the id of the first curve passed to
    :func:`classify_local_closed` when the second lies on its left, else
    ``None``; ``inside`` lists the curves whose branches lie locally inside
    the other polygon, which is orientation-independent.
    """

    upper_or_left: Optional[int] = None
    inside: frozenset = frozenset()

    def key(self):
        return ("T", -1 if self.upper_or_left is None else self.upper_or_left, tuple(sorted(self.inside)))


LocalClass = Union[Crossing, Touching]


def classify_local_monotone(a: CurveRecord, b: CurveRecord, p: Point) -> LocalClass:
    ga, gb = a.geometry, b.geometry
    if not (is_monotone(ga) and is_monotone(gb)):
        raise TypeError("classify_local_monotone needs x-monotone curves")
    xp = p.x
    if eval_at(ga, xp) != p.y or eval_at(gb, xp) != p.y:
        raise ValueError(f"{p} is not a common point")
    lo_a, hi_a = ga.domain
    lo_b, hi_b = gb.domain
    for bound in (lo_a, hi_a, lo_b, hi_b):
        if bound is not None and bound == xp:
            raise DegenerateInput(f"common point {p} is a curve endpoint")
    breaks = sorted(set(ga.xs) | set(gb.xs))
    i = bisect.bisect_left(breaks, xp)
    left = breaks[i - 1] if i > 0 else None
    j = bisect.bisect_right(breaks, xp)
    right = breaks[j] if j < len(breaks) else None
    xl = (left + xp) / 2 if left is not None else xp - 1
    xr = (right + xp) / 2 if right is not None else xp + 1
    hl = eval_at(ga, xl) - eval_at(gb, xl)
    hr = eval_at(ga, xr) - eval_at(gb, xr)
    if hl == 0 or hr == 0:
        raise DegenerateInput(f"curves {a.id} and {b.id} overlap next to {p}")
    if (hl > 0) != (hr > 0):
        return Crossing()
    return Touching(upper_or_left=a.id if hl > 0 else b.id)


def _branches(geom: Closed, p: Point):
    """Outgoing and backward direction vectors of ``geom`` at ``p``."""
    vs = geom.vertices
    n = len(vs)
    i, t = geom.locate(p)
    if t == 0:
        prev, nxt = vs[i - 1], vs[(i + 1) % n]
    else:
        prev, nxt = vs[i], vs[(i + 1) % n]
    return (nxt.x - p.x, nxt.y - p.y), (prev.x - p.x, prev.y - p.y)


def _cr(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _same_dir(u, v) -> bool:
    return _cr(u, v) == 0 and u[0] * v[0] + u[1] * v[1] > 0


def in_ccw_open_sector(u, v, w) -> bool:
    """True iff direction ``w`` lies strictly inside the CCW sweep from ``u`` to ``v``."""
    cuv = _cr(u, v)
    if cuv > 0:
        return _cr(u, w) > 0 and _cr(w, v) > 0
    if cuv < 0:
        return not (_cr(v, w) >= 0 and _cr(w, u) >= 0)
    if u[0] * v[0] + u[1] * v[1] < 0:
        return _cr(u, w) > 0
    raise DegenerateInput("zero-angle spike in polygon")


def _left_of(geom: Closed, p: Point, other: Closed):
    out, back = _branches(geom, p)
    e1, e2 = _branches(other, p)
    for e in (e1, e2):
        if _same_dir(e, out) or _same_dir(e, back):
            raise DegenerateInput(f"branches overlap at {p}")
    return in_ccw_open_sector(out, back, e1), in_ccw_open_sector(out, back, e2)


def classify_local_closed(a: CurveRecord, b: CurveRecord, p: Point) -> LocalClass:
    """Crossing iff the branches of ``b`` at ``p`` separate those of ``a``."""
    ga, gb = a.geometry, b.geometry
    if not (isinstance(ga, Closed) and isinstance(gb, Closed)):
        raise TypeError("classify_local_closed needs closed curves")
    l1, l2 = _left_of(ga, p, gb)
    if l1 != l2:
        return Crossing()
    m1, m2 = _left_of(gb, p, ga)
    if m1 != m2:
        # sector test is symmetric for transversal meetings; disagreement means a degenerate contact
        raise DegenerateInput(f"inconsistent local order at {p}")
    inside = set()
    if l1 == ga.is_ccw:
        inside.add(b.id)
    if m1 == gb.is_ccw:
        inside.add(a.id)
    return Touching(upper_or_left=a.id if l1 else None, inside=frozenset(inside))


# ---------------------------------------------------------------------------
# shear


def shear_curve(geom, eps: Fraction):
    """Apply x <- x + eps*y (rays keep their lines; slopes map to s/(1+eps*s))."""
    vs = tuple(Point(v.x + eps * v.y, v.y) for v in geom.vertices)
    if isinstance(geom, Closed):
        return Closed(vs, geom.orientation)
    if isinstance(geom, OpenMonotone):
        return OpenMonotone(vs)
    ls = geom.left_ray_slope / (1 + eps * geom.left_ray_slope)
    rs = geom.right_ray_slope / (1 + eps * geom.right_ray_slope)
    return BiInfiniteMonotone(vs, ls, rs)


def choose_shear(curves: Sequence[CurveRecord]) -> Fraction:
    """An exact shear that removes vertical edges and x-ties between vertices.

    Zero when no shear is needed.  Otherwise small enough that every pair of
    vertices with distinct abscissas keeps its x-order.
    """
    pts = sorted({v for c in curves for v in c.geometry.vertices})
    needs = False
    for c in curves:
        g = c.geometry
        if isinstance(g, Closed):
            if any(s.p.x == s.q.x for s in g.segments()):
                needs = True
    xs = [p.x for p in pts]
    if len(set(xs)) != len(xs):
        needs = True
    if not needs:
        return Fraction(0)
    ymax = max(abs(p.y) for p in pts)
    ux = sorted(set(xs))
    gap = min((b - a for a, b in zip(ux, ux[1:])), default=Fraction(1))
    # |eps*(y1-y2)| < gap keeps strict x-order of distinct abscissas
    eps = gap / (4 * (2 * ymax + 1))
    while True:
        sheared = [shear_curve(c.geometry, eps) for c in curves]
        sx = [v.x for g in sheared for v in g.vertices]
        if len(set(sx)) == len(sx) and not any(
            s.p.x == s.q.x for g in sheared if isinstance(g, Closed) for s in g.segments()
        ):
            return eps
        eps /= 3
