"""Seeded generators of curve families with known touching structure.

Every generator returns curves that pass :func:`validate_general_position`;
random ones resample with derived seeds until they do.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .arrangement import build_arrangement, validate_general_position
from .geometry import (
    BiInfiniteMonotone,
    Closed,
    CurveRecord,
    DegenerateInput,
    OpenMonotone,
    Point,
    choose_shear,
    shear_curve,
)

MAX_ATTEMPTS = 200


def _derived(seed: int, attempt: int) -> int:
    return seed * 1_000_003 + attempt


def _rat(rng: random.Random, lo, hi, den: int = 64) -> Fraction:
    lo, hi = Fraction(lo), Fraction(hi)
    steps = int((hi - lo) * den)
    return lo + Fraction(rng.randint(0, steps), den)


# ---------------------------------------------------------------------------
# combs


def _line(j: int):
    # tangent to y = x^2 at x = j
    return lambda x: 2 * j * x - j * j


def _envelope(n_lines: int):
    lines = [_line(j) for j in range(1, n_lines + 1)]
    return lambda x: max(f(x) for f in lines)


def _comb_lines(n_lines: int, first_id: int) -> list[CurveRecord]:
    out = []
    for j in range(1, n_lines + 1):
        f = _line(j)
        vs = [Point(Fraction(j), Fraction(f(j))), Point(Fraction(j + 1), Fraction(f(j + 1)))]
        out.append(CurveRecord(first_id + j - 1, "S2", BiInfiniteMonotone(vs, 2 * j, 2 * j)))
    return out


def _one_comb(rng, n_lines, touched, used_offsets, envelope):
    half = Fraction(1, 2)
    xs_y = [(half, envelope(half) + _rat(rng, 1, 4))]
    for j in range(1, n_lines + 1):
        if j in touched:
            while True:
                u = _rat(rng, Fraction(-1, 5), Fraction(1, 5), 256)
                if u != 0 and (j, u) not in used_offsets:
                    used_offsets.add((j, u))
                    break
            xd = j + u
            w = _rat(rng, Fraction(1, 40), Fraction(1, 10), 256)
            xs_y.append((xd - w, envelope(xd - w) + _rat(rng, Fraction(1, 16), Fraction(1, 2), 256)))
            xs_y.append((xd, envelope(xd)))
            xs_y.append((xd + w, envelope(xd + w) + _rat(rng, Fraction(1, 16), Fraction(1, 2), 256)))
        else:
            x = j + _rat(rng, Fraction(-1, 5), Fraction(1, 5), 256)
            xs_y.append((x, envelope(x) + _rat(rng, Fraction(1, 4), 3)))
    last = n_lines + half
    xs_y.append((last, envelope(last) + _rat(rng, 1, 4)))
    vs = [Point(Fraction(x), Fraction(y)) for x, y in xs_y]
    left = _rat(rng, -1, 1, 8)
    right = 2 * n_lines + _rat(rng, 1, 3, 8)
    return BiInfiniteMonotone(vs, left, right)


def gen_comb(n_lines: int, n_combs: int, touches_per: int, seed: int = 0):
    """``n_lines`` bi-infinite lines (S2) and ``n_combs`` zigzags (S1).

    The lines are tangent to a parabola, so their upper envelope is convex.
    Each comb runs strictly above that envelope except at ``touches_per``
    V-vertices, each placed exactly on a distinct line, so every comb touches
    exactly those lines from above and crosses none of them.  Combs cross
    each other often.  Returns ``(S1, S2)`` with ids S1 = 0..n_combs-1.
    """
    if not 1 <= touches_per <= n_lines:
        raise ValueError("need 1 <= touches_per <= n_lines")
    if n_combs < 1:
        raise ValueError("need at least one comb")
    envelope = _envelope(n_lines)
    for attempt in range(MAX_ATTEMPTS):
        rng = random.Random(_derived(seed, attempt))
        used: set = set()
        combs = []
        for i in range(n_combs):
            touched = set(rng.sample(range(1, n_lines + 1), touches_per))
            combs.append(CurveRecord(i, "S1", _one_comb(rng, n_lines, touched, used, envelope)))
        lines = _comb_lines(n_lines, n_combs)
        family = combs + lines
        try:
            arr = build_arrangement(family)
        except DegenerateInput:
            continue
        # combs must not touch each other
        if any(arr.curve(arr.points[t].curve_lo).cls == arr.curve(arr.points[t].curve_hi).cls for t in arr.T):
            continue
        if len(arr.T) != n_combs * touches_per:
            continue
        return combs, lines
    raise RuntimeError("gen_comb: no valid family found")  # pragma: no cover


# ---------------------------------------------------------------------------
# random polylines


def gen_random_polylines(n: int, m: int, seed: int = 0, biinfinite: bool = False) -> list[CurveRecord]:
    """``n`` random x-monotone polylines with ``m`` vertices each."""
    if m < 2:
        raise ValueError("need m >= 2")
    for attempt in range(MAX_ATTEMPTS):
        rng = random.Random(_derived(seed, attempt))
        curves = []
        for i in range(n):
            xs = sorted(rng.sample(range(0, 40 * m), m))
            lo = Fraction(rng.randint(0, 9), 7)
            vs = [Point(lo + Fraction(x, 4), Fraction(rng.randint(-60, 60), rng.randint(1, 9))) for x in xs]
            if biinfinite:
                geom = BiInfiniteMonotone(vs, Fraction(rng.randint(-9, 9), 4), Fraction(rng.randint(-9, 9), 4))
            else:
                geom = OpenMonotone(vs)
            curves.append(CurveRecord(i, None, geom))
        if validate_general_position(curves).ok:
            return curves
    raise RuntimeError("gen_random_polylines: no valid family found")  # pragma: no cover


# ---------------------------------------------------------------------------
# convex closed curves


def _unit(s: Fraction) -> tuple[Fraction, Fraction]:
    d = 1 + s * s
    return (1 - s * s) / d, 2 * s / d


def _ellipse_polygon(rng, m: int):
    params = set()
    while len(params) < m:
        params.add(_rat(rng, -3, 3, 16))
    # sort by angle: t -> angle 2*atan(t), monotone in t; add the point at angle pi
    pts = [_unit(t) for t in sorted(params)]
    pts.append((Fraction(-1), Fraction(0)))
    ax, by = _rat(rng, 5, 7, 8), _rat(rng, 2, 3, 8)
    c, s = _unit(_rat(rng, -4, 4, 16))
    ox, oy = _rat(rng, -1, 1, 16), _rat(rng, -1, 1, 16)
    out = []
    for ux, uy in pts:
        x, y = ax * ux, by * uy
        out.append(Point(ox + c * x - s * y, oy + s * x + c * y))
    return out


def gen_convex_family(n: int, seed: int = 0, m: int = 10) -> list[CurveRecord]:
    """``n`` pairwise intersecting convex polygons inscribed in rotated ellipses.

    The result is sheared if needed so no edge is vertical and no two
    vertices share an abscissa.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    for attempt in range(MAX_ATTEMPTS):
        rng = random.Random(_derived(seed, attempt))
        curves = [CurveRecord(i, None, Closed(_ellipse_polygon(rng, m), "ccw")) for i in range(n)]
        eps = choose_shear(curves)
        if eps:
            curves = [c.with_geometry(shear_curve(c.geometry, eps)) for c in curves]
        try:
            arr = build_arrangement(curves)
        except DegenerateInput:
            continue
        met = {(ip.curve_lo, ip.curve_hi) for ip in arr.points}
        if len(met) == n * (n - 1) // 2:
            return curves
    raise RuntimeError("gen_convex_family: no valid family found")  # pragma: no cover


# ---------------------------------------------------------------------------
# complete bipartite closed families


def _p(x, y) -> Point:
    return Point(Fraction(x), Fraction(y))


_B1 = [_p(0, -10), _p(5, -10), _p(5, 10), _p(0, 10)]
_B2 = [_p(Fraction(-11, 10), -11), _p(8, -12), _p(8, 12), _p(Fraction(11, 10), 11)]
# each S1 curve has one vertex on the left edge of b1 (x = 0) and one on the
# left edge of b2 (x = y/10), and otherwise stays strictly left of both
_A1 = [_p(0, 2), _p(-5, 3), _p(-5, -5), _p(Fraction(-2, 5), -4)]
_A2 = [_p(0, 4), _p(-6, 5), _p(-6, -3), _p(Fraction(-1, 5), -2)]


def gen_bipartite_closed_small(n: int):
    """Hand-built closed families where every S1 curve touches every S2 curve.

    ``n = 1`` gives one touching pair; ``n = 2`` adds a second curve to each
    class so both within-class pairs cross twice.  Larger ``n`` is not
    supported.
    """
    if n == 1:
        s1, s2 = [_A1], [_B1]
    elif n == 2:
        s1, s2 = [_A1, _A2], [_B1, _B2]
    else:
        raise ValueError("gen_bipartite_closed_small supports n in {1, 2}")
    S1 = [CurveRecord(i, "S1", Closed(vs)) for i, vs in enumerate(s1)]
    S2 = [CurveRecord(n + i, "S2", Closed(vs)) for i, vs in enumerate(s2)]
    return S1, S2


def two_sided_triple() -> list[CurveRecord]:
    """A square touched from outside by one triangle and from inside by another."""
    square = Closed([_p(0, 0), _p(6, 0), _p(6, 6), _p(0, 6)])
    outside = Closed([_p(3, 6), _p(5, 9), _p(1, 8)])
    inside = Closed([_p(3, 0), _p(5, 3), _p(1, 2)])
    return [CurveRecord(0, None, square), CurveRecord(1, None, outside), CurveRecord(2, None, inside)]
