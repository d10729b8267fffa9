"""Brute-force intersection oracle.

Enumerates every pair of pieces (segments and rays) naively and classifies
each common point by sampling the curves next to it.  It deliberately shares
nothing with :mod:`arrangement` except ``Fraction`` and the curve types, so
agreement between the two is meaningful.
"""

from __future__ import annotations

import bisect
import math
from collections import Counter
from fractions import Fraction
from itertools import combinations

from .geometry import BiInfiniteMonotone, Closed, DegenerateInput, OpenMonotone


def _pieces(geom):
    """(origin, direction, is_ray) triples; segment points are origin + s*dir, 0 <= s <= 1."""
    vs = [(v.x, v.y) for v in geom.vertices]
    out = []
    if isinstance(geom, Closed):
        n = len(vs)
        pairs = [(vs[i], vs[(i + 1) % n]) for i in range(n)]
    else:
        pairs = list(zip(vs, vs[1:]))
    for (x0, y0), (x1, y1) in pairs:
        out.append(((x0, y0), (x1 - x0, y1 - y0), False))
    if isinstance(geom, BiInfiniteMonotone):
        out.append((vs[0], (Fraction(-1), -geom.left_ray_slope), True))
        out.append((vs[-1], (Fraction(1), geom.right_ray_slope), True))
    return out


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _in_range(s, is_ray):
    return s >= 0 and (is_ray or s <= 1)


def _meet(pa, pb):
    """Common points of two pieces: list of points, or raises on overlap."""
    (o1, d1, r1), (o2, d2, r2) = pa, pb
    den = _det(d1, d2)
    w = (o2[0] - o1[0], o2[1] - o1[1])
    if den != 0:
        s = _det(w, d2) / den
        t = _det(w, d1) / den
        if _in_range(s, r1) and _in_range(t, r2):
            return [(o1[0] + s * d1[0], o1[1] + s * d1[1])]
        return []
    if _det(w, d1) != 0:
        return []
    # collinear: parametrize piece b's extent along d1
    dd = d1[0] * d1[0] + d1[1] * d1[1]

    def par(pt):
        return ((pt[0] - o1[0]) * d1[0] + (pt[1] - o1[1]) * d1[1]) / dd

    lo1, hi1 = Fraction(0), (None if r1 else Fraction(1))
    t0 = par(o2)
    step = (d2[0] * d1[0] + d2[1] * d1[1]) / dd
    if r2:
        lo2, hi2 = (t0, None) if step > 0 else (None, t0)
    else:
        lo2, hi2 = min(t0, t0 + step), max(t0, t0 + step)
    lo = lo2 if lo2 is not None and lo2 > lo1 else lo1
    his = [h for h in (hi1, hi2) if h is not None]
    hi = min(his) if his else None
    if hi is not None and hi < lo:
        return []
    if hi is not None and hi == lo:
        return [(o1[0] + lo * d1[0], o1[1] + lo * d1[1])]
    raise DegenerateInput("two curves share a segment")


_INF = float("inf")


def _box(piece):
    """Float (xmin, xmax, ymin, ymax) widened by one ulp, so it encloses the exact box."""
    (x0, y0), (dx, dy), is_ray = piece
    if not is_ray:
        xs, ys = (x0, x0 + dx), (y0, y0 + dy)
    else:
        xs = (-_INF if dx < 0 else x0, _INF if dx > 0 else x0)
        ys = (-_INF if dy < 0 else y0, _INF if dy > 0 else y0)
    lo, hi = math.nextafter, math.nextafter
    return (lo(float(min(xs)), -_INF), hi(float(max(xs)), _INF), lo(float(min(ys)), -_INF), hi(float(max(ys)), _INF))


def _disjoint(b1, b2):
    return b1[1] < b2[0] or b2[1] < b1[0] or b1[3] < b2[2] or b2[3] < b1[2]


def _y_at(geom, x):
    vs = geom.vertices
    if x < vs[0].x:
        if isinstance(geom, OpenMonotone):
            return None
        return vs[0].y + geom.left_ray_slope * (x - vs[0].x)
    if x > vs[-1].x:
        if isinstance(geom, OpenMonotone):
            return None
        return vs[-1].y + geom.right_ray_slope * (x - vs[-1].x)
    i = max(1, bisect.bisect_left(geom.xs, x))
    u, v = vs[i - 1], vs[i]
    return u.y + (v.y - u.y) * (x - u.x) / (v.x - u.x)


def _classify_monotone(ga, gb, ida, idb, pt, xs_all):
    x = pt[0]
    i = bisect.bisect_left(xs_all, x)
    j = bisect.bisect_right(xs_all, x)
    left = xs_all[i - 1] if i > 0 else x - 2
    right = xs_all[j] if j < len(xs_all) else x + 2
    xl, xr = (x + left) / 2, (x + right) / 2
    vals = [_y_at(ga, xl), _y_at(gb, xl), _y_at(ga, xr), _y_at(gb, xr)]
    if any(v is None for v in vals):
        raise DegenerateInput(f"curves {ida}, {idb} meet at an endpoint {pt}")
    dl, dr = vals[0] - vals[1], vals[2] - vals[3]
    if dl == 0 or dr == 0:
        raise DegenerateInput("curves overlap")
    if (dl > 0) != (dr > 0):
        return ("X",)
    return ("T", ida if dl > 0 else idb, ())


def _inside(poly, q):
    """Exact even-odd point-in-polygon; q must not lie on the boundary."""
    x, y = q
    n = len(poly)
    inside = False
    for i in range(n):
        (x0, y0), (x1, y1) = poly[i], poly[(i + 1) % n]
        if (y0 > y) != (y1 > y):
            xi = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            if xi > x:
                inside = not inside
    return inside


def _on_boundary(poly, q):
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if _det((b[0] - a[0], b[1] - a[1]), (q[0] - a[0], q[1] - a[1])) == 0:
            if min(a[0], b[0]) <= q[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= q[1] <= max(a[1], b[1]):
                return True
    return False


def _neighbours(poly, pt, other):
    """Two points of ``poly`` on either side of ``pt``, off ``other`` and close to ``pt``."""
    n = len(poly)
    samples = []
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        d = (b[0] - a[0], b[1] - a[1])
        if _det(d, (pt[0] - a[0], pt[1] - a[1])) != 0:
            continue
        if not (min(a[0], b[0]) <= pt[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= pt[1] <= max(a[1], b[1])):
            continue
        # pt on edge a-b: sample toward a and toward b (when distinct from pt)
        for end in (a, b):
            if end != pt:
                samples.append(end)
    dirs = list(dict.fromkeys(samples))
    if len(dirs) != 2:
        raise DegenerateInput(f"cannot sample around {pt}")
    out = []
    for end in dirs:
        eps = Fraction(1, 2)
        while True:
            q = (pt[0] + eps * (end[0] - pt[0]), pt[1] + eps * (end[1] - pt[1]))
            seg = ((pt[0], pt[1]), (q[0] - pt[0], q[1] - pt[1]), False)
            clean = not _on_boundary(other, q)
            if clean:
                m = len(other)
                for i in range(m):
                    a, b = other[i], other[(i + 1) % m]
                    try:
                        hits = _meet(seg, (a, (b[0] - a[0], b[1] - a[1]), False))
                    except DegenerateInput:
                        raise DegenerateInput("curves overlap") from None
                    if any(h != pt for h in hits):
                        clean = False
                        break
            if clean:
                out.append(q)
                break
            eps /= 2
    return out


def _classify_closed(ga, gb, ida, idb, pt):
    pa = [(v.x, v.y) for v in ga.vertices]
    pb = [(v.x, v.y) for v in gb.vertices]
    b1, b2 = _neighbours(pb, pt, pa)
    a1, a2 = _neighbours(pa, pt, pb)
    ib1, ib2 = _inside(pa, b1), _inside(pa, b2)
    ia1, ia2 = _inside(pb, a1), _inside(pb, a2)
    if ib1 != ib2:
        return ("X",)
    if ia1 != ia2:
        raise DegenerateInput(f"inconsistent sides at {pt}")
    inside = tuple(sorted(c for c, flag in ((idb, ib1), (ida, ia1)) if flag))
    return ("T", -1, inside)


def brute_force_intersections(curves) -> list[tuple]:
    """Sorted list of (point, lo, hi, kind-key) for every common point of every pair."""
    curves = list(curves)
    result = []
    seen = Counter()
    boxed = {}
    for c in curves:
        ps = sorted(((_box(y), i, y) for i, y in enumerate(_pieces(c.geometry))), key=lambda t: t[0][0])
        boxed[c.id] = (ps, [t[0][0] for t in ps])
    for ca, cb in combinations(sorted(curves, key=lambda c: c.id), 2):
        ga, gb = ca.geometry, cb.geometry
        pts = set()
        boxes_b, starts = boxed[cb.id]
        for bx, _, x in boxed[ca.id][0]:
            stop = bisect.bisect_right(starts, bx[1])
            for by, _, y in boxes_b[:stop]:
                if _disjoint(bx, by):
                    continue
                pts.update(_meet(x, y))
        if not pts:
            continue
        closed = isinstance(ga, Closed)
        if closed != isinstance(gb, Closed):
            raise ValueError("family mixes closed and x-monotone curves")
        for g, cid in ((ga, ca.id), (gb, cb.id)):
            if isinstance(g, OpenMonotone):
                ends = {(g.vertices[0].x, g.vertices[0].y), (g.vertices[-1].x, g.vertices[-1].y)}
                if pts & ends:
                    raise DegenerateInput(f"curve {cid} meets another curve at an endpoint")
        xs_all = sorted({v.x for v in ga.vertices} | {v.x for v in gb.vertices} | {p[0] for p in pts})
        kinds = []
        for pt in sorted(pts):
            if closed:
                kind = _classify_closed(ga, gb, ca.id, cb.id, pt)
            else:
                kind = _classify_monotone(ga, gb, ca.id, cb.id, pt, xs_all)
            kinds.append(kind)
            seen[pt] += 1
        if len(pts) > 1 and any(k[0] == "T" for k in kinds):
            raise DegenerateInput(f"curves {ca.id}, {cb.id} are tangent and meet again")
        for pt, kind in zip(sorted(pts), kinds):
            result.append((pt, ca.id, cb.id, kind))
    for pt, cnt in seen.items():
        if cnt > 1:
            raise DegenerateInput(f"three or more curves pass through {pt}")
    result.sort()
    return result


def arrangement_multiset(arr) -> list[tuple]:
    """The arrangement's points in the oracle's format, for comparison."""
    out = [((ip.point.x, ip.point.y), ip.curve_lo, ip.curve_hi, ip.kind.key()) for ip in arr.points]
    out.sort()
    return out
