"""Pure-Python intersection kernels (reference and fallback).

Both kernels work on integer coordinates: the caller scales a whole family by
the common denominator of its coordinates, so every predicate is an integer
sign test.  ``_ckernel.pyx`` implements the same two functions.
"""

import bisect

# slope arguments are (numerator, denominator) pairs with denominator > 0, or None


def _sgn(v):
    return (v > 0) - (v < 0)


def _side(xs, ys, left, right, px, py, j):
    """Sign of (py - curve(px)) where j = largest index with xs[j] <= px (-1 if none)."""
    n = len(xs)
    if j < 0:
        sn, sd = left
        return _sgn(sd * (py - ys[0]) - sn * (px - xs[0]))
    if j == n - 1:
        if xs[j] == px:
            return _sgn(py - ys[j])
        sn, sd = right
        return _sgn(sd * (py - ys[j]) - sn * (px - xs[j]))
    if xs[j] == px:
        return _sgn(py - ys[j])
    x0, y0, x1, y1 = xs[j], ys[j], xs[j + 1], ys[j + 1]
    return _sgn((x1 - x0) * (py - y0) - (y1 - y0) * (px - x0))


def monotone_signs(ax, ay, aleft, aright, bx, by, bleft, bright):
    """Signs of (a - b) at every breakpoint of the common x-domain.

    Returns a list of ``(ia, ib, sign)`` in increasing x, one per distinct
    vertex abscissa of either curve inside the common domain, where ``ia`` is
    the largest index with ``ax[ia] <= x`` (``-1`` left of the first vertex)
    and likewise ``ib``.
    """
    na, nb = len(ax), len(bx)
    lo_a = None if aleft is not None else ax[0]
    lo_b = None if bleft is not None else bx[0]
    hi_a = None if aright is not None else ax[na - 1]
    hi_b = None if bright is not None else bx[nb - 1]
    lo = lo_a if lo_b is None else (lo_b if lo_a is None else max(lo_a, lo_b))
    hi = hi_a if hi_b is None else (hi_b if hi_a is None else min(hi_a, hi_b))
    out = []
    if lo is not None and hi is not None and lo > hi:
        return out
    i = j = 0
    ia = ib = -1
    while i < na or j < nb:
        if j >= nb or (i < na and ax[i] < bx[j]):
            x = ax[i]
            ia = i
            i += 1
            src = 0
        elif i >= na or bx[j] < ax[i]:
            x = bx[j]
            ib = j
            j += 1
            src = 1
        else:
            x = ax[i]
            ia, ib = i, j
            i += 1
            j += 1
            src = 2
        if (lo is not None and x < lo) or (hi is not None and x > hi):
            continue
        if src == 0:
            s = _side(bx, by, bleft, bright, x, ay[ia], ib)
        elif src == 1:
            s = -_side(ax, ay, aleft, aright, x, by[ib], ia)
        else:
            s = _sgn(ay[ia] - by[ib])
        out.append((ia, ib, s))
    return out


def _orient(ox, oy, ax, ay, bx, by):
    return _sgn((ax - ox) * (by - oy) - (ay - oy) * (bx - ox))


def _on(ax, ay, bx, by, px, py):
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def segment_hits(ax, ay, a_closed, bx, by, b_closed):
    """Index pairs (i, j) of segments of a and b that share at least one point.

    Segment i of a polyline joins vertex i to vertex i+1 (wrapping for closed
    polylines).
    """
    sa = _segments(ax, ay, a_closed)
    sb = _segments(bx, by, b_closed)
    sb.sort()
    starts = [s[0] for s in sb]
    hits = []
    for xmin, xmax, ymin, ymax, i, x0, y0, x1, y1 in sa:
        stop = bisect.bisect_right(starts, xmax)
        for k in range(stop):
            bxmin, bxmax, bymin, bymax, j, u0, v0, u1, v1 = sb[k]
            if bxmax < xmin or bymax < ymin or bymin > ymax:
                continue
            o1 = _orient(x0, y0, x1, y1, u0, v0)
            o2 = _orient(x0, y0, x1, y1, u1, v1)
            o3 = _orient(u0, v0, u1, v1, x0, y0)
            o4 = _orient(u0, v0, u1, v1, x1, y1)
            if o1 * o2 > 0 or o3 * o4 > 0:
                continue
            if o1 == o2 == 0:
                if not (
                    _on(x0, y0, x1, y1, u0, v0)
                    or _on(x0, y0, x1, y1, u1, v1)
                    or _on(u0, v0, u1, v1, x0, y0)
                ):
                    continue
            hits.append((i, j))
    hits.sort()
    return hits


def _segments(xs, ys, closed):
    n = len(xs)
    m = n if closed else n - 1
    out = []
    for i in range(m):
        k = (i + 1) % n
        x0, y0, x1, y1 = xs[i], ys[i], xs[k], ys[k]
        out.append((min(x0, x1), max(x0, x1), min(y0, y1), max(y0, y1), i, x0, y0, x1, y1))
    return out
