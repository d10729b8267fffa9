"""Reductions between curve families.

* cutting closed curves into x-monotone pieces,
* extending open monotone curves to bi-infinite ones by steep rays,
* removing unwanted touchings by lifting a curve locally,
* random balanced bipartition.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .arrangement import build_arrangement
from .geometry import (
    BiInfiniteMonotone,
    Closed,
    CurveRecord,
    DegenerateInput,
    OpenMonotone,
    Point,
    eval_at,
)

# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class Piece:
    source: int
    index: int
    geometry: OpenMonotone
    # True when the piece runs against the traversal order of the source
    reversed: bool


@dataclass(frozen=True)
class DecompositionResult:
    pieces: tuple[Piece, ...]
    cut_count: int

    def reassemble(self) -> list[Point]:
        """Vertices of the source curve in traversal order, starting at the first cut."""
        out: list[Point] = []
        for piece in self.pieces:
            vs = list(piece.geometry.vertices)
            if piece.reversed:
                vs.reverse()
            out.extend(vs[:-1])
        return out


def x_extremal_vertices(geom: Closed) -> list[int]:
    vs = geom.vertices
    n = len(vs)
    out = []
    for i in range(n):
        prev, cur, nxt = vs[i - 1], vs[i], vs[(i + 1) % n]
        if prev.x == cur.x or nxt.x == cur.x:
            raise DegenerateInput(f"vertical edge at {cur}; shear the input first")
        if (prev.x < cur.x) == (nxt.x < cur.x):
            out.append(i)
    return out


def decompose_closed(curve) -> DecompositionResult:
    """Cut a closed polygon at its locally x-extremal vertices."""
    rec_id = curve.id if isinstance(curve, CurveRecord) else -1
    geom = curve.geometry if isinstance(curve, CurveRecord) else curve
    if not isinstance(geom, Closed):
        raise TypeError("decompose_closed needs a closed curve")
    vs = geom.vertices
    n = len(vs)
    cuts = x_extremal_vertices(geom)
    pieces = []
    for idx, start in enumerate(cuts):
        stop = cuts[(idx + 1) % len(cuts)]
        chain = [vs[start]]
        i = start
        while i != stop:
            i = (i + 1) % n
            chain.append(vs[i])
        rev = chain[-1].x < chain[0].x
        if rev:
            chain.reverse()
        pieces.append(Piece(rec_id, idx, OpenMonotone(tuple(chain)), rev))
    return DecompositionResult(tuple(pieces), len(cuts))


# ---------------------------------------------------------------------------
# bi-infinite extension


def steep_slope(curves: Sequence[CurveRecord]) -> Fraction:
    """One more than the largest absolute segment slope in the family."""
    top = Fraction(0)
    for c in curves:
        vs = c.geometry.vertices
        for u, v in zip(vs, vs[1:]):
            top = max(top, abs((v.y - u.y) / (v.x - u.x)))
    return top + 1


def extend_biinfinite(down: Sequence[CurveRecord], up: Sequence[CurveRecord]) -> list[CurveRecord]:
    """Attach steep end rays to open monotone curves.

    Curves in ``down`` get a left ray of slope +z and a right ray of slope -z
    (both ends go down); curves in ``up`` get -z and +z.  A touching where a
    ``down`` curve lies below an ``up`` curve survives.  Already bi-infinite
    curves are returned unchanged.
    """
    every = list(down) + list(up)
    if all(isinstance(c.geometry, BiInfiniteMonotone) for c in every):
        return every
    for c in every:
        if not isinstance(c.geometry, OpenMonotone):
            raise TypeError("extend_biinfinite needs open monotone curves")
    z = steep_slope(every)
    out = [c.with_geometry(BiInfiniteMonotone(c.geometry.vertices, z, -z)) for c in down]
    out += [c.with_geometry(BiInfiniteMonotone(c.geometry.vertices, -z, z)) for c in up]
    return out


# ---------------------------------------------------------------------------
# one-sided normalization


@dataclass(frozen=True)
class NormalizationResult:
    curves: list[CurveRecord]
    retained_touchings: int
    removed_touchings: int
    swapped: bool


def _swap_classes(curves):
    flip = {"S1": "S2", "S2": "S1", None: None}
    return [c.with_class(flip[c.cls]) for c in curves]


def _good(arr, pid) -> Optional[bool]:
    """True if S1 is above S2 at this touching, False if below, None within a class."""
    ip = arr.points[pid]
    lo, hi = arr.curve(ip.curve_lo), arr.curve(ip.curve_hi)
    if lo.cls == hi.cls or None in (lo.cls, hi.cls):
        return None
    upper = arr.curve(ip.kind.upper_or_left)
    return upper.cls == "S1"


def _lift_plan(arr, pid):
    """(curve id, x_left, x_p, x_right, delta) for removing touching ``pid``."""
    ip = arr.points[pid]
    u = ip.kind.upper_or_left
    v = ip.other(u)
    gu = arr.curve(u).geometry
    xp = ip.point.x
    others = [t for t in gu.xs if t != xp]
    others += [arr.points[q].point.x for q in arr.per_curve_seq[u] if q != pid]
    for q in arr.per_curve_seq[u]:
        if q != pid and arr.points[q].point.x == xp:
            raise DegenerateInput(f"another intersection of curve {u} lies above or below {ip.point}")
    left = max((t for t in others if t < xp), default=None)
    right = min((t for t in others if t > xp), default=None)
    gaps = [xp - left] if left is not None else []
    gaps += [right - xp] if right is not None else []
    w = min(gaps, default=Fraction(2)) / 2
    xl, xr = xp - w, xp + w
    clear = None
    for c in arr.curves:
        if c.id in (u, v):
            continue
        g = c.geometry
        lo, hi = g.domain
        a = xl if lo is None else max(xl, lo)
        b = xr if hi is None else min(xr, hi)
        if a > b:
            continue
        probes = {a, b} | {t for t in g.xs if a < t < b}
        if a < xp < b:
            probes.add(xp)
        diffs = [eval_at(g, t) - eval_at(gu, t) for t in probes]
        if all(d < 0 for d in diffs):
            continue  # c stays below u across the window
        if not all(d > 0 for d in diffs):
            raise DegenerateInput(f"curve {c.id} meets curve {u} inside the lift window at {ip.point}")
        m = min(diffs)
        clear = m if clear is None else min(clear, m)
    delta = Fraction(1) if clear is None else clear / 3
    if delta <= 0:
        raise DegenerateInput(f"no room to lift curve {u} at {ip.point}")
    return u, xl, xp, xr, delta


def _apply_lift(geom, xl, xp, xr, delta):
    vs = [v for v in geom.vertices if not xl <= v.x <= xr]
    new = [
        Point(xl, eval_at(geom, xl)),
        Point(xp, eval_at(geom, xp) + delta),
        Point(xr, eval_at(geom, xr)),
    ]
    xs = [v.x for v in vs]
    at = bisect.bisect_left(xs, xl)
    vs[at:at] = new
    if isinstance(geom, BiInfiniteMonotone):
        return BiInfiniteMonotone(tuple(vs), geom.left_ray_slope, geom.right_ray_slope)
    return OpenMonotone(tuple(vs))


def normalize_one_sided(curves: Sequence[CurveRecord]) -> NormalizationResult:
    """Keep only touchings where an S1 curve lies above an S2 curve.

    Classes are swapped first when that keeps more touchings.  Every other
    touching (wrong side or within one class) is removed by lifting its upper
    curve on a small window by an exact amount below the clearance to every
    curve above it, which leaves all crossings untouched.
    """
    curves = list(curves)
    arr = build_arrangement(curves)
    verdicts = {pid: _good(arr, pid) for pid in arr.T}
    n_good = sum(1 for g in verdicts.values() if g is True)
    n_bad = sum(1 for g in verdicts.values() if g is False)
    swapped = n_bad > n_good
    if swapped:
        curves = _swap_classes(curves)
        verdicts = {pid: (None if g is None else not g) for pid, g in verdicts.items()}
    drop = sorted(pid for pid, g in verdicts.items() if g is not True)
    if not drop:
        return NormalizationResult(curves, len(arr.T), 0, swapped)
    plans = [_lift_plan(arr, pid) for pid in drop]
    geoms = {c.id: c.geometry for c in curves}
    for u, xl, xp, xr, delta in plans:
        geoms[u] = _apply_lift(geoms[u], xl, xp, xr, delta)
    out = [c.with_geometry(geoms[c.id]) for c in curves]
    return NormalizationResult(out, len(arr.T) - len(drop), len(drop), swapped)


# ---------------------------------------------------------------------------
# bipartition


@dataclass(frozen=True)
class Bipartition:
    curves: list[CurveRecord]
    cross_touchings: int
    total_touchings: int
    attempts: int


def random_bipartition(curves: Sequence[CurveRecord], seed: int = 0, arr=None, max_attempts: int = 1000) -> Bipartition:
    """Balanced random split into S1/S2 with more than half the touchings across.

    Retries with seeds derived from ``seed`` until the condition holds.
    """
    curves = sorted(curves, key=lambda c: c.id)
    if len(curves) < 2:
        raise ValueError("need at least two curves")
    arr = arr if arr is not None else build_arrangement([c.with_class(None) for c in curves])
    pairs = [(arr.points[t].curve_lo, arr.points[t].curve_hi) for t in sorted(arr.T)]
    ids = [c.id for c in curves]
    for attempt in range(max_attempts):
        rng = random.Random(seed * 1_000_003 + attempt)
        order = ids[:]
        rng.shuffle(order)
        first = set(order[: len(order) // 2])
        cross = sum(1 for a, b in pairs if (a in first) != (b in first))
        if not pairs or 2 * cross > len(pairs):
            out = [c.with_class("S1" if c.id in first else "S2") for c in curves]
            return Bipartition(out, cross, len(pairs), attempt + 1)
    raise RuntimeError("no bipartition separates more than half of the touchings")


def trim_pieces(arr, results: Sequence[DecompositionResult]) -> list[tuple[int, OpenMonotone]]:
    """Shorten every piece at both ends so pieces of one curve no longer share endpoints.

    Each end moves along its edge by half the distance to the nearest
    intersection on that edge (at most a third of the edge), so all
    intersections between different curves are kept.  Returns
    ``(source id, piece)`` pairs.
    """
    hits: dict[tuple[int, int], list[Fraction]] = {}
    for ip in arr.points:
        for cid in (ip.curve_lo, ip.curve_hi):
            g = arr.curve(cid).geometry
            i, t = g.locate(ip.point)
            hits.setdefault((cid, i), []).append(t)
            if t == 0:
                hits.setdefault((cid, (i - 1) % len(g.vertices)), []).append(Fraction(1))
    out = []
    for res in results:
        for piece in res.pieces:
            src = arr.curve(piece.source).geometry
            n = len(src.vertices)
            vs = list(piece.geometry.vertices)
            if piece.reversed:
                vs.reverse()
            # vs now follows the source traversal; find the source edge at each end
            start = src.vertices.index(vs[0])
            first_edge, last_edge = start, (start + len(vs) - 2) % n
            ts = hits.get((piece.source, first_edge), [])
            t0 = min([Fraction(1, 3)] + [t / 2 for t in ts])
            ts = hits.get((piece.source, last_edge), [])
            t1 = min([Fraction(1, 3)] + [(1 - t) / 2 for t in ts])
            if t0 == 0 or t1 == 0:
                raise DegenerateInput(f"curve {piece.source} has an intersection at a cut vertex")
            a, b = vs[0], vs[1]
            vs[0] = Point(a.x + (b.x - a.x) * t0, a.y + (b.y - a.y) * t0)
            a, b = vs[-1], vs[-2]
            vs[-1] = Point(a.x + (b.x - a.x) * t1, a.y + (b.y - a.y) * t1)
            if piece.reversed:
                vs.reverse()
            out.append((piece.source, OpenMonotone(tuple(vs))))
    return out
