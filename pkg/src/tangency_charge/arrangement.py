"""Intersection points of a curve family, classified and indexed per curve."""

from __future__ import annotations

import bisect
import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import kernel
from .geometry import (
    BiInfiniteMonotone,
    Closed,
    Crossing,
    CurveRecord,
    DegenerateInput,
    LocalClass,
    Point,
    Segment,
    Touching,
    classify_local_closed,
    is_monotone,
    segment_intersection,
)


class GeneralPositionError(DegenerateInput):
    def __init__(self, report: "GeneralPositionReport"):
        self.report = report
        first = report.violations[0]
        super().__init__(f"{first['kind']}: {first['details']}")


class OrientationError(DegenerateInput):
    """Some closed curve is touched from both sides."""


@dataclass(frozen=True)
class IntersectionPoint:
    id: int
    point: Point
    curve_lo: int
    curve_hi: int
    kind: LocalClass

    @property
    def is_touching(self) -> bool:
        return isinstance(self.kind, Touching)

    def other(self, curve: int) -> int:
        return self.curve_hi if curve == self.curve_lo else self.curve_lo


@dataclass
class GeneralPositionReport:
    ok: bool
    violations: list[dict] = field(default_factory=list)


def _violation(kind, details, curves=(), point=None):
    return {"kind": kind, "details": details, "curves": tuple(curves), "point": point}


# ---------------------------------------------------------------------------
# per-pair intersection


def _piece_line(g, i: int) -> tuple[Fraction, Fraction]:
    """(slope, intercept) of piece i: -1 left ray, len-1 right ray, else segment i."""
    vs = g.vertices
    if i < 0:
        s = g.left_ray_slope
        return s, vs[0].y - s * vs[0].x
    if i >= len(vs) - 1:
        s = g.right_ray_slope
        return s, vs[-1].y - s * vs[-1].x
    u, v = vs[i], vs[i + 1]
    s = (v.y - u.y) / (v.x - u.x)
    return s, u.y - s * u.x


def _line_meet(la, lb) -> Point:
    (sa, ca), (sb, cb) = la, lb
    x = (cb - ca) / (sa - sb)
    return Point(x, sa * x + ca)


def _monotone_pair(ra, rb, sa, sb):
    ga, gb = ra.geometry, rb.geometry
    events = kernel.monotone_signs(sa, sb)
    hits: list[tuple[Point, LocalClass]] = []
    bad: list[dict] = []
    if not events:
        return hits, bad
    ids = (ra.id, rb.id)

    def bp_point(ia, ib):
        xa = sa.xs[ia] if ia >= 0 else None
        xb = sb.xs[ib] if ib >= 0 else None
        if xa is not None and (xb is None or xa >= xb):
            return ga.vertices[ia]
        return gb.vertices[ib]

    def local(sl, sr):
        if sl == sr:
            return Touching(upper_or_left=ra.id if sl > 0 else rb.id)
        return Crossing()

    signs = [e[2] for e in events]
    m = len(events)
    both_left = isinstance(ga, BiInfiniteMonotone) and isinstance(gb, BiInfiniteMonotone)
    both_right = both_left

    # left tail
    left_sign = None
    if both_left:
        ds = ga.left_ray_slope - gb.left_ray_slope
        tail = -((ds > 0) - (ds < 0))
        if signs[0] != 0 and tail != 0 and tail != signs[0]:
            hits.append((_line_meet(_piece_line(ga, -1), _piece_line(gb, -1)), Crossing()))
        left_sign = tail
    right_sign = None
    if both_right:
        ds = ga.right_ray_slope - gb.right_ray_slope
        right_sign = (ds > 0) - (ds < 0)

    for k in range(m):
        ia, ib, s = events[k]
        if k > 0:
            sp = signs[k - 1]
            if sp * s < 0:
                pia, pib, _ = events[k - 1]
                hits.append((_line_meet(_piece_line(ga, pia), _piece_line(gb, pib)), Crossing()))
        if s != 0:
            continue
        p = bp_point(ia, ib)
        sl = signs[k - 1] if k > 0 else left_sign
        sr = signs[k + 1] if k + 1 < m else right_sign
        if sl is None or sr is None:
            bad.append(_violation("vertex-degeneracy", f"curves {ids} meet at endpoint {p}", ids, p))
            continue
        if sl == 0 or sr == 0:
            bad.append(_violation("infinite-overlap", f"curves {ids} overlap next to {p}", ids, p))
            continue
        hits.append((p, local(sl, sr)))

    if both_right and signs[-1] != 0 and right_sign != 0 and right_sign != signs[-1]:
        hits.append((_line_meet(_piece_line(ga, len(ga.vertices) - 1), _piece_line(gb, len(gb.vertices) - 1)), Crossing()))
    return hits, bad


def _closed_pair(ra, rb, sa, sb):
    ga, gb = ra.geometry, rb.geometry
    segs_a, segs_b = ga.segments(), gb.segments()
    ids = (ra.id, rb.id)
    pts = set()
    bad = []
    for i, j in kernel.segment_hits(sa, sb):
        r = segment_intersection(segs_a[i], segs_b[j])
        if r is None:
            continue
        if isinstance(r, Segment):
            bad.append(_violation("infinite-overlap", f"curves {ids} share segment {tuple(r)}", ids, r.p))
            continue
        pts.add(r)
    hits = []
    for p in sorted(pts):
        try:
            cls = classify_local_closed(ra, rb, p)
        except DegenerateInput as exc:
            bad.append(_violation("vertex-degeneracy", f"curves {ids} at {p}: {exc}", ids, p))
            continue
        if isinstance(cls, Touching):
            cls = Touching(upper_or_left=None, inside=cls.inside)
        hits.append((p, cls))
    return hits, bad


def _simple_polygon_violations(rec: CurveRecord) -> list[dict]:
    segs = rec.geometry.segments()
    n = len(segs)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            r = segment_intersection(segs[i], segs[j])
            if r is None:
                continue
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent and isinstance(r, Point):
                continue
            out.append(_violation("vertex-degeneracy", f"closed curve {rec.id} is not simple", (rec.id,), None))
            return out
    return out


def _thread_count(threads: Optional[int]) -> int:
    if threads is None:
        threads = int(os.environ.get("TANGENCY_CHARGE_THREADS", "1") or 1)
    return max(1, threads)


def _all_pairs(curves: Sequence[CurveRecord], threads=None):
    geoms = [c.geometry for c in curves]
    kinds = {is_monotone(g) for g in geoms}
    if len(kinds) > 1:
        raise ValueError("family mixes closed and x-monotone curves")
    _, scaled = kernel.scale_family(geoms)
    monotone = kinds == {True}

    def work(pair):
        i, j = pair
        if monotone:
            return _monotone_pair(curves[i], curves[j], scaled[i], scaled[j])
        return _closed_pair(curves[i], curves[j], scaled[i], scaled[j])

    pairs = list(itertools.combinations(range(len(curves)), 2))
    nthreads = _thread_count(threads)
    if nthreads > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            results = list(pool.map(work, pairs))
    else:
        results = [work(p) for p in pairs]
    return pairs, results


def _check(curves, pairs, results) -> tuple[GeneralPositionReport, list]:
    violations = []
    ids = [c.id for c in curves]
    if len(set(ids)) != len(ids):
        violations.append(_violation("vertex-degeneracy", "duplicate curve ids"))
    for c in curves:
        if isinstance(c.geometry, Closed):
            violations.extend(_simple_polygon_violations(c))
    found = []
    seen: dict[Point, list] = {}
    for (i, j), (hits, bad) in zip(pairs, results):
        violations.extend(bad)
        a, b = curves[i].id, curves[j].id
        lo, hi = min(a, b), max(a, b)
        if any(isinstance(k, Touching) for _, k in hits) and len(hits) > 1:
            violations.append(
                _violation("vertex-degeneracy", f"curves {(lo, hi)} are tangent but meet {len(hits)} times", (lo, hi))
            )
        for p, k in hits:
            found.append((p, lo, hi, k))
            seen.setdefault(p, []).append((lo, hi))
    for p, prs in seen.items():
        if len(prs) > 1:
            cs = sorted({c for pr in prs for c in pr})
            violations.append(_violation("triple-point", f"curves {cs} pass through {p}", cs, p))
    violations.sort(key=lambda v: (v["kind"], v["curves"], str(v["point"])))
    return GeneralPositionReport(not violations, violations), found


def validate_general_position(curves: Sequence[CurveRecord], threads=None) -> GeneralPositionReport:
    pairs, results = _all_pairs(list(curves), threads)
    report, _ = _check(list(curves), pairs, results)
    return report


# ---------------------------------------------------------------------------
# the arrangement


@dataclass
class Arrangement:
    curves: list[CurveRecord]
    points: list[IntersectionPoint]
    T: frozenset
    X: frozenset
    X1: frozenset
    X2: frozenset
    X_cross: frozenset
    per_curve_seq: dict
    touch_index: dict
    n: int
    t_eff: Fraction
    _prefix: dict = field(default_factory=dict, repr=False)
    _keys: dict = field(default_factory=dict, repr=False)
    _pos: dict = field(default_factory=dict, repr=False)
    _pair_points: dict = field(default_factory=dict, repr=False)

    @property
    def curve_by_id(self) -> dict[int, CurveRecord]:
        return {c.id: c for c in self.curves}

    def curve(self, cid: int) -> CurveRecord:
        return self._curves[cid]

    @property
    def monotone(self) -> bool:
        return bool(self.curves) and is_monotone(self.curves[0].geometry)

    def class_of(self, cid: int) -> Optional[str]:
        return self._curves[cid].cls

    def kind_set(self, kind: str) -> frozenset:
        if kind == "T":
            return self.T
        if kind in ("X", "X-restricted"):
            return self.X
        if kind == "X_all":
            return self.X | self.X_cross
        raise ValueError(f"unknown point kind {kind!r}")

    def prefix(self, cid: int, kind: str) -> list[int]:
        """prefix[i] = number of kind-points among the first i points on the curve."""
        if kind == "X-restricted":
            kind = "X"
        return self._prefix[(cid, kind)]

    def position(self, cid: int, pid: int) -> int:
        return self._pos[(cid, pid)]

    def keys(self, cid: int) -> list:
        return self._keys[cid]

    def pair_points(self, a: int, b: int) -> list[int]:
        return self._pair_points.get((min(a, b), max(a, b)), [])

    def touching_between(self, a: int, b: int) -> Optional[int]:
        return self.touch_index.get((min(a, b), max(a, b)))

    def touchings_on(self, cid: int) -> list[int]:
        return [pid for pid in self.per_curve_seq[cid] if pid in self.T]

    def stats(self) -> dict:
        return {
            "n": self.n,
            "t_eff": self.t_eff,
            "T": len(self.T),
            "X1": len(self.X1),
            "X2": len(self.X2),
            "X_cross": len(self.X_cross),
            "X": len(self.X),
        }


def _seq_key(geom, p: Point):
    if isinstance(geom, Closed):
        return geom.locate(p)
    return p.x


def build_arrangement(curves: Sequence[CurveRecord], threads: Optional[int] = None) -> Arrangement:
    curves = sorted(curves, key=lambda c: c.id)
    ids = [c.id for c in curves]
    if ids != list(range(len(ids))):
        raise ValueError("curve ids must be unique and dense (0..n-1)")
    pairs, results = _all_pairs(curves, threads)
    report, found = _check(curves, pairs, results)
    if not report.ok:
        raise GeneralPositionError(report)
    found.sort(key=lambda f: (f[0], f[1], f[2]))
    points = [IntersectionPoint(i, p, lo, hi, k) for i, (p, lo, hi, k) in enumerate(found)]
    return _index(curves, points)


def _index(curves, points) -> Arrangement:
    by_id = {c.id: c for c in curves}
    T, X1, X2, Xc, Xo = set(), set(), set(), set(), set()
    touch_index = {}
    pair_points: dict = {}
    for ip in points:
        pair_points.setdefault((ip.curve_lo, ip.curve_hi), []).append(ip.id)
        if ip.is_touching:
            T.add(ip.id)
            touch_index[(ip.curve_lo, ip.curve_hi)] = ip.id
            continue
        c1, c2 = by_id[ip.curve_lo].cls, by_id[ip.curve_hi].cls
        if c1 == c2 == "S1":
            X1.add(ip.id)
        elif c1 == c2 == "S2":
            X2.add(ip.id)
        elif {c1, c2} == {"S1", "S2"}:
            Xc.add(ip.id)
        else:
            Xo.add(ip.id)
    T = frozenset(T)
    X = frozenset(X1 | X2 | Xo)
    seq, keys, prefix, pos = {}, {}, {}, {}
    on_curve: dict[int, list] = {c.id: [] for c in curves}
    for ip in points:
        on_curve[ip.curve_lo].append(ip)
        on_curve[ip.curve_hi].append(ip)
    for c in curves:
        items = sorted(((_seq_key(c.geometry, ip.point), ip.id) for ip in on_curve[c.id]))
        seq[c.id] = [pid for _, pid in items]
        keys[c.id] = [k for k, _ in items]
        for idx, pid in enumerate(seq[c.id]):
            pos[(c.id, pid)] = idx
        for kind, members in (("T", T), ("X", X), ("X_all", X | Xc)):
            acc = [0]
            for pid in seq[c.id]:
                acc.append(acc[-1] + (pid in members))
            prefix[(c.id, kind)] = acc
    classes = [c.cls for c in curves]
    s1, s2 = classes.count("S1"), classes.count("S2")
    if s1 and s2 and s1 + s2 == len(curves):
        n = min(s1, s2)
    else:
        n = len(curves)
    t_eff = Fraction(len(T), n) if n else Fraction(0)
    arr = Arrangement(
        curves=list(curves),
        points=list(points),
        T=T,
        X=X,
        X1=frozenset(X1),
        X2=frozenset(X2),
        X_cross=frozenset(Xc),
        per_curve_seq=seq,
        touch_index=touch_index,
        n=n,
        t_eff=t_eff,
        _prefix=prefix,
        _keys=keys,
        _pos=pos,
        _pair_points=pair_points,
    )
    arr._curves = by_id
    return arr


def class_sizes(arr: Arrangement) -> tuple[int, int]:
    cls = [c.cls for c in arr.curves]
    return cls.count("S1"), cls.count("S2")


# ---------------------------------------------------------------------------
# queries


def _pid(arr: Arrangement, cid: int, pt: Union[int, Point]) -> int:
    if isinstance(pt, int):
        return pt
    for pid in arr.per_curve_seq[cid]:
        if arr.points[pid].point == pt:
            return pid
    raise ValueError(f"{pt} is not an intersection point on curve {cid}")


def count_between_monotone(arr: Arrangement, curve: int, x_lo, x_hi, kind: str = "T") -> int:
    """Number of kind-points on ``curve`` with abscissa strictly inside (x_lo, x_hi)."""
    if not x_lo < x_hi:
        return 0
    keys = arr.keys(curve)
    i = bisect.bisect_right(keys, x_lo)
    j = bisect.bisect_left(keys, x_hi)
    if j <= i:
        return 0
    pre = arr.prefix(curve, kind)
    return pre[j] - pre[i]


def count_on_arc_closed(arr: Arrangement, curve: int, from_pt, to_pt, kind: str = "T") -> int:
    """Kind-points on the open arc of ``curve`` from ``from_pt`` to ``to_pt``.

    The arc follows the curve's orientation.  ``from_pt == to_pt`` denotes
    the whole curve minus that point.
    """
    geom = arr.curve(curve).geometry
    if not isinstance(geom, Closed) or geom.orientation is None:
        raise OrientationError(f"curve {curve} has no orientation")
    i = arr.position(curve, _pid(arr, curve, from_pt))
    j = arr.position(curve, _pid(arr, curve, to_pt))
    pre = arr.prefix(curve, kind)
    total = pre[-1]
    if i == j:
        return total - (pre[i + 1] - pre[i])
    if i < j:
        return pre[j] - pre[i + 1]
    return total - (pre[i + 1] - pre[j])


def next_crossing_of_pair(arr: Arrangement, a: int, c: int, after, mode="x") -> Optional[int]:
    """First crossing of curves ``a`` and ``c`` strictly after ``after``.

    ``mode`` is ``"x"`` (increasing abscissa) or ``("along", d)`` with ``d``
    one of the two curves (cyclic traversal order of ``d``).
    """
    common = [pid for pid in arr.pair_points(a, c) if not arr.points[pid].is_touching]
    if mode == "x":
        x0 = after.x if isinstance(after, Point) else arr.points[after].point.x
        later = [pid for pid in common if arr.points[pid].point.x > x0]
        return min(later, key=lambda pid: arr.points[pid].point.x) if later else None
    _, d = mode
    if d not in (a, c):
        raise ValueError("traversal curve must be one of the pair")
    start = arr.position(d, _pid(arr, d, after))
    seq = arr.per_curve_seq[d]
    members = set(common)
    for step in range(1, len(seq)):
        pid = seq[(start + step) % len(seq)]
        if pid in members:
            return pid
    return None


def orient_closed_family(arr: Arrangement) -> dict[int, str]:
    """Orientation per curve putting every touching partner on the curve's left."""
    need: dict[int, set] = {c.id: set() for c in arr.curves}
    for pid in sorted(arr.T):
        ip = arr.points[pid]
        if not isinstance(arr.curve(ip.curve_lo).geometry, Closed):
            raise TypeError("orient_closed_family needs closed curves")
        for host in (ip.curve_lo, ip.curve_hi):
            partner = ip.other(host)
            need[host].add("ccw" if partner in ip.kind.inside else "cw")
    out = {}
    for cid, wants in sorted(need.items()):
        if len(wants) > 1:
            raise OrientationError(f"curve {cid} is touched from both sides")
        out[cid] = wants.pop() if wants else "ccw"
    return out


def apply_orientation(curves: Sequence[CurveRecord], orientation: dict[int, str]) -> list[CurveRecord]:
    return [c.with_geometry(c.geometry.oriented(orientation[c.id])) for c in curves]


def oriented_arrangement(arr: Arrangement, threads=None) -> Arrangement:
    """Rebuild ``arr`` after orienting every closed curve by its touchings."""
    return build_arrangement(apply_orientation(arr.curves, orient_closed_family(arr)), threads)
