from collections import Counter
from fractions import Fraction

import pytest

from tangency_charge.arrangement import build_arrangement, validate_general_position
from tangency_charge.generators import gen_comb, gen_convex_family, gen_random_polylines
from tangency_charge.geometry import Closed, CurveRecord, DegenerateInput, OpenMonotone, point
from tangency_charge.transforms import (
    decompose_closed,
    extend_biinfinite,
    normalize_one_sided,
    random_bipartition,
    steep_slope,
    trim_pieces,
    x_extremal_vertices,
)


def P(x, y):
    return point(x, y)


def closed(vs, cid=0):
    return CurveRecord(cid, None, Closed([P(*v) for v in vs]))


HEXAGON = [(2, 0), (1, 2), (-1, Fraction(21, 10)), (-2, Fraction(1, 10)), (-1, -2), (1, Fraction(-19, 10))]
ZIGZAG = [(0, 0), (6, Fraction(1, 7)), (4, 1), (6, 2), (4, 3), (6, 4), (Fraction(-1, 3), 5)]


@pytest.mark.parametrize("vs,pieces", [(HEXAGON, 2), (ZIGZAG, 6), ([(0, 0), (3, 1), (1, 2)], 2)])
def test_decompose_counts(vs, pieces):
    rec = closed(vs)
    assert validate_general_position([rec]).ok
    res = decompose_closed(rec)
    assert len(res.pieces) == pieces == res.cut_count
    for piece in res.pieces:
        assert isinstance(piece.geometry, OpenMonotone)
        assert piece.source == 0


@pytest.mark.parametrize("vs", [HEXAGON, ZIGZAG])
def test_decompose_reassembles(vs):
    rec = closed(vs)
    res = decompose_closed(rec)
    got = res.reassemble()
    src = list(rec.geometry.vertices)
    start = src.index(got[0])
    assert got == src[start:] + src[:start]
    cuts = set(x_extremal_vertices(rec.geometry))
    assert {src.index(p.geometry.vertices[0]) for p in res.pieces} <= cuts


def test_decompose_rejects_vertical_edge():
    with pytest.raises(DegenerateInput):
        decompose_closed(closed([(0, 0), (2, 0), (2, 2)]))


def test_convex_family_cut_bound():
    curves = gen_convex_family(8, seed=0)
    results = [decompose_closed(c) for c in curves]
    assert all(len(r.pieces) == 2 for r in results)
    assert sum(r.cut_count for r in results) <= 2 * len(curves)


def test_trim_keeps_cross_curve_intersections():
    curves = gen_convex_family(5, seed=2)
    arr = build_arrangement(curves)
    pieces = trim_pieces(arr, [decompose_closed(c) for c in arr.curves])
    parr = build_arrangement([CurveRecord(i, None, g) for i, (_, g) in enumerate(pieces)])
    assert sorted(ip.point for ip in parr.points) == sorted(ip.point for ip in arr.points)


# ---------------------------------------------------------------------------


def open_v_instance():
    a = CurveRecord(0, "S1", OpenMonotone([P(-1, 1), P(0, 0), P(3, 3)]))
    c = CurveRecord(1, "S1", OpenMonotone([P(1, 3), P(4, 0), P(5, 1)]))
    b = CurveRecord(2, "S2", OpenMonotone([P(-2, 0), P(6, 0)]))
    return [a, c, b]


def _touch_set(arr):
    return {(arr.points[t].point, arr.points[t].curve_lo, arr.points[t].curve_hi) for t in arr.T}


def _pair_counts(arr):
    return Counter((ip.curve_lo, ip.curve_hi) for ip in arr.points if not ip.is_touching)


def test_extend_v_instance():
    curves = open_v_instance()
    before = build_arrangement(curves)
    ext = extend_biinfinite([c for c in curves if c.cls == "S2"], [c for c in curves if c.cls == "S1"])
    after = build_arrangement(sorted(ext, key=lambda c: c.id))
    assert _touch_set(after) == _touch_set(before)
    old = {ip.point for ip in before.points}
    for ip in after.points:
        if ip.point in old:
            continue
        for cid in (ip.curve_lo, ip.curve_hi):
            lo, hi = curves[cid].geometry.domain
            assert not lo <= ip.point.x <= hi


def test_extend_identity_for_biinfinite():
    s1, s2 = gen_comb(3, 2, 2, seed=0)
    assert extend_biinfinite(s2, s1) == s2 + s1


def _open_comb(n, touches, seed):
    s1, s2 = gen_comb(n, n, touches, seed)
    combs = [c.with_geometry(OpenMonotone(c.geometry.vertices)) for c in s1]
    lines = []
    for c in s2:
        g = c.geometry
        j = g.vertices[0].x
        ys = [2 * j * x - j * j for x in (0, n + 1)]
        lines.append(c.with_geometry(OpenMonotone([P(0, ys[0]), P(n + 1, ys[1])])))
    return combs, lines


@pytest.mark.parametrize("seed", range(3))
def test_extend_adds_at_most_two_crossings_per_pair(seed):
    combs, lines = _open_comb(5, 3, seed)
    before = build_arrangement(combs + lines)
    after = build_arrangement(sorted(extend_biinfinite(lines, combs), key=lambda c: c.id))
    assert _touch_set(after) == _touch_set(before)
    b, a = _pair_counts(before), _pair_counts(after)
    assert all(a[k] - b[k] <= 2 for k in a)
    assert all(a[k] >= b[k] for k in b)


def test_steep_slope_exact():
    curves = open_v_instance()
    assert steep_slope(curves) == 2


# ---------------------------------------------------------------------------


def _three_above_five_below():
    top = CurveRecord(0, "S1", OpenMonotone([P(-10, 0), P(100, 0)]))
    out = [top]
    for i in range(8):
        x = 10 * i
        dy = -1 if i < 3 else 1  # peaks touch from below (good), vees from above (bad)
        out.append(CurveRecord(i + 1, "S2", OpenMonotone([P(x, dy), P(x + 1, 0), P(x + 2, dy)])))
    return out


def _crossings(arr):
    return sorted((ip.point, ip.curve_lo, ip.curve_hi) for ip in arr.points if not ip.is_touching)


def test_normalize_swaps_to_majority():
    curves = _three_above_five_below()
    res = normalize_one_sided(curves)
    assert res.swapped and res.retained_touchings == 5 and res.removed_touchings == 3
    arr = build_arrangement(res.curves)
    for t in arr.T:
        ip = arr.points[t]
        assert arr.class_of(ip.kind.upper_or_left) == "S1"
    assert _crossings(arr) == _crossings(build_arrangement(curves))


def test_normalize_identity_cases():
    curves = open_v_instance()
    res = normalize_one_sided(curves)
    assert (res.removed_touchings, res.swapped) == (0, False)
    assert res.curves == curves
    s1, s2 = gen_comb(4, 4, 2, seed=5)
    res = normalize_one_sided(s1 + s2)
    assert res.removed_touchings == 0 and res.retained_touchings == 8


@pytest.mark.parametrize("seed", range(6))
def test_normalize_random_keeps_crossings(seed):
    curves = gen_random_polylines(6, 10, seed, biinfinite=True)
    split = random_bipartition(curves, seed)
    before = build_arrangement(split.curves)
    res = normalize_one_sided(split.curves)
    after = build_arrangement(res.curves)
    assert _crossings(after) == _crossings(before)
    assert 2 * res.retained_touchings >= sum(1 for t in before.T if before.class_of(before.points[t].curve_lo)
                                             != before.class_of(before.points[t].curve_hi))
    for t in after.T:
        ip = after.points[t]
        assert after.class_of(ip.kind.upper_or_left) == "S1"
        assert after.class_of(ip.other(ip.kind.upper_or_left)) == "S2"


def test_bipartition_single_pair_and_determinism():
    curves = open_v_instance()[::2]
    curves = [c.with_class(None) for c in curves]
    curves[1] = CurveRecord(1, None, curves[1].geometry)
    res = random_bipartition(curves, seed=0)
    assert res.cross_touchings == 1 and res.total_touchings == 1
    assert random_bipartition(curves, seed=0) == res


def test_bipartition_comb_32():
    s1, s2 = gen_comb(8, 8, 4, seed=0)
    curves = [c.with_class(None) for c in s1 + s2]
    res = random_bipartition(curves, seed=11)
    assert res.total_touchings == 32 and res.cross_touchings >= 17
    assert sorted(c.cls for c in res.curves).count("S1") == 8
