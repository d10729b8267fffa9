from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tangency_charge.generators import gen_bipartite_closed_small
from tangency_charge.geometry import (
    BiInfiniteMonotone,
    Closed,
    Crossing,
    CurveRecord,
    DegenerateInput,
    OpenMonotone,
    Point,
    Q,
    Segment,
    Touching,
    classify_local_closed,
    classify_local_monotone,
    eval_at,
    fmt,
    orient,
    point,
    segment_intersection,
    shear_curve,
)


def P(x, y):
    return point(x, y)


def line(y=0, cid=0, slope=0):
    return CurveRecord(cid, None, BiInfiniteMonotone([P(0, y), P(1, y + slope)], slope, slope))


def test_rational_coercion():
    assert Q("3/6") == Fraction(1, 2)
    assert fmt(Fraction(4, 2)) == "2/1"
    with pytest.raises(TypeError):
        Q(0.5)


def test_segment_cross():
    assert segment_intersection((P(0, 0), P(2, 2)), (P(0, 2), P(2, 0))) == P(1, 1)


def test_segment_disjoint_collinear():
    assert segment_intersection((P(0, 0), P(1, 0)), (P(2, 0), P(3, 0))) is None


def test_segment_overlap():
    assert segment_intersection((P(0, 0), P(2, 0)), (P(1, 0), P(3, 0))) == Segment(P(1, 0), P(2, 0))


def test_segment_endpoint_touch():
    assert segment_intersection((P(0, 0), P(1, 0)), (P(1, 0), P(2, 5))) == P(1, 0)


coord = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@settings(max_examples=300, deadline=None)
@given(coord, coord, coord, coord, coord, coord, coord, coord)
def test_intersection_point_lies_on_both(ax, ay, bx, by, cx, cy, dx, dy):
    a, b, c, d = Point(ax, ay), Point(bx, by), Point(cx, cy), Point(dx, dy)
    if a == b or c == d:
        return
    hit = segment_intersection((a, b), (c, d))
    if isinstance(hit, Point):
        assert orient(a, b, hit) == 0 and orient(c, d, hit) == 0
        assert min(a.x, b.x) <= hit.x <= max(a.x, b.x)
        assert min(c.y, d.y) <= hit.y <= max(c.y, d.y)
    # symmetric
    other = segment_intersection((c, d), (a, b))
    if isinstance(hit, Segment):
        assert isinstance(other, Segment) and set(hit) == set(other)
    else:
        assert hit == other


def test_eval_at_examples():
    v = OpenMonotone([P(-1, 1), P(0, 0), P(1, 1)])
    assert eval_at(v, Fraction(1, 2)) == Fraction(1, 2)
    assert eval_at(line(0).geometry, 10**6) == 0
    ray = BiInfiniteMonotone([P(0, 0), P(1, 1)], 3, 1)
    assert eval_at(ray, -2) == -6
    with pytest.raises(ValueError):
        eval_at(v, 2)


def test_monotone_rejects_non_increasing():
    with pytest.raises(DegenerateInput):
        OpenMonotone([P(0, 0), P(0, 1)])


def test_classify_monotone_examples():
    a = line(0, 0)
    peak = CurveRecord(1, None, OpenMonotone([P(-1, -1), P(0, 0), P(1, -1)]))
    assert classify_local_monotone(a, peak, P(0, 0)) == Touching(upper_or_left=0)
    diag = CurveRecord(1, None, BiInfiniteMonotone([P(0, 0), P(1, 1)], 1, 1))
    assert isinstance(classify_local_monotone(a, diag, P(0, 0)), Crossing)
    vee = CurveRecord(1, None, OpenMonotone([P(-1, 1), P(0, 0), P(1, 1)]))
    assert classify_local_monotone(a, vee, P(0, 0)) == Touching(upper_or_left=1)


def test_classify_closed_outside_touch():
    sq = CurveRecord(0, None, Closed([P(0, 0), P(4, 0), P(4, 4), P(0, 4)], "ccw"))
    tri = CurveRecord(1, None, Closed([P(2, 4), P(3, 6), P(1, 5)], "ccw"))
    k = classify_local_closed(sq, tri, P(2, 4))
    assert isinstance(k, Touching)
    assert k.inside == frozenset()
    # a ccw square has its interior on the left, so the outside triangle is on its right
    assert k.upper_or_left is None


def test_classify_closed_crossing_squares():
    a = CurveRecord(0, None, Closed([P(0, 0), P(4, 0), P(4, 4), P(0, 4)]))
    b = CurveRecord(1, None, Closed([P(3, 2), P(5, 1), P(7, 2), P(5, 3)]))
    hit = segment_intersection((P(4, 0), P(4, 4)), (P(3, 2), P(5, 1)))
    assert hit == P(4, Fraction(3, 2))
    assert isinstance(classify_local_closed(a, b, hit), Crossing)


def _brute_side(geom: Closed, q: Point) -> bool:
    inside = False
    vs = geom.vertices
    for i in range(len(vs)):
        u, v = vs[i], vs[(i + 1) % len(vs)]
        if (u.y > q.y) != (v.y > q.y):
            xs = u.x + (q.y - u.y) * (v.x - u.x) / (v.y - u.y)
            if xs > q.x:
                inside = not inside
    return inside


def test_classify_closed_small_instance_matches_sampling():
    s1, s2 = gen_bipartite_closed_small(1)
    a, b = s1[0], s2[0]
    p = P(0, 2)
    k = classify_local_closed(a, b, p)
    assert isinstance(k, Touching)
    # sample b's branches just around p: all on one side of a
    eps = Fraction(1, 1000)
    samples = [Point(p.x, p.y + eps), Point(p.x, p.y - eps)]
    sides = {_brute_side(a.geometry, s) for s in samples}
    assert len(sides) == 1


def test_closed_orientation_reorders():
    vs = [P(0, 0), P(1, 0), P(0, 1)]
    assert Closed(vs, "cw").vertices == (P(0, 0), P(0, 1), P(1, 0))
    assert Closed(vs, "ccw").is_ccw
    assert not Closed(vs, "cw").is_ccw


def test_closed_locate_vertex():
    g = Closed([P(0, 0), P(2, 0), P(2, 2), P(0, 2)])
    assert g.locate(P(2, 0)) == (1, 0)
    assert g.locate(P(1, 0)) == (0, Fraction(1, 2))


def test_shear_keeps_rays_on_their_lines():
    g = BiInfiniteMonotone([P(0, 0), P(1, 1)], 2, -1)
    s = shear_curve(g, Fraction(1, 10))
    # a point on the left ray, sheared, must lie on the sheared left ray
    x, y = Fraction(-3), Fraction(-6)
    assert eval_at(s, x + Fraction(1, 10) * y) == y
