import random
from fractions import Fraction

import pytest

from tangency_charge.arrangement import (
    GeneralPositionError,
    OrientationError,
    build_arrangement,
    count_between_monotone,
    count_on_arc_closed,
    next_crossing_of_pair,
    orient_closed_family,
    oriented_arrangement,
    validate_general_position,
)
from tangency_charge.generators import gen_bipartite_closed_small, gen_comb, gen_random_polylines, two_sided_triple
from tangency_charge.geometry import BiInfiniteMonotone, Closed, CurveRecord, Touching, classify_local_closed, point
from tangency_charge.oracle import arrangement_multiset, brute_force_intersections


def P(x, y):
    return point(x, y)


def v_instance():
    a = CurveRecord(0, "S1", BiInfiniteMonotone([P(-1, 1), P(0, 0), P(1, 1)], -1, 1))
    c = CurveRecord(1, "S1", BiInfiniteMonotone([P(3, 1), P(4, 0), P(5, 1)], -1, 1))
    b = CurveRecord(2, "S2", BiInfiniteMonotone([P(0, 0), P(1, 0)], 0, 0))
    return [a, c, b]


def by_point(arr):
    return {ip.point: ip for ip in arr.points}


def test_v_instance():
    arr = build_arrangement(v_instance())
    pts = by_point(arr)
    assert {arr.points[i].point for i in arr.T} == {P(0, 0), P(4, 0)}
    assert {arr.points[i].point for i in arr.X1} == {P(2, 2)}
    assert not arr.X2 and not arr.X_cross
    assert pts[P(0, 0)].kind == Touching(upper_or_left=0)
    assert arr.n == 1 and arr.t_eff == 2


def test_v_instance_matches_oracle():
    curves = v_instance()
    assert arrangement_multiset(build_arrangement(curves)) == brute_force_intersections(curves)
    assert validate_general_position(curves).ok


def test_single_curve_and_empty():
    arr = build_arrangement(v_instance()[:1])
    assert not arr.T and not arr.X
    assert brute_force_intersections([]) == []


def test_two_crossing_lines():
    curves = [
        CurveRecord(0, None, BiInfiniteMonotone([P(0, 0), P(1, 1)], 1, 1)),
        CurveRecord(1, None, BiInfiniteMonotone([P(0, 0), P(1, -1)], -1, -1)),
    ]
    arr = build_arrangement(curves)
    assert [arr.points[i].point for i in arr.X] == [P(0, 0)] and not arr.T


def test_three_lines_through_origin():
    curves = [CurveRecord(i, None, BiInfiniteMonotone([P(0, 0), P(1, s)], s, s)) for i, s in enumerate((1, 0, -1))]
    rep = validate_general_position(curves)
    assert not rep.ok
    assert {v["kind"] for v in rep.violations} == {"triple-point"}
    assert rep.violations[0]["point"] == P(0, 0)
    with pytest.raises(GeneralPositionError):
        build_arrangement(curves)


def test_duplicate_curve_overlap():
    g = BiInfiniteMonotone([P(0, 0), P(1, 2), P(3, 1)], 0, 0)
    rep = validate_general_position([CurveRecord(0, None, g), CurveRecord(1, None, g)])
    assert any(v["kind"] == "infinite-overlap" for v in rep.violations)


@pytest.mark.parametrize("seed", range(50))
def test_random_families_match_oracle(seed):
    rng = random.Random(seed)
    curves = gen_random_polylines(rng.randint(2, 6), rng.randint(2, 8), seed, biinfinite=bool(seed % 2))
    assert arrangement_multiset(build_arrangement(curves)) == brute_force_intersections(curves)


def test_count_between_examples():
    arr = build_arrangement(v_instance())
    assert count_between_monotone(arr, 0, Fraction(0), Fraction(2), "T") == 0
    assert count_between_monotone(arr, 0, Fraction(1), Fraction(1), "T") == 0
    s1, s2 = gen_comb(4, 1, 4, seed=3)
    arr = build_arrangement(s1 + s2)
    assert count_between_monotone(arr, 0, Fraction(1, 2), Fraction(7, 2), "T") == 3


def test_prefix_queries_match_recount():
    s1, s2 = gen_comb(6, 6, 3, seed=1)
    arr = build_arrangement(s1 + s2)
    rng = random.Random(0)
    for _ in range(1000):
        cid = rng.randrange(len(arr.curves))
        lo, hi = sorted(Fraction(rng.randint(0, 140), 20) for _ in range(2))
        kind = rng.choice(["T", "X", "X_all"])
        pool = arr.kind_set(kind)
        direct = sum(1 for ip in arr.points if cid in (ip.curve_lo, ip.curve_hi) and ip.id in pool and lo < ip.point.x < hi)
        assert count_between_monotone(arr, cid, lo, hi, kind) == direct


def test_next_crossing_monotone():
    arr = build_arrangement(v_instance())
    q = next(iter(arr.X1))
    assert next_crossing_of_pair(arr, 0, 1, q) is None
    assert next_crossing_of_pair(arr, 0, 1, P(-5, 0)) == q


def small_closed(n):
    s1, s2 = gen_bipartite_closed_small(n)
    return oriented_arrangement(build_arrangement(s1 + s2))


def test_closed_next_crossing_is_cyclic():
    arr = small_closed(2)
    common = set(arr.pair_points(0, 1))
    assert len(common) >= 2
    order = [pid for pid in arr.per_curve_seq[1] if pid in common]
    for i, q in enumerate(order):
        assert next_crossing_of_pair(arr, 0, 1, q, ("along", 1)) == order[(i + 1) % len(order)]


def test_arc_counts():
    arr = small_closed(2)
    t_on_a = arr.touchings_on(0)
    assert len(t_on_a) == 2
    # two touchings on a1: the arc between them in either direction holds no other touching
    assert count_on_arc_closed(arr, 0, t_on_a[0], t_on_a[1], "T") == 0
    assert count_on_arc_closed(arr, 0, t_on_a[0], t_on_a[0], "T") == 1
    seq = arr.per_curve_seq[0]
    for u in seq:
        for v in seq:
            if u != v:
                total = len(seq)
                assert count_on_arc_closed(arr, 0, u, v, "X_all") + count_on_arc_closed(arr, 0, v, u, "X_all") \
                    + count_on_arc_closed(arr, 0, u, v, "T") + count_on_arc_closed(arr, 0, v, u, "T") + 2 == total


def test_arc_needs_orientation():
    s1, s2 = gen_bipartite_closed_small(1)
    arr = build_arrangement(s1 + s2)
    with pytest.raises(OrientationError):
        count_on_arc_closed(arr, 0, 0, 0)


def test_orientation_small_instances():
    for n in (1, 2):
        s1, s2 = gen_bipartite_closed_small(n)
        arr = build_arrangement(s1 + s2)
        orient = orient_closed_family(arr)
        oarr = oriented_arrangement(arr)
        for pid in oarr.T:
            ip = oarr.points[pid]
            for host in (ip.curve_lo, ip.curve_hi):
                k = classify_local_closed(oarr.curve(host), oarr.curve(ip.other(host)), ip.point)
                assert k.upper_or_left == host
        assert set(orient) == {c.id for c in arr.curves}


def test_orientation_default_and_conflict():
    lone = [CurveRecord(0, None, Closed([P(0, 0), P(1, 0), P(0, 1)]))]
    assert orient_closed_family(build_arrangement(lone)) == {0: "ccw"}
    with pytest.raises(OrientationError):
        orient_closed_family(build_arrangement(two_sided_triple()))


def test_dense_ids_required():
    curves = v_instance()
    curves[2] = CurveRecord(7, "S2", curves[2].geometry)
    with pytest.raises(ValueError):
        build_arrangement(curves)


@pytest.mark.parametrize("threads", ["1", "4"])
def test_thread_count_does_not_change_output(monkeypatch, threads):
    s1, s2 = gen_comb(6, 6, 3, seed=2)
    base = arrangement_multiset(build_arrangement(s1 + s2))
    monkeypatch.setenv("TANGENCY_CHARGE_THREADS", threads)
    arr = build_arrangement(s1 + s2)
    assert arrangement_multiset(arr) == base
