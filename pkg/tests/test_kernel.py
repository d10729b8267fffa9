from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tangency_charge import kernel
from tangency_charge.arrangement import build_arrangement
from tangency_charge.generators import gen_comb, gen_convex_family, gen_random_polylines
from tangency_charge.geometry import BiInfiniteMonotone, CurveRecord, Point
from tangency_charge.oracle import arrangement_multiset, brute_force_intersections

needs_c = pytest.mark.skipif(kernel.backend() != "cython", reason="compiled kernel not built")


def _raw(curves):
    _, scaled = kernel.scale_family([c.geometry for c in curves])
    out = []
    for a, b in combinations(scaled, 2):
        if a.closed:
            out.append(sorted(kernel.segment_hits(a, b)))
        else:
            out.append(kernel.monotone_signs(a, b))
    return out


def _both(curves):
    with kernel.use_backend("python"):
        py = _raw(curves)
    with kernel.use_backend("cython"):
        cy = _raw(curves)
    return py, cy


@needs_c
@pytest.mark.parametrize("seed", range(10))
def test_backends_agree_on_random_families(seed):
    py, cy = _both(gen_random_polylines(6, 12, seed, biinfinite=True))
    assert py == cy


@needs_c
def test_backends_agree_on_comb_and_closed():
    s1, s2 = gen_comb(6, 6, 3, seed=0)
    py, cy = _both(s1 + s2)
    assert py == cy
    py, cy = _both(gen_convex_family(4, seed=1, m=6))
    assert py == cy


small = st.integers(min_value=-40, max_value=40)


@needs_c
@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(small, small), min_size=2, max_size=6), st.lists(st.tuples(small, small), min_size=2, max_size=6),
       small, small, small, small)
def test_backends_agree_property(va, vb, l1, r1, l2, r2):
    def mk(cid, vs, lft, rgt):
        xs = sorted({x for x, _ in vs})
        if len(xs) < 2:
            return None
        ys = dict(vs)
        return CurveRecord(cid, None, BiInfiniteMonotone([Point(Fraction(x), Fraction(ys[x])) for x in xs], lft, rgt))

    a, b = mk(0, va, l1, r1), mk(1, vb, l2, r2)
    if a is None or b is None:
        return
    py, cy = _both([a, b])
    assert py == cy


def test_large_coordinates_fall_back_and_stay_exact():
    big = 10**15
    curves = [
        CurveRecord(0, None, BiInfiniteMonotone([Point(Fraction(0), Fraction(0)), Point(Fraction(big), Fraction(big))], 1, 1)),
        CurveRecord(1, None, BiInfiniteMonotone([Point(Fraction(0), Fraction(big)), Point(Fraction(big), Fraction(0))], -1, -1)),
    ]
    _, scaled = kernel.scale_family([c.geometry for c in curves])
    assert not any(s.small for s in scaled)
    arr = build_arrangement(curves)
    assert [ip.point for ip in arr.points] == [Point(Fraction(big, 2), Fraction(big, 2))]
    assert arrangement_multiset(arr) == brute_force_intersections(curves)


def test_forced_python_backend_builds_same_arrangement():
    s1, s2 = gen_comb(5, 5, 3, seed=4)
    base = arrangement_multiset(build_arrangement(s1 + s2))
    with kernel.use_backend("python"):
        assert arrangement_multiset(build_arrangement(s1 + s2)) == base


def test_use_backend_rejects_unknown():
    with pytest.raises(ValueError):
        with kernel.use_backend("fortran"):
            pass
