"""Acceptance criteria 1-7.  Each test prints one PASS/FAIL line."""

import json
import random
import time
from collections import Counter
from fractions import Fraction
from math import comb

import pytest
from conftest import report
from test_transforms import _open_comb

from tangency_charge.arrangement import build_arrangement, oriented_arrangement
from tangency_charge.charging import bipartite as B
from tangency_charge.charging import monotone as M
from tangency_charge.charging.common import AGG_TOL, ceil_frac, inject_fault, weight_sum
from tangency_charge.cli import main, run_pipeline
from tangency_charge.generators import gen_bipartite_closed_small, gen_comb, gen_convex_family, gen_random_polylines
from tangency_charge.io import write_curves
from tangency_charge.oracle import arrangement_multiset, brute_force_intersections
from tangency_charge.transforms import decompose_closed, extend_biinfinite, normalize_one_sided, random_bipartition

ALPHA = Fraction(2)
COMBS = [(4, 4), (8, 4), (8, 8), (12, 8), (16, 8), (16, 16)]


@pytest.fixture(scope="module")
def comb_graphs():
    out = []
    for n, t in COMBS:
        s1, s2 = gen_comb(n, n, t, seed=n * 100 + t)
        out.append((n, t, M.build_graph(build_arrangement(s1 + s2), M.ChargingParams(ALPHA))))
    return out


def test_criterion_1_oracle_equivalence():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    families = []
    for i in range(190):
        n, m = rng.randint(2, 12), rng.randint(2, 40)
        families.append(gen_random_polylines(n, m, seed=i, biinfinite=bool(i % 2)))
    for a, t in [(2, 1), (3, 2), (4, 4), (6, 3), (8, 4), (8, 8), (10, 5), (12, 6), (16, 8), (16, 16)]:
        s1, s2 = gen_comb(a, a, t, seed=1)
        families.append(s1 + s2)
    start = time.perf_counter()
    bad = [i for i, c in enumerate(families) if arrangement_multiset(build_arrangement(c)) != brute_force_intersections(c)]
    elapsed = time.perf_counter() - start
    ok = not bad and len(families) == 200 and elapsed < 60
    report(1, ok, f"{len(families)} families, {len(bad)} mismatches, {elapsed:.1f}s compare, {start - t0:.1f}s generation")
    assert not bad
    assert elapsed < 60


def test_criterion_2_monotone_upper(comb_graphs):
    fails = 0
    rows = 0
    for n, t, g in comb_graphs:
        arr = g.arr
        agg = M.aggregate_bound(arr.t_eff, ALPHA)
        for q in sorted(arr.X):
            inc = g.by_crossing.get(q, [])
            cnt = Counter((e.family, e.level) for e in inc)
            c_levels = [e.level for e in inc if e.family == "C"]
            k0 = min(c_levels) if c_levels else None
            for k in g.levels:
                rows += 3
                fails += cnt[("A", k)] > 2 * k
                fails += cnt[("B", k)] > 2 * ceil_frac(Fraction(k) / ALPHA)
                bound_c = k if k0 is None else min(k, ceil_frac(ALPHA * k0))
                fails += cnt[("C", k)] > bound_c
            total = float(weight_sum((e.weight for e in inc), 2.0))
            rows += 1
            fails += total > agg + AGG_TOL
        # the module's own audit must agree
        fails += sum(1 for q in arr.X for r in M.audit_upper_per_level(g, q) if r.failed)
    report(2, fails == 0, f"{rows} upper checks over {len(comb_graphs)} comb families, {fails} failures")
    assert fails == 0


def test_criterion_3_monotone_lower(comb_graphs):
    fails, checked, nonvacuous = 0, 0, 0
    for n, t, g in comb_graphs:
        arr = g.arr
        lower = [M.audit_lower(g, p, k) for p in sorted(arr.T) for k in g.levels]
        checked += sum(1 for r in lower if r.status != "skipped")
        fails += sum(1 for r in lower if r.status not in ("skipped", "pass"))
        fails += sum(1 for r in lower if r.status == "pass" and not r.computed >= ALPHA)
        for k in g.levels:
            skipped = sum(1 for r in lower if r.level == k and r.status == "skipped")
            fails += skipped > 2 * n * k
            total_k = weight_sum((e.weight for e in g.edges if e.level == k), ALPHA)
            fails += not total_k >= ALPHA * (len(arr.T) - 2 * n * k)
        a_star = M.alpha_star(arr.t_eff)
        bound = M.formula_bound(arr.t_eff, arr.n, a_star)
        if arr.t_eff == 16:
            nonvacuous += 1
            fails += bound is None or not len(arr.X) >= bound - AGG_TOL
        else:
            fails += bound is not None and not len(arr.X) >= bound - AGG_TOL
    ok = fails == 0 and nonvacuous >= 1
    report(3, ok, f"{checked} eligible lower audits, {nonvacuous} non-vacuous formula runs, {fails} failures")
    assert ok


def test_criterion_4_arcs(comb_graphs):
    fails, pairs = 0, 0
    for _, _, g in comb_graphs:
        rows = M.audit_arcs_proposition(g)
        pairs += sum(1 for r in rows if r.status != "vacuous")
        fails += sum(1 for r in rows if r.failed)
    _, _, g = comb_graphs[0]
    g = M.build_graph(g.arr, M.ChargingParams(ALPHA))
    injected = inject_fault(g, "arc")
    detected = injected and any(r.failed for r in M.audit_arcs_proposition(g))
    ok = fails == 0 and pairs > 0 and detected
    report(4, ok, f"{pairs} C-edge pairs checked, {fails} failures, fault detected={detected}")
    assert ok


def test_criterion_5_bipartite():
    problems = []
    for n in (1, 2):
        s1, s2 = gen_bipartite_closed_small(n)
        arr = oriented_arrangement(build_arrangement(s1 + s2))
        g = B.build_graph_closed(arr, B.ClosedChargingParams(ALPHA))
        for q in sorted(arr.X1 | arr.X2):
            problems += [r for r in B.audit_upper_closed(g, q) if r.failed]
        for p in sorted(arr.T):
            for k in g.levels:
                r = B.audit_lower_closed(g, p, k)
                if not r.computed >= 2:
                    problems.append(r)
        l = B.level_count(n)
        if not g.total_weight() >= ALPHA * l * n * n:
            problems.append(("total", n))
        wide = B.build_graph_closed(arr, B.ClosedChargingParams(ALPHA, (1, 2, 4, 8)))
        for k in (1, 2):
            if wide.edge_keys("A''", k) != wide.edge_keys("A'", 4 * k):
                problems.append(("identity", n, k))
    g2 = B.build_graph_closed(oriented_arrangement(build_arrangement(sum(gen_bipartite_closed_small(2), []))))
    report(5, not problems, f"n=1,2; total weight at n=2 is {g2.total_weight()} >= 8; {len(problems)} failures")
    assert not problems


def _crossings(arr):
    return sorted((ip.point, ip.curve_lo, ip.curve_hi) for ip in arr.points if not ip.is_touching)


def test_criterion_6_reductions():
    problems = []
    curves = gen_convex_family(8, seed=0)
    results = [decompose_closed(c) for c in curves]
    if not all(len(r.pieces) == 2 for r in results) or sum(r.cut_count for r in results) > 16:
        problems.append("decompose")

    for seed in range(3):
        combs, lines = _open_comb(5, 3, seed)
        before = build_arrangement(combs + lines)
        after = build_arrangement(sorted(extend_biinfinite(lines, combs), key=lambda c: c.id))
        tb = {(before.points[t].point, before.points[t].curve_lo, before.points[t].curve_hi) for t in before.T}
        ta = {(after.points[t].point, after.points[t].curve_lo, after.points[t].curve_hi) for t in after.T}
        cb = Counter((ip.curve_lo, ip.curve_hi) for ip in before.points if not ip.is_touching)
        ca = Counter((ip.curve_lo, ip.curve_hi) for ip in after.points if not ip.is_touching)
        if ta != tb or any(ca[k] - cb[k] > 2 for k in ca):
            problems.append(f"extend seed {seed}")

    for seed in range(6):
        s1, s2 = gen_comb(5, 5, 3, seed)
        mixed = random_bipartition([c.with_class(None) for c in s1 + s2], seed).curves
        arr = build_arrangement(mixed)
        cross = sum(1 for t in arr.T if arr.class_of(arr.points[t].curve_lo) != arr.class_of(arr.points[t].curve_hi))
        res = normalize_one_sided(mixed)
        after = build_arrangement(res.curves)
        if _crossings(after) != _crossings(arr) or 2 * res.retained_touchings < cross:
            problems.append(f"normalize seed {seed}")

    for seed in range(20):
        doc, rep = run_pipeline(gen_convex_family(6 + seed % 5, seed=seed), seed=seed)
        s = doc["summary"]
        if rep.violations or not s["intersections"] >= 2 * comb(s["n"], 2) - s["T"]:
            problems.append(f"pipeline seed {seed}")
    report(6, not problems, f"decompose, extend x3, normalize x6, pipeline x20; failures: {problems or 'none'}")
    assert not problems


def test_criterion_7_determinism(tmp_path, monkeypatch):
    outputs = []
    for threads in ("1", "2", "8"):
        monkeypatch.setenv("TANGENCY_CHARGE_THREADS", threads)
        d = tmp_path / threads
        d.mkdir()
        assert main(["generate", "--family", "comb", "--n", "6", "--touches", "3", "--seed", "5", "--out", str(d / "c.json")]) == 0
        assert main(["charge", str(d / "c.json"), "--scheme", "monotone", "--audit", "--out", str(d / "c.rep.json"),
                     "--csv", str(d / "c.csv")]) == 0
        write_curves(d / "v.json", gen_convex_family(6, seed=1))
        assert main(["pipeline-rt", str(d / "v.json"), "--out", str(d / "v.rep.json")]) == 0
        s1, s2 = gen_bipartite_closed_small(2)
        write_curves(d / "b.json", s1 + s2)
        assert main(["charge", str(d / "b.json"), "--scheme", "bipartite", "--orient", "--audit", "--out", str(d / "b.rep.json")]) == 0
        outputs.append([(d / f).read_bytes() for f in ("c.json", "c.rep.json", "c.csv", "v.json", "v.rep.json", "b.rep.json")])
    ok = outputs[0] == outputs[1] == outputs[2]
    json.loads(outputs[0][1])
    report(7, ok, "6 files byte-identical across 3 runs with 1, 2 and 8 threads" if ok else "outputs differ")
    assert ok
