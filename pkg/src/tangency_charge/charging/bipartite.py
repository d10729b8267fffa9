"""Charging scheme for oriented closed curves with complete bipartite touchings.

Every curve is oriented so its touching partners lie on its left, and all
arcs follow that orientation and exclude their endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..arrangement import Arrangement, OrientationError, orient_closed_family
from ..geometry import Closed
from .common import (
    AGG_TOL,
    AuditReport,
    AuditRow,
    ChargingEdge,
    ChargingGraph,
    PreconditionError,
    Weight,
    ceil_frac,
    power_of_two_levels,
    row,
    weight_sum,
)


@dataclass(frozen=True)
class ClosedChargingParams:
    alpha: Fraction = Fraction(2)
    levels: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError("alpha must exceed 1")

    def resolve_levels(self, arr: Arrangement) -> list[int]:
        if self.levels is not None:
            return list(self.levels)
        return power_of_two_levels(Fraction(arr.n), strict=True)


def level_count(n: int) -> int:
    """ceil(log2 n): the number of levels k < n."""
    return (n - 1).bit_length() if n >= 1 else 0


def expected_weight(family: str, k: int) -> Weight:
    return {
        "A": Weight(Fraction(1, k), 0),
        "A'": Weight(Fraction(1, k), 1),
        "A''": Weight(Fraction(1, k), -1),
        "B": Weight(Fraction(1, k * k), -1),
        "C": Weight(Fraction(1, k), 2),
    }[family]


def check_oriented(arr: Arrangement) -> None:
    if not arr.curves or not all(isinstance(c.geometry, Closed) for c in arr.curves):
        raise PreconditionError("the bipartite scheme needs closed curves")
    for c in arr.curves:
        if c.cls not in ("S1", "S2"):
            raise PreconditionError(f"curve {c.id} has no class")
        if c.geometry.orientation is None:
            raise PreconditionError(f"curve {c.id} is not oriented")
    try:
        want = orient_closed_family(arr)
    except OrientationError as exc:
        raise PreconditionError(str(exc)) from None
    for c in arr.curves:
        if arr.per_curve_seq and any(pid in arr.T for pid in arr.per_curve_seq[c.id]):
            if want[c.id] != c.geometry.orientation:
                raise PreconditionError(f"curve {c.id} is oriented with touchings on its right")
    for pid in arr.T:
        ip = arr.points[pid]
        if arr.class_of(ip.curve_lo) == arr.class_of(ip.curve_hi):
            raise PreconditionError(f"touching {pid} joins two curves of one class")


class _Arcs:
    def __init__(self, arr: Arrangement):
        self.arr = arr

    def count_t(self, curve: int, frm: int, to: int) -> int:
        """T-points on the open oriented arc of ``curve`` from ``frm`` to ``to``."""
        arr = self.arr
        i = arr.position(curve, frm)
        j = arr.position(curve, to)
        pre = arr.prefix(curve, "T")
        total = pre[-1]
        if i == j:
            return total - (pre[i + 1] - pre[i])
        if i < j:
            return pre[j] - pre[i + 1]
        return total - (pre[i + 1] - pre[j])

    def strictly_inside(self, curve: int, frm: int, to: int, pid: int) -> bool:
        arr = self.arr
        i, j, m = arr.position(curve, frm), arr.position(curve, to), arr.position(curve, pid)
        if m in (i, j):
            return False
        if i < j:
            return i < m < j
        return m > i or m < j

    def next_common(self, d: int, a: int, after: int) -> Optional[int]:
        arr = self.arr
        seq = arr.per_curve_seq[d]
        start = arr.position(d, after)
        for step in range(1, len(seq)):
            pid = seq[(start + step) % len(seq)]
            if arr.points[pid].other(d) == a:
                return pid
        return None


def _s1_s2(arr: Arrangement, p: int) -> tuple[int, int]:
    ip = arr.points[p]
    if arr.class_of(ip.curve_lo) == "S1":
        return ip.curve_lo, ip.curve_hi
    return ip.curve_hi, ip.curve_lo


def build_graph_closed(arr: Arrangement, params: ClosedChargingParams = ClosedChargingParams()) -> ChargingGraph:
    check_oriented(arr)
    alpha = params.alpha
    levels = params.resolve_levels(arr)
    edges: list[ChargingEdge] = []
    arcs = _Arcs(arr)
    pts = arr.points
    X1, X2, T = arr.X1, arr.X2, arr.T

    def add(p, q, fam, k, witness=None):
        edges.append(ChargingEdge(p, q, fam, k, expected_weight(fam, k), witness))

    for p in sorted(T):
        a, b = _s1_s2(arr, p)
        for q in arr.per_curve_seq[a]:
            if q in X1:
                cnt = arcs.count_t(a, p, q)
                for k in levels:
                    if cnt < k:
                        add(p, q, "A", k, (a,))
        for q in arr.per_curve_seq[b]:
            if q in X2:
                cnt = arcs.count_t(b, q, p)
                for k in levels:
                    if cnt * alpha < k:
                        add(p, q, "A'", k, (b,))
                    if cnt < alpha * k:
                        add(p, q, "A''", k, (b,))
        for r in arr.per_curve_seq[a]:
            if r == p or r not in T:
                continue
            c = pts[r].other(a)
            cnt1 = arcs.count_t(a, p, r)
            for q in arr.per_curve_seq[c]:
                if q not in X2:
                    continue
                cnt2 = arcs.count_t(c, r, q)
                for k in levels:
                    if cnt1 < k and cnt2 < alpha * k:
                        add(p, q, "B", k, (r,))

    for q in sorted(X1):
        ip = pts[q]
        for a, d in ((ip.curve_lo, ip.curve_hi), (ip.curve_hi, ip.curve_lo)):
            q2 = arcs.next_common(d, a, q)
            if q2 is None:
                continue
            cnt_d = arcs.count_t(d, q, q2)
            for p in arr.per_curve_seq[a]:
                if p not in T:
                    continue
                b = pts[p].other(a)
                t_bd = arr.touching_between(b, d)
                if t_bd is None or not arcs.strictly_inside(d, q, q2, t_bd):
                    continue
                cnt_a = arcs.count_t(a, p, q)
                for k in levels:
                    if cnt_a < k and cnt_d < 3 * alpha * alpha * k:
                        add(p, q, "C", k, (a, d, q2))
    return ChargingGraph("bipartite", alpha, levels, edges, arr)


# ---------------------------------------------------------------------------
# audits


def audit_weights(graph: ChargingGraph) -> list[AuditRow]:
    bad = []
    for e in graph.edges:
        want = expected_weight(e.family, e.level)
        if e.weight != want:
            bad.append(
                AuditRow("weight", e.crossing, e.level, e.weight.value(graph.alpha), want.value(graph.alpha), "==", "fail",
                         f"{e.family} edge from touching {e.touching}")
            )
    if not bad:
        bad.append(AuditRow("weight", None, None, len(graph.edges), len(graph.edges), "==", "pass", "all edge weights exact"))
    return bad


def aggregate_bound_closed(n: int, alpha) -> float:
    a = float(alpha)
    return 6 * level_count(n) + 2 * a * a * math.log2(a) + 12 * a * a


def audit_upper_closed(graph: ChargingGraph, q: int) -> list[AuditRow]:
    arr = graph.arr
    alpha = graph.alpha
    inc = graph.by_crossing.get(q, [])
    if not inc:
        return [AuditRow("upper", q, None, 0, 0, "<=", "vacuous", "no incident edges")]
    rows = []

    def n_of(fam, k):
        return sum(1 for e in inc if e.family == fam and e.level == k)

    if q in arr.X1:
        c_levels = [e.level for e in inc if e.family == "C"]
        k0 = min(c_levels) if c_levels else None
        for k in graph.levels:
            rows.append(row("upper-A", q, k, n_of("A", k), 2 * k, "<="))
            bound_c = Fraction(k) if k0 is None else min(Fraction(k), 3 * alpha * alpha * k0)
            rows.append(row("upper-C", q, k, n_of("C", k), bound_c, "<="))
        roles = {e.witness[0] for e in inc if e.family == "C"}
        if roles:
            rows.append(row("upper-C-role", q, None, len(roles), 1, "<=", note="curves acting as a"))
    else:
        for k in graph.levels:
            rows.append(row("upper-A'", q, k, n_of("A'", k), 2 * ceil_frac(Fraction(k) / alpha), "<="))
            rows.append(row("upper-A''", q, k, n_of("A''", k), 2 * ceil_frac(alpha * k), "<="))
            rows.append(row("upper-B", q, k, n_of("B", k), 2 * k * ceil_frac(alpha * k), "<="))
    computed = float(weight_sum((e.weight for e in inc), float(alpha)))
    rows.append(row("upper-aggregate", q, None, computed, aggregate_bound_closed(arr.n, alpha), "<=", tol=AGG_TOL))
    return rows


def complete_bipartite(arr: Arrangement) -> Optional[str]:
    """None when every S1 curve touches every S2 curve once, else a diagnostic."""
    s1 = [c.id for c in arr.curves if c.cls == "S1"]
    s2 = [c.id for c in arr.curves if c.cls == "S2"]
    if len(s1) != len(s2):
        return f"class sizes differ ({len(s1)} vs {len(s2)})"
    for u in s1:
        for v in s2:
            if arr.touching_between(u, v) is None:
                return f"curves {u} and {v} do not touch"
    return None


def audit_lower_closed(graph: ChargingGraph, p: int, k: int) -> AuditRow:
    total = weight_sum((e.weight for e in graph.by_touching.get(p, []) if e.level == k), graph.alpha)
    return row("lower", p, k, total, graph.alpha, ">=")


def alpha_star_closed(n: int) -> Optional[float]:
    if n < 4:
        return None
    ln = math.log2(n)
    return math.sqrt(ln / math.log2(ln))


def summarize_closed(graph: ChargingGraph) -> tuple[dict, list[AuditRow], list[str]]:
    arr = graph.arr
    alpha = graph.alpha
    n = arr.n
    l = level_count(n)
    rows, notices = [], []
    total = graph.total_weight()
    fam = graph.family_totals()
    rows.append(row("family-additivity", None, None, sum(fam.values(), Fraction(0)), total, ">="))
    lower_total = alpha * l * n * n
    if l:
        rows.append(row("total-lower", None, None, total, lower_total, ">="))
    per_vertex = aggregate_bound_closed(n, alpha)
    implied = float(lower_total) / per_vertex
    n_x = len(arr.X1) + len(arr.X2)
    rows.append(row("implied-X", None, None, n_x, implied, ">=", tol=AGG_TOL))
    star = alpha_star_closed(n)
    numeric = None
    if star is None:
        notices.append("n < 4: alpha* undefined, numeric section skipped")
    elif star > 1:
        numeric = {"alpha": star, "implied_X": star * l * n * n / aggregate_bound_closed(n, star)}
    summary = {
        "total_weight": total,
        "family_totals": fam,
        "levels": l,
        "lower_total": lower_total,
        "per_vertex_upper": per_vertex,
        "implied_X": implied,
        "X": n_x,
        "alpha_star": numeric,
    }
    return summary, rows, notices


def audit_alpha_square_identity(graph: ChargingGraph) -> list[AuditRow]:
    """A''_k equals A'_{alpha^2 k} when alpha^2 is a power of two and both levels exist."""
    sq = graph.alpha * graph.alpha
    rows = []
    if sq.denominator != 1 or sq.numerator & (sq.numerator - 1):
        return [AuditRow("alpha-square", None, None, None, None, "==", "vacuous", "alpha^2 not a power of two")]
    m = int(sq)
    for k in graph.levels:
        if m * k in graph.levels:
            same = graph.edge_keys("A''", k) == graph.edge_keys("A'", m * k)
            rows.append(AuditRow("alpha-square", None, k, int(same), 1, "==", "pass" if same else "fail", f"A''_{k} vs A'_{m * k}"))
    if not rows:
        rows.append(AuditRow("alpha-square", None, None, None, None, "==", "vacuous", "no level pair"))
    return rows


def audit_all_closed(graph: ChargingGraph) -> AuditReport:
    arr = graph.arr
    report = AuditReport()
    report.extend(audit_weights(graph))
    for q in sorted(arr.X1 | arr.X2):
        report.extend(audit_upper_closed(graph, q))
    problem = complete_bipartite(arr)
    if problem:
        report.notices.append(f"lower audits refused: {problem}")
        report.rows.append(AuditRow("lower", None, None, None, None, ">=", "skipped", problem))
    else:
        for p in sorted(arr.T):
            for k in graph.levels:
                if k < arr.n:
                    report.rows.append(audit_lower_closed(graph, p, k))
                else:
                    report.rows.append(AuditRow("lower", p, k, None, graph.alpha, ">=", "skipped", "level k >= n"))
    report.extend(audit_alpha_square_identity(graph))
    summary, rows, notices = summarize_closed(graph)
    if problem:
        rows = [r for r in rows if r.audit_kind not in ("total-lower", "implied-X")]
    report.extend(rows)
    report.notices.extend(notices)
    report.summary = summary
    return report
