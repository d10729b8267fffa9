"""Charging scheme for two classes of bi-infinite x-monotone curves.

Touchings (S1 above S2) are charged to same-class crossings to their right
through edge families A, B and C at levels k = 1, 2, 4, ...; the audits check
the per-crossing upper bounds and the per-touching lower bound level by level.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from ..arrangement import Arrangement, class_sizes, count_between_monotone
from ..geometry import BiInfiniteMonotone
from .common import (
    AGG_TOL,
    Arc,
    AuditReport,
    AuditRow,
    ChargingEdge,
    ChargingGraph,
    PreconditionError,
    Weight,
    ceil_frac,
    log2,
    power_of_two_levels,
    row,
    weight_sum,
)

FAMILY_EXP = {"A": 0, "B": 1, "C": 2}


@dataclass(frozen=True)
class ChargingParams:
    alpha: Fraction = Fraction(2)
    levels: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError("alpha must exceed 1")

    def resolve_levels(self, arr: Arrangement) -> list[int]:
        if self.levels is not None:
            return list(self.levels)
        return power_of_two_levels(arr.t_eff / 2)


def expected_weight(family: str, k: int) -> Weight:
    return Weight(Fraction(1, k), FAMILY_EXP[family])


def check_normalized(arr: Arrangement) -> None:
    if not arr.monotone:
        raise PreconditionError("the monotone scheme needs x-monotone curves")
    for c in arr.curves:
        if not isinstance(c.geometry, BiInfiniteMonotone):
            raise PreconditionError(f"curve {c.id} is not bi-infinite")
        if c.cls not in ("S1", "S2"):
            raise PreconditionError(f"curve {c.id} has no class")
    for pid in sorted(arr.T):
        ip = arr.points[pid]
        upper = ip.kind.upper_or_left
        lower = ip.other(upper)
        if arr.class_of(upper) != "S1" or arr.class_of(lower) != "S2":
            raise PreconditionError(f"touching {pid} at {ip.point} is not an S1 curve above an S2 curve")


class _Counter:
    """Cached helper counts over one arrangement."""

    def __init__(self, arr: Arrangement):
        self.arr = arr
        self._partner_touch: dict = {}
        self._pair_xs: dict = {}

    def partner_touches(self, a: int, c: int) -> list[int]:
        """Prefix counts over a's sequence of touchings whose partner touches c."""
        key = (a, c)
        got = self._partner_touch.get(key)
        if got is None:
            arr = self.arr
            got = [0]
            for pid in arr.per_curve_seq[a]:
                hit = pid in arr.T and arr.touching_between(arr.points[pid].other(a), c) is not None
                got.append(got[-1] + hit)
            self._partner_touch[key] = got
        return got

    def next_crossing(self, a: int, c: int, x) -> Optional[int]:
        key = (min(a, c), max(a, c))
        got = self._pair_xs.get(key)
        if got is None:
            pids = sorted(self.arr.pair_points(a, c), key=lambda pid: self.arr.points[pid].point.x)
            got = ([self.arr.points[pid].point.x for pid in pids], pids)
            self._pair_xs[key] = got
        xs, pids = got
        i = bisect.bisect_right(xs, x)
        return pids[i] if i < len(pids) else None


def build_graph(arr: Arrangement, params: ChargingParams = ChargingParams()) -> ChargingGraph:
    check_normalized(arr)
    alpha = params.alpha
    levels = params.resolve_levels(arr)
    edges: list[ChargingEdge] = []
    if not levels:
        return ChargingGraph("monotone", alpha, levels, edges, arr)
    helper = _Counter(arr)
    X = arr.X
    pts = arr.points
    for p in sorted(arr.T):
        xp = pts[p].point.x
        for a in (pts[p].curve_lo, pts[p].curve_hi):
            b = pts[p].other(a)
            seq = arr.per_curve_seq[a]
            pre_t = arr.prefix(a, "T")
            i = arr.position(a, p)
            for j in range(i + 1, len(seq)):
                q = seq[j]
                if q not in X:
                    continue
                xq = pts[q].point.x
                c = pts[q].other(a)
                cnt_a = pre_t[j] - pre_t[i + 1]
                t_bc = arr.touching_between(b, c)
                x_bc = pts[t_bc].point.x if t_bc is not None else None
                b_ok = x_bc is not None and x_bc > xq
                cnt_b2 = None
                if b_ok:
                    flags = helper.partner_touches(a, c)
                    cnt_b2 = flags[j] - flags[i + 1]
                c_ok = False
                if b_ok:
                    q2 = helper.next_crossing(a, c, xq)
                    if q2 is not None:
                        xq2 = pts[q2].point.x
                        if x_bc < xq2:
                            c_ok = True
                            cnt_xb = count_between_monotone(arr, b, xp, xq2, "X")
                            arc = Arc(b, xp, xq2)
                for k in levels:
                    if cnt_a < k:
                        edges.append(ChargingEdge(p, q, "A", k, expected_weight("A", k), (a,)))
                    if b_ok and cnt_b2 * alpha < k:
                        edges.append(ChargingEdge(p, q, "B", k, expected_weight("B", k), (a, c, t_bc)))
                    if c_ok and cnt_a < k and cnt_xb < alpha * k:
                        edges.append(ChargingEdge(p, q, "C", k, expected_weight("C", k), (a, c, q2, arc)))
    return ChargingGraph("monotone", alpha, levels, edges, arr)


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


def audit_upper_per_level(graph: ChargingGraph, q: int) -> list[AuditRow]:
    alpha = graph.alpha
    inc = graph.by_crossing.get(q, [])
    if not inc:
        return [AuditRow("upper", q, None, 0, 0, "<=", "vacuous", "no incident edges")]
    rows = []
    c_levels = [e.level for e in inc if e.family == "C"]
    k0 = min(c_levels) if c_levels else None
    for k in graph.levels:
        n_a = sum(1 for e in inc if e.family == "A" and e.level == k)
        n_b = sum(1 for e in inc if e.family == "B" and e.level == k)
        n_c = sum(1 for e in inc if e.family == "C" and e.level == k)
        rows.append(row("upper-A", q, k, n_a, 2 * k, "<="))
        rows.append(row("upper-B", q, k, n_b, 2 * ceil_frac(Fraction(k) / alpha), "<="))
        bound_c = k if k0 is None else min(k, ceil_frac(alpha * k0))
        rows.append(row("upper-C", q, k, n_c, bound_c, "<="))
    roles = {e.witness[0] for e in inc if e.family == "C"}
    if roles:
        rows.append(row("upper-C-role", q, None, len(roles), 1, "<=", note="curves acting as a"))
    return rows


def aggregate_bound(t_eff: Fraction, alpha) -> float:
    a = float(alpha)
    return 4 * log2(t_eff) + a * a * math.log2(a) + 6 * a * a


def audit_upper_aggregate(graph: ChargingGraph, q: int) -> AuditRow:
    t = graph.arr.t_eff
    if t < 2:
        return AuditRow("upper-aggregate", q, None, None, None, "<=", "skipped", "t_eff < 2")
    computed = float(weight_sum((e.weight for e in graph.by_crossing.get(q, [])), float(graph.alpha)))
    return row("upper-aggregate", q, None, computed, aggregate_bound(t, graph.alpha), "<=", tol=AGG_TOL)


def _touchings_right(arr: Arrangement, curve: int, p: int) -> list[int]:
    seq = arr.per_curve_seq[curve]
    i = arr.position(curve, p)
    return [pid for pid in seq[i + 1:] if pid in arr.T]


def audit_lower(graph: ChargingGraph, p: int, k: int) -> AuditRow:
    arr = graph.arr
    ip = arr.points[p]
    u, w = ip.curve_lo, ip.curve_hi
    right = {u: _touchings_right(arr, u, p), w: _touchings_right(arr, w, p)}
    if len(right[u]) < k or len(right[w]) < k:
        return AuditRow("lower", p, k, None, graph.alpha, ">=", "skipped", "eligibility")
    xp = ip.point.x
    valid = []
    for a, b in ((u, w), (w, u)):
        rk = right[a][k - 1]
        if count_between_monotone(arr, b, xp, arr.points[rk].point.x, "T") < k:
            valid.append(a)
    if not valid:
        return AuditRow("lower", p, k, None, graph.alpha, ">=", "fail", "role-failure")
    total = weight_sum((e.weight for e in graph.by_touching.get(p, []) if e.level == k), graph.alpha)
    return row("lower", p, k, total, graph.alpha, ">=", note=f"a={valid[0]}")


def _arc_pair_row(graph: ChargingGraph, q: int, e1: ChargingEdge, e2: ChargingEdge) -> AuditRow:
    arr = graph.arr
    arc1, arc2 = e1.witness[3], e2.witness[3]
    tag = f"touchings {e1.touching},{e2.touching}"
    if e1.touching == e2.touching:
        same = arc1 == arc2
        return AuditRow("arcs", q, None, int(same), 1, ">=", "pass" if same else "fail",
                        tag + (" coincide" if same else " arcs differ"))
    if arc1.curve == arc2.curve:
        return AuditRow("arcs", q, None, 0, 1, ">=", "fail", tag + " share a carrier")
    lo, hi = max(arc1.x_lo, arc2.x_lo), min(arc1.x_hi, arc2.x_hi)
    common = [pid for pid in arr.pair_points(arc1.curve, arc2.curve) if lo < arr.points[pid].point.x < hi]
    bad = [pid for pid in common if pid not in arr.X]
    ok = bool(common) and not bad
    return AuditRow("arcs", q, None, len(common) if ok else 0, 1, ">=", "pass" if ok else "fail",
                    tag + (" cross in X" if ok else " arcs neither coincide nor cross in X"))


def audit_arcs_proposition(graph: ChargingGraph) -> list[AuditRow]:
    rows = []
    for q in sorted(graph.by_crossing):
        cs = [e for e in graph.by_crossing[q] if e.family == "C"]
        for e1, e2 in combinations(cs, 2):
            rows.append(_arc_pair_row(graph, q, e1, e2))
    if not rows:
        rows.append(AuditRow("arcs", None, None, 0, 0, ">=", "vacuous", "no crossing carries two C edges"))
    return rows


def formula_bound(t_eff, n: int, alpha) -> Optional[float]:
    """The closed-form |X| lower bound; None when vacuous (log2 t <= 3)."""
    lt = log2(t_eff)
    if lt <= 3:
        return None
    a = float(alpha)
    return (lt - 3) * a * float(t_eff) * n / 2 / (4 * lt + a * a * math.log2(a) + 6 * a * a)


def alpha_star(t_eff) -> Optional[float]:
    lt = log2(t_eff) if t_eff > 0 else 0.0
    if lt <= 1:
        return None
    return math.sqrt(lt / math.log2(lt))


def summarize(graph: ChargingGraph, lower_rows: Optional[list[AuditRow]] = None) -> tuple[dict, list[AuditRow]]:
    arr = graph.arr
    alpha = graph.alpha
    s1, s2 = class_sizes(arr)
    n_t = len(arr.T)
    rows = []
    per_level = {}
    for k in graph.levels:
        total = weight_sum((e.weight for e in graph.edges if e.level == k), alpha)
        allowance = k * (s1 + s2)
        rhs = alpha * (n_t - allowance)
        per_level[k] = total
        if rhs <= 0:
            rows.append(AuditRow("level-total", None, k, total, rhs, ">=", "vacuous", "|T| within the skip allowance"))
        else:
            rows.append(row("level-total", None, k, total, rhs, ">="))
        if lower_rows is not None:
            skipped = sum(1 for r in lower_rows if r.level == k and r.status == "skipped")
            rows.append(row("skip-count", None, k, skipped, allowance, "<="))
    n_x = len(arr.X)
    bounds = {}
    for label, a in (("alpha", alpha), ("alpha_star", alpha_star(arr.t_eff))):
        if a is None or a <= 1:
            rows.append(AuditRow("formula", None, None, n_x, None, ">=", "vacuous", f"{label}: undefined"))
            continue
        fb = formula_bound(arr.t_eff, arr.n, a) if arr.t_eff > 0 else None
        bounds[label] = {"alpha": float(a), "bound": fb}
        if fb is None:
            rows.append(AuditRow("formula", None, None, n_x, 0, ">=", "vacuous", f"{label}: log2 t_eff <= 3"))
        else:
            rows.append(row("formula", None, None, n_x, fb, ">=", note=label))
    summary = {
        "total_weight": graph.total_weight(),
        "family_totals": graph.family_totals(),
        "level_totals": per_level,
        "X": n_x,
        "formula_bounds": bounds,
    }
    return summary, rows


def audit_all(graph: ChargingGraph) -> AuditReport:
    report = AuditReport()
    arr = graph.arr
    if not graph.levels:
        report.notices.append("t_eff < 2: no levels, graph empty, audits vacuous")
    report.extend(audit_weights(graph))
    for q in sorted(arr.X):
        report.extend(audit_upper_per_level(graph, q))
        report.rows.append(audit_upper_aggregate(graph, q))
    lower = [audit_lower(graph, p, k) for p in sorted(arr.T) for k in graph.levels]
    report.extend(lower)
    report.extend(audit_arcs_proposition(graph))
    summary, rows = summarize(graph, lower)
    report.extend(rows)
    report.summary = summary
    return report
