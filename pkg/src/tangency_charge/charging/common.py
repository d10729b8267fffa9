"""Weights, edges, graphs and audit rows shared by both charging schemes."""

from __future__ import annotations

import math
from dataclasses import replace
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Union

Number = Union[Fraction, float]

AGG_TOL = 1e-9


class PreconditionError(ValueError):
    """The input does not satisfy what a charging scheme assumes."""


@dataclass(frozen=True, order=True)
class Weight:
    """coeff * alpha**alpha_exp, kept symbolic so sums stay exact."""

    coeff: Fraction
    alpha_exp: int

    def value(self, alpha: Number) -> Number:
        return self.coeff * alpha**self.alpha_exp


def weight_sum(weights, alpha: Number) -> Number:
    by_exp: dict[int, Fraction] = defaultdict(Fraction)
    for w in weights:
        by_exp[w.alpha_exp] += w.coeff
    return sum((c * alpha**e for e, c in sorted(by_exp.items())), Fraction(0) if isinstance(alpha, Fraction) else 0.0)


@dataclass(frozen=True)
class Arc:
    """Open piece of ``curve`` with abscissa strictly between ``x_lo`` and ``x_hi``."""

    curve: int
    x_lo: Fraction
    x_hi: Fraction


@dataclass(frozen=True, order=True)
class ChargingEdge:
    touching: int
    crossing: int
    family: str
    level: int
    weight: Weight = field(compare=False)
    # family-specific: C (monotone) carries (a, c, q', Arc); closed B carries r; closed C carries (a, d, q')
    witness: Any = None


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def power_of_two_levels(limit: Fraction, strict: bool = False) -> list[int]:
    """1, 2, 4, ... up to ``limit`` (inclusive unless ``strict``)."""
    out = []
    k = 1
    while (k < limit) if strict else (k <= limit):
        out.append(k)
        k *= 2
    return out


@dataclass
class ChargingGraph:
    scheme: str
    alpha: Fraction
    levels: list[int]
    edges: list[ChargingEdge]
    arr: Any = field(repr=False)
    by_crossing: dict = field(default_factory=dict, repr=False)
    by_touching: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.reindex()

    def reindex(self):
        self.edges.sort()
        self.by_crossing = defaultdict(list)
        self.by_touching = defaultdict(list)
        for e in self.edges:
            self.by_crossing[e.crossing].append(e)
            self.by_touching[e.touching].append(e)

    def total_weight(self, alpha: Optional[Number] = None) -> Number:
        return weight_sum((e.weight for e in self.edges), self.alpha if alpha is None else alpha)

    def family_totals(self) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for fam in sorted({e.family for e in self.edges}):
            out[fam] = weight_sum((e.weight for e in self.edges if e.family == fam), self.alpha)
        return out

    def edge_keys(self, family: str, level: int) -> set:
        return {(e.touching, e.crossing) for e in self.edges if e.family == family and e.level == level}


@dataclass
class AuditRow:
    audit_kind: str
    vertex_id: Optional[int]
    level: Optional[int]
    computed: Optional[Number]
    bound: Optional[Number]
    relation: str  # "<=", ">=" or "=="
    status: str  # pass | fail | skipped | vacuous
    note: str = ""

    @property
    def failed(self) -> bool:
        return self.status == "fail"


def compare(computed: Number, bound: Number, relation: str, tol: float = 0.0) -> bool:
    if relation == "<=":
        return computed <= bound + tol if tol else computed <= bound
    if relation == ">=":
        return computed >= bound - tol if tol else computed >= bound
    if relation == "==":
        return abs(computed - bound) <= tol if tol else computed == bound
    raise ValueError(relation)


def row(kind, vertex, level, computed, bound, relation, tol=0.0, note="") -> AuditRow:
    ok = compare(computed, bound, relation, tol)
    return AuditRow(kind, vertex, level, computed, bound, relation, "pass" if ok else "fail", note)


@dataclass
class AuditReport:
    rows: list[AuditRow] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    notices: list[str] = field(default_factory=list)

    def extend(self, rows):
        self.rows.extend(rows)

    @property
    def violations(self) -> list[AuditRow]:
        return [r for r in self.rows if r.failed]

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, kind: str, status: Optional[str] = None) -> int:
        return sum(1 for r in self.rows if r.audit_kind == kind and (status is None or r.status == status))


def log2(x: Number) -> float:
    return math.log2(float(x))


def inject_fault(graph: ChargingGraph, kind: str) -> bool:
    """Corrupt one edge in place (test hook).  Returns False if nothing to corrupt.

    ``weight`` doubles the coefficient of the first edge.  ``arc`` moves the
    arc of a C edge onto the carrier of another C edge at the same crossing,
    or stretches it when all C edges there share one touching.
    """
    if kind == "weight":
        if not graph.edges:
            return False
        e = graph.edges[0]
        graph.edges[0] = replace(e, weight=Weight(e.weight.coeff * 2, e.weight.alpha_exp))
        graph.reindex()
        return True
    if kind == "arc":
        for q in sorted(graph.by_crossing):
            cs = [e for e in graph.by_crossing[q] if e.family == "C" and isinstance(e.witness, tuple) and len(e.witness) == 4]
            for e1 in cs:
                for e2 in cs:
                    if e1.touching != e2.touching:
                        arc = e2.witness[3]
                        bad = replace(arc, curve=e1.witness[3].curve)
                        i = graph.edges.index(e2)
                        graph.edges[i] = replace(e2, witness=e2.witness[:3] + (bad,))
                        graph.reindex()
                        return True
            if len(cs) >= 2:
                # all from one touching: move one arc so the two no longer coincide
                e2 = cs[1]
                arc = e2.witness[3]
                i = graph.edges.index(e2)
                graph.edges[i] = replace(e2, witness=e2.witness[:3] + (replace(arc, x_hi=arc.x_hi + 1),))
                graph.reindex()
                return True
        return False
    raise ValueError(f"unknown fault {kind!r}")
