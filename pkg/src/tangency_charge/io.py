"""Curve and report files.

Rationals are written as ``"p/q"`` strings so files are bit-exact.  Output
uses sorted keys and fixed indentation, so equal inputs give equal bytes.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Sequence

from .charging.common import AuditReport, AuditRow, compare
from .geometry import Q, BiInfiniteMonotone, Closed, CurveRecord, OpenMonotone, fmt

FORMAT_VERSION = 1


class FileFormatError(ValueError):
    pass


def curve_to_dict(c: CurveRecord) -> dict:
    g = c.geometry
    out = {
        "id": c.id,
        "class": c.cls,
        "kind": g.kind,
        "vertices": [[fmt(v.x), fmt(v.y)] for v in g.vertices],
    }
    if isinstance(g, BiInfiniteMonotone):
        out["left_ray_slope"] = fmt(g.left_ray_slope)
        out["right_ray_slope"] = fmt(g.right_ray_slope)
    if isinstance(g, Closed) and g.orientation is not None:
        out["orientation"] = g.orientation
    return out


def curve_from_dict(d: dict) -> CurveRecord:
    try:
        kind = d["kind"]
        vs = [(Q(x), Q(y)) for x, y in d["vertices"]]
        if kind == "open":
            geom = OpenMonotone(vs)
        elif kind == "biinfinite":
            geom = BiInfiniteMonotone(vs, Q(d["left_ray_slope"]), Q(d["right_ray_slope"]))
        elif kind == "closed":
            geom = Closed(vs, d.get("orientation"))
        else:
            raise FileFormatError(f"unknown curve kind {kind!r}")
        return CurveRecord(int(d["id"]), d.get("class"), geom)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, FileFormatError):
            raise
        raise FileFormatError(f"bad curve entry: {exc}") from None


def dump_curves(curves: Sequence[CurveRecord]) -> str:
    doc = {"version": FORMAT_VERSION, "curves": [curve_to_dict(c) for c in sorted(curves, key=lambda c: c.id)]}
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def load_curves(text: str) -> list[CurveRecord]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"not JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("version") != FORMAT_VERSION or not isinstance(doc.get("curves"), list):
        raise FileFormatError("expected a version 1 curve file")
    return [curve_from_dict(d) for d in doc["curves"]]


def write_curves(path, curves) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_curves(curves))


def read_curves(path) -> list[CurveRecord]:
    with open(path, encoding="utf-8") as fh:
        return load_curves(fh.read())


# ---------------------------------------------------------------------------
# reports


def to_jsonable(value):
    if isinstance(value, Fraction):
        return fmt(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def _num(value):
    if value is None or isinstance(value, (int, float)):
        return value
    return Q(value)


def row_to_dict(r: AuditRow) -> dict:
    return {
        "audit_kind": r.audit_kind,
        "vertex_id": r.vertex_id,
        "level": r.level,
        "computed": to_jsonable(r.computed),
        "bound": to_jsonable(r.bound),
        "relation": r.relation,
        "status": r.status,
        "note": r.note,
    }


def row_from_dict(d: dict) -> AuditRow:
    return AuditRow(d["audit_kind"], d["vertex_id"], d["level"], _num(d["computed"]), _num(d["bound"]),
                    d["relation"], d["status"], d.get("note", ""))


def build_report(stats: dict, report: AuditReport, scheme: str, alpha: Fraction) -> dict:
    return {
        "version": FORMAT_VERSION,
        "scheme": scheme,
        "alpha": fmt(alpha),
        "stats": stats,
        "audits": [row_to_dict(r) for r in report.rows],
        "fails": [i for i, r in enumerate(report.rows) if r.failed],
        "summary": to_jsonable(report.summary),
        "notices": list(report.notices),
    }


def dump_report(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def recompute_status(d: dict, tol: float = 1e-9) -> str:
    """Status of a serialized row re-derived from its raw numbers."""
    if d["status"] in ("skipped", "vacuous") or d["relation"] not in ("<=", ">=", "=="):
        return d["status"]
    computed, bound = _num(d["computed"]), _num(d["bound"])
    use_tol = tol if isinstance(computed, float) or isinstance(bound, float) else 0.0
    return "pass" if compare(computed, bound, d["relation"], use_tol) else "fail"


CSV_FIELDS = ["audit_kind", "vertex_id", "level", "computed", "bound", "relation", "status", "note"]


def rows_to_csv(rows: Iterable[AuditRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(row_to_dict(r))
    return buf.getvalue()
