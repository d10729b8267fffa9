"""Command-line front end.

Exit codes: 0 all audits pass, 1 audit failures or oracle mismatch, 2 usage or
parse error, 3 the input violates a precondition.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from math import comb
from typing import Optional

from . import generators
from .arrangement import (
    apply_orientation,
    build_arrangement,
    orient_closed_family,
    validate_general_position,
)
from .charging import bipartite, monotone
from .charging.common import AuditReport, PreconditionError, inject_fault, row
from .geometry import Closed, CurveRecord, DegenerateInput
from .io import FileFormatError, build_report, dump_report, read_curves, rows_to_csv, to_jsonable, write_curves
from .oracle import arrangement_multiset, brute_force_intersections
from .transforms import (
    decompose_closed,
    extend_biinfinite,
    normalize_one_sided,
    random_bipartition,
    trim_pieces,
)

EXIT_OK, EXIT_AUDIT, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3


class Precondition(Exception):
    pass


def _alpha(text: str) -> Fraction:
    try:
        a = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None
    if a <= 1:
        raise argparse.ArgumentTypeError("alpha must be a rational > 1")
    return a


def _levels(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("levels must be comma separated integers") from None
    if any(k < 1 for k in out):
        raise argparse.ArgumentTypeError("levels must be positive")
    return out


def _write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_generate(args) -> int:
    fam = args.family
    if fam == "comb":
        s1, s2 = generators.gen_comb(args.n, args.n, args.touches or args.n, args.seed)
        curves = s1 + s2
    elif fam == "convex":
        curves = generators.gen_convex_family(args.n, args.seed)
    elif fam == "bipartite_closed_small":
        s1, s2 = generators.gen_bipartite_closed_small(args.n)
        curves = s1 + s2
    else:
        curves = generators.gen_random_polylines(args.n, args.m, args.seed)
    write_curves(args.out, curves)
    return EXIT_OK


def cmd_analyze(args) -> int:
    curves = read_curves(args.input)
    gp = validate_general_position(curves)
    doc = {"version": 1, "general_position": {"ok": gp.ok, "violations": to_jsonable(_violations(gp))}}
    code = EXIT_OK
    if gp.ok:
        doc["stats"] = build_arrangement(curves).stats()
    else:
        code = EXIT_PRECONDITION
    _write_text(args.out, dump_report(to_jsonable(doc)))
    return code


def _violations(gp):
    return [{"kind": v["kind"], "details": v["details"], "curves": list(v["curves"])} for v in gp.violations]


def cmd_oracle_check(args) -> int:
    curves = read_curves(args.input)
    arr = build_arrangement(curves)
    ok = arrangement_multiset(arr) == brute_force_intersections(curves)
    doc = {"version": 1, "match": ok, "stats": arr.stats()}
    _write_text(args.out, dump_report(to_jsonable(doc)))
    return EXIT_OK if ok else EXIT_AUDIT


def cmd_transform(args) -> int:
    curves = read_curves(args.input)
    op = args.op
    if op == "orient":
        arr = build_arrangement(curves)
        out = apply_orientation(curves, orient_closed_family(arr))
    elif op == "decompose":
        arr = build_arrangement(curves)
        results = [decompose_closed(c) for c in arr.curves]
        out = [CurveRecord(i, None, g) for i, (_, g) in enumerate(trim_pieces(arr, results))]
    elif op == "bipartition":
        out = random_bipartition(curves, args.seed).curves
    elif op == "normalize":
        out = normalize_one_sided(curves).curves
    else:
        down = [c for c in curves if c.cls == "S2"]
        up = [c for c in curves if c.cls != "S2"]
        out = extend_biinfinite(down, up)
    write_curves(args.out, out)
    return EXIT_OK


def charge_curves(curves, scheme: str, alpha: Fraction, levels=None, audit: bool = True, fault: Optional[str] = None):
    """Build, optionally corrupt, and audit a charging graph.  Returns the report document."""
    arr = build_arrangement(curves)
    if scheme == "monotone":
        graph = monotone.build_graph(arr, monotone.ChargingParams(alpha, levels))
    else:
        graph = bipartite.build_graph_closed(arr, bipartite.ClosedChargingParams(alpha, levels))
    if fault and not inject_fault(graph, fault):
        raise Precondition(f"nothing to corrupt for fault {fault!r}")
    if not audit:
        report = AuditReport()
        report.summary = {"total_weight": graph.total_weight(), "family_totals": graph.family_totals(), "edges": len(graph.edges)}
    elif scheme == "monotone":
        report = monotone.audit_all(graph)
    else:
        report = bipartite.audit_all_closed(graph)
    return build_report(arr.stats(), report, scheme, alpha), report


def cmd_charge(args) -> int:
    curves = read_curves(args.input)
    if args.scheme == "bipartite" and args.orient:
        curves = apply_orientation(curves, orient_closed_family(build_arrangement(curves)))
    doc, report = charge_curves(curves, args.scheme, args.alpha, args.levels, args.audit, args.inject_fault)
    _write_text(args.out, dump_report(to_jsonable(doc)))
    if args.csv:
        _write_text(args.csv, rows_to_csv(report.rows))
    return EXIT_AUDIT if report.violations else EXIT_OK


def run_pipeline(curves, alpha: Fraction = Fraction(2), threshold: int = 4, seed: int = 0) -> tuple[dict, AuditReport]:
    """Closed curves to monotone charging: count, decompose, trim, split, normalize, extend, charge."""
    if not curves or not all(isinstance(c.geometry, Closed) for c in curves):
        raise Precondition("pipeline-rt needs closed curves")
    curves = [c.with_class(None) for c in curves]
    arr = build_arrangement(curves)
    met = {(ip.curve_lo, ip.curve_hi) for ip in arr.points}
    ids = [c.id for c in arr.curves]
    for i, u in enumerate(ids):
        for v in ids[i + 1:]:
            if (u, v) not in met:
                raise Precondition(f"curves {u} and {v} do not intersect")
    n, n_t = len(curves), len(arr.T)
    total = len(arr.points)
    report = AuditReport()
    report.rows.append(row("intersections", None, None, total, 2 * comb(n, 2) - n_t, ">="))
    results = [decompose_closed(c) for c in arr.curves]
    cuts = sum(r.cut_count for r in results)
    per_curve = max(r.cut_count for r in results)
    report.rows.append(row("cuts", None, None, cuts, per_curve * n, "<="))
    pieces = trim_pieces(arr, results)
    pcs = [CurveRecord(i, None, g) for i, (_, g) in enumerate(pieces)]
    parr = build_arrangement(pcs)
    report.rows.append(row("pieces-keep-intersections", None, None, len(parr.points), total, "=="))
    summary = {"n": n, "T": n_t, "intersections": total, "bound": 2 * comb(n, 2) - n_t, "cuts": cuts, "pieces": len(pcs)}
    if n_t >= threshold:
        split = random_bipartition(pcs, seed, parr)
        norm = normalize_one_sided(split.curves)
        s1 = [c for c in norm.curves if c.cls == "S1"]
        s2 = [c for c in norm.curves if c.cls == "S2"]
        ext = extend_biinfinite(s2, s1)
        doc, sub = charge_curves(ext, "monotone", alpha)
        report.extend(sub.rows)
        report.notices.extend(sub.notices)
        summary.update(charge=to_jsonable(sub.summary), cross_touchings=split.cross_touchings, retained=norm.retained_touchings)
    else:
        report.notices.append(f"|T| = {n_t} below threshold {threshold}: charging skipped")
    report.summary = summary
    return build_report(arr.stats(), report, "pipeline-rt", alpha), report


def cmd_pipeline_rt(args) -> int:
    doc, report = run_pipeline(read_curves(args.input), args.alpha, args.threshold, args.seed)
    _write_text(args.out, dump_report(to_jsonable(doc)))
    if args.csv:
        _write_text(args.csv, rows_to_csv(report.rows))
    return EXIT_AUDIT if report.violations else EXIT_OK


# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tangency-charge", description="Touchings, crossings and charging audits for curve families.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded curve family")
    g.add_argument("--family", required=True, choices=["comb", "convex", "bipartite_closed_small", "random_polylines"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--touches", type=int, default=None)
    g.add_argument("--m", type=int, default=6, help="vertices per random polyline")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="general position check and intersection counts")
    a.add_argument("input")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    o = sub.add_parser("oracle-check", help="compare the arrangement with brute force")
    o.add_argument("input")
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle_check)

    t = sub.add_parser("transform", help="apply one reduction")
    t.add_argument("input")
    t.add_argument("--op", required=True, choices=["orient", "decompose", "bipartition", "normalize", "extend"])
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_transform)

    c = sub.add_parser("charge", help="build and audit a charging graph")
    c.add_argument("input")
    c.add_argument("--scheme", required=True, choices=["monotone", "bipartite"])
    c.add_argument("--alpha", type=_alpha, default=Fraction(2))
    c.add_argument("--levels", type=_levels, default=None)
    c.add_argument("--audit", action="store_true")
    c.add_argument("--orient", action="store_true", help="orient closed curves before charging")
    c.add_argument("--inject-fault", choices=["weight", "arc"], default=None, help=argparse.SUPPRESS)
    c.add_argument("--out")
    c.add_argument("--csv")
    c.set_defaults(func=cmd_charge)

    r = sub.add_parser("pipeline-rt", help="closed curves through the full reduction chain")
    r.add_argument("input")
    r.add_argument("--alpha", type=_alpha, default=Fraction(2))
    r.add_argument("--threshold", type=int, default=4)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out")
    r.add_argument("--csv")
    r.set_defaults(func=cmd_pipeline_rt)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (FileFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Precondition, PreconditionError, DegenerateInput) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
