"""Charging schemes: monotone (two classes of x-monotone curves) and bipartite (closed curves)."""

from .common import AuditReport, AuditRow, ChargingEdge, ChargingGraph, PreconditionError, Weight

__all__ = ["AuditReport", "AuditRow", "ChargingEdge", "ChargingGraph", "PreconditionError", "Weight"]
