"""Human and CSV renderings: plan comparison, route drawings, stop and trace logs.

CSV output uses ',' between fields, '.' for decimals and '\\n' line ends, and
carries full float precision. Text tables round money and km to 0.1 and times
to whole minutes.
"""

from __future__ import annotations

import csv
import io
from typing import List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .evaluator import RouteTimeline, evaluate, propagate_times
from .instance_io import format_hhmm
from .model import CostBreakdown, Instance, RoutePlan

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf")

_COLUMNS = ("plan", "vehicle", "load_pct", "transport", "penalty", "total", "duration_min",
            "mileage_km", "status")


def _csv_text(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _rows_for(label: str, instance: Instance, plan: RoutePlan, cb: CostBreakdown) -> List[list]:
    bad = {v.vehicle for v in cb.violations if v.vehicle is not None}
    rows = []
    for k, vc in enumerate(cb.per_vehicle, start=1):
        rows.append([label, str(k), vc.load_factor * 100, vc.transport_cost, vc.penalty_cost,
                     vc.transport_cost + vc.penalty_cost, vc.duration, vc.distance,
                     "INFEASIBLE" if k in bad else "ok"])
    fleet_capacity = instance.fleet.capacity * len(cb.per_vehicle)
    rows.append([label, "total", sum(vc.load for vc in cb.per_vehicle) / fleet_capacity * 100,
                 cb.total_transport, cb.total_penalty, cb.total,
                 sum(vc.duration for vc in cb.per_vehicle), cb.total_distance,
                 "ok" if cb.feasible else "INFEASIBLE"])
    return rows


def comparison_rows(
    instance: Instance,
    plan_a: RoutePlan,
    plan_b: RoutePlan,
    labels: Tuple[str, str] = ("A", "B"),
) -> List[list]:
    """Rows of (plan, vehicle, load %, transport, penalty, total, minutes, km, status).

    Delta rows hold ``b - a`` per vehicle and for the totals.
    """
    cb_a, cb_b = evaluate(instance, plan_a), evaluate(instance, plan_b)
    rows_a = _rows_for(labels[0], instance, plan_a, cb_a)
    rows_b = _rows_for(labels[1], instance, plan_b, cb_b)
    deltas = []
    for ra, rb in zip(rows_a, rows_b):
        deltas.append(["delta", ra[1]] + [rb[i] - ra[i] for i in range(2, 8)] + [""])
    return rows_a + rows_b + deltas


def render_comparison(
    instance: Instance,
    plan_a: RoutePlan,
    plan_b: RoutePlan,
    labels: Tuple[str, str] = ("A", "B"),
    fmt: str = "text",
) -> str:
    rows = comparison_rows(instance, plan_a, plan_b, labels)
    if fmt == "csv":
        return _csv_text([_COLUMNS] + [[_csv_cell(c) for c in r] for r in rows])
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")

    def cell(i: int, v, delta: bool) -> str:
        if isinstance(v, str):
            return v
        sign = "+" if delta else ""
        if i == 2:
            return f"{v:{sign}.0f}%"
        if i == 6:
            return f"{v:{sign}.0f}"
        return f"{v:{sign}.1f}"

    header = ["plan", "vehicle", "load", f"transport({instance.currency})",
              f"penalty({instance.currency})", f"total({instance.currency})", "duration(min)",
              "mileage(km)", "status"]
    table = [header]
    for r in rows:
        table.append([cell(i, v, r[0] == "delta") for i, v in enumerate(r)])
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = []
    for n, row in enumerate(table):
        lines.append("  ".join(c.ljust(w) if i < 2 or i == 8 else c.rjust(w)
                               for i, (c, w) in enumerate(zip(row, widths))).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _csv_cell(v) -> str:
    return v if isinstance(v, str) else repr(float(v))


def stops_csv(instance: Instance, plan: RoutePlan,
              timelines: Optional[Sequence[RouteTimeline]] = None) -> str:
    if timelines is None:
        timelines = [propagate_times(instance, r) for r in plan.routes]
    rows = [("vehicle", "seq", "store", "arrival_min", "arrival", "early_by", "late_by")]
    for k, tl in enumerate(timelines, start=1):
        for seq, st in enumerate(tl.stops, start=1):
            rows.append((k, seq, st.store_id, repr(st.arrival), format_hhmm(st.arrival),
                         repr(st.early_by), repr(st.late_by)))
    return _csv_text(rows)


def trace_csv(trace) -> str:
    rows = [("generation", "best_cost", "best_total", "best_fitness")]
    rows += [(t.generation, repr(t.best_cost), repr(t.best_total), repr(t.best_fitness))
             for t in trace]
    return _csv_text(rows)


class MissingCoordinates(ValueError):
    pass


def route_svg(instance: Instance, plan: RoutePlan, title: str = "", size: int = 480,
              margin: int = 40) -> str:
    """Standalone SVG: depot as a square, stores as labeled circles, one polyline per used vehicle."""
    if instance.coords is None:
        raise MissingCoordinates("instance has no COORDS section; route geometry unavailable")
    xs = [p[0] for p in instance.coords]
    ys = [p[1] for p in instance.coords]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    scale = (size - 2 * margin) / span

    def px(node: int) -> Tuple[float, float]:
        x, y = instance.coords[node]
        return (round(margin + (x - min(xs)) * scale, 2),
                round(size - margin - (y - min(ys)) * scale, 2))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{margin}" y="{margin // 2}" font-size="14">{escape(title)}</text>')
    for k, route in enumerate(plan.routes, start=1):
        if not route:
            continue
        color = PALETTE[(k - 1) % len(PALETTE)]
        pts = " ".join(f"{x},{y}" for x, y in map(px, (0,) + tuple(route) + (0,)))
        out.append(f'<polyline class="route" data-vehicle="{k}" points="{pts}" fill="none" '
                   f'stroke="{color}" stroke-width="2"/>')
        lx, ly = px(route[0])
        out.append(f'<text class="route-label" x="{lx}" y="{ly - 12}" font-size="11" '
                   f'fill="{color}">vehicle {k}</text>')
    x0, y0 = px(0)
    out.append(f'<rect class="depot" x="{x0 - 7}" y="{y0 - 7}" width="14" height="14" fill="black"/>')
    out.append(f'<text x="{x0 + 9}" y="{y0 + 4}" font-size="12">DC</text>')
    for sid in range(1, instance.n_stores + 1):
        x, y = px(sid)
        out.append(f'<circle class="store" data-store="{sid}" cx="{x}" cy="{y}" r="5" '
                   f'fill="white" stroke="black"/>')
        out.append(f'<text class="store-label" x="{x + 7}" y="{y + 4}" font-size="11">{sid}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_route_geometry(
    instance: Instance,
    plan: RoutePlan,
    timelines: Optional[Sequence[RouteTimeline]] = None,
    title: str = "",
) -> Tuple[Optional[str], str]:
    """Return ``(svg or None, stops csv)``; the SVG is None without coordinates."""
    stops = stops_csv(instance, plan, timelines)
    try:
        svg = route_svg(instance, plan, title)
    except MissingCoordinates:
        svg = None
    return svg, stops


def summary_text(instance: Instance, plan: RoutePlan, cb: CostBreakdown) -> str:
    cur = instance.currency
    lines = [f"instance {instance.name}: {instance.n_stores} stores, "
             f"{instance.fleet.vehicle_count} vehicles"]
    for k, (route, vc) in enumerate(zip(plan.routes, cb.per_vehicle), start=1):
        stops = " ".join(map(str, route)) or "(unused)"
        lines.append(
            f"vehicle {k}: 0 {stops} 0 | load {vc.load:g} t ({vc.load_factor:.0%}) | "
            f"{vc.distance:.1f} km | {vc.duration:.0f} min | transport {vc.transport_cost:.1f} "
            f"{cur} | penalty {vc.penalty_cost:.1f} {cur}" + ("" if vc.feasible else " | INFEASIBLE")
        )
    lines.append(f"transport {cb.total_transport:.1f} {cur}, penalty {cb.total_penalty:.1f} {cur}, "
                 f"total {cb.total:.1f} {cur}")
    lines.append("feasible" if cb.feasible else "INFEASIBLE")
    lines.extend(f"  violation: {v.message}" for v in cb.violations)
    return "\n".join(lines) + "\n"
