"""Cost and feasibility of route plans.

Arrival times chain directly: a vehicle reaching a store early starts unloading
at once and pays the early penalty, there is no waiting term. Constraint
breaches are returned as data so infeasible plans can still be priced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .model import CostBreakdown, Instance, RoutePlan, VehicleCost, Violation

# absorbs float noise in summed demands such as 0.3 + 0.5 + ... == 2.0
CAPACITY_EPS = 1e-9
DISTANCE_EPS = 1e-9


@dataclass(frozen=True)
class Stop:
    store_id: int
    arrival: float
    service_start: float
    departure: float
    early_by: float
    late_by: float


@dataclass(frozen=True)
class RouteTimeline:
    stops: Tuple[Stop, ...]
    return_time: float


def propagate_times(instance: Instance, route: Sequence[int]) -> RouteTimeline:
    t = float(instance.depot_open)
    prev = 0
    stops = []
    for sid in route:
        store = instance.store(sid)
        arrival = t + instance.travel_time(prev, sid)
        departure = arrival + store.handling_time
        stops.append(
            Stop(
                store_id=sid,
                arrival=arrival,
                service_start=arrival,
                departure=departure,
                early_by=max(store.accept_earliest - arrival, 0.0),
                late_by=max(arrival - store.accept_latest, 0.0),
            )
        )
        t = departure
        prev = sid
    if not stops:
        return RouteTimeline((), float(instance.depot_open))
    return RouteTimeline(tuple(stops), t + instance.travel_time(prev, 0))


def route_distance(instance: Instance, route: Sequence[int]) -> float:
    """Driven km including both depot legs, summed leg by leg in route order."""
    if not route:
        return 0.0
    d = instance.distances
    total = 0.0
    prev = 0
    for sid in route:
        total += d[prev][sid]
        prev = sid
    return total + d[prev][0]


def route_load(instance: Instance, route: Iterable[int]) -> float:
    return math.fsum(instance.store(sid).demand for sid in route)


def timeline_penalty(instance: Instance, timeline: RouteTimeline) -> float:
    m1 = instance.coeffs.early_penalty
    m2 = instance.coeffs.late_penalty
    total = 0.0
    for stop in timeline.stops:
        total += m1 * stop.early_by + m2 * stop.late_by
    return total


def transport_cost(instance: Instance, plan: RoutePlan) -> float:
    total = 0.0
    for route in plan.routes:
        total += instance.coeffs.per_km * route_distance(instance, route)
    return total


def penalty_cost(instance: Instance, timelines: Sequence[RouteTimeline]) -> float:
    total = 0.0
    for tl in timelines:
        total += timeline_penalty(instance, tl)
    return total


def check_constraints(instance: Instance, plan: RoutePlan) -> List[Violation]:
    """Every broken plan constraint: visitation, fleet size, load and range."""
    out: List[Violation] = []
    n = instance.n_stores
    fleet = instance.fleet

    if len(plan.routes) != fleet.vehicle_count:
        out.append(
            Violation(
                "structural", None, None, 1.0, float(fleet.vehicle_count),
                f"plan has {len(plan.routes)} routes, fleet has {fleet.vehicle_count} vehicles",
            )
        )

    seen = {}
    for k, route in enumerate(plan.routes, start=1):
        for sid in route:
            if sid == 0:
                out.append(Violation(
                    "structural", k, 0, 1.0, None,
                    f"vehicle {k}: depot visited mid-route",
                ))
            elif not 1 <= sid <= n:
                out.append(Violation("unknown", k, sid, 1.0, None, f"vehicle {k}: unknown store {sid}"))
            elif sid in seen:
                out.append(Violation(
                    "duplicate", k, sid, 1.0, None,
                    f"store {sid} visited more than once (vehicles {seen[sid]} and {k});"
                    " each store must be served exactly once",
                ))
            else:
                seen[sid] = k
    for sid in range(1, n + 1):
        if sid not in seen:
            out.append(Violation(
                "missing", None, sid, 1.0, None,
                f"store {sid} is not served; each store must be served exactly once",
            ))

    for k, route in enumerate(plan.routes, start=1):
        valid = [sid for sid in route if 1 <= sid <= n]
        load = route_load(instance, valid)
        if load > fleet.capacity + CAPACITY_EPS:
            out.append(Violation(
                "capacity", k, None, load - fleet.capacity, fleet.capacity,
                f"vehicle {k}: load {load:g} t exceeds capacity {fleet.capacity:g} t"
                f" ({load / fleet.capacity:.0%})",
            ))
        if len(valid) == len(route):
            dist = route_distance(instance, route)
            if dist > fleet.max_route_distance + DISTANCE_EPS:
                out.append(Violation(
                    "range", k, None, dist - fleet.max_route_distance, fleet.max_route_distance,
                    f"vehicle {k}: route {dist:g} km exceeds range {fleet.max_route_distance:g} km",
                ))
    return out


def vehicle_cost(instance: Instance, route: Sequence[int]) -> VehicleCost:
    """Per-vehicle figures for one route (assumes known store ids)."""
    fleet = instance.fleet
    dist = route_distance(instance, route)
    tl = propagate_times(instance, route)
    load = route_load(instance, route)
    return VehicleCost(
        transport_cost=instance.coeffs.per_km * dist,
        penalty_cost=timeline_penalty(instance, tl),
        distance=dist,
        duration=tl.return_time - instance.depot_open,
        load=load,
        load_factor=load / fleet.capacity,
        feasible=(
            load <= fleet.capacity + CAPACITY_EPS
            and dist <= fleet.max_route_distance + DISTANCE_EPS
        ),
    )


def assemble(per_vehicle: Sequence[VehicleCost], violations: Sequence[Violation]) -> CostBreakdown:
    total_transport = 0.0
    total_penalty = 0.0
    for v in per_vehicle:
        total_transport += v.transport_cost
        total_penalty += v.penalty_cost
    return CostBreakdown(
        per_vehicle=tuple(per_vehicle),
        total_transport=total_transport,
        total_penalty=total_penalty,
        total=total_transport + total_penalty,
        feasible=not violations,
        violations=tuple(violations),
    )


def evaluate(instance: Instance, plan: RoutePlan) -> CostBreakdown:
    violations = check_constraints(instance, plan)
    unknown = [v for v in violations if v.kind in ("unknown", "structural") and v.store is not None]
    if unknown:
        raise ValueError("cannot price plan: " + "; ".join(v.message for v in unknown))
    return assemble([vehicle_cost(instance, r) for r in plan.routes], violations)


def penalized_cost(instance: Instance, breakdown: CostBreakdown) -> float:
    """Total cost plus the big-M surcharge the GA uses to rank infeasible plans."""
    if breakdown.feasible:
        return breakdown.total
    return breakdown.total + instance.coeffs.infeasibility_weight * breakdown.violation_score
