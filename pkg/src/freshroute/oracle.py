"""Exhaustive optimum for desk-sized instances.

Vehicles are interchangeable, so a plan is a set of at most K non-empty ordered
routes. Each such plan is generated once by placing stores 1..N in turn either
at any position of an existing route or at the head of a new one; the route
holding the lowest store id therefore always comes first. The number of plans
is the sum of Lah numbers L(N, m) for m = 1..min(N, K).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Dict, List, Tuple

from .evaluator import CAPACITY_EPS, DISTANCE_EPS, evaluate, vehicle_cost
from .model import CostBreakdown, Instance, RoutePlan, VehicleCost

DEFAULT_LIMIT = 2_000_000


class EnumerationTooLarge(ValueError):
    def __init__(self, count: int, limit: int):
        super().__init__(f"enumeration needs {count:,} plans, limit is {limit:,}")
        self.count = count
        self.limit = limit


@dataclass(frozen=True)
class OracleResult:
    optimum_plan: RoutePlan
    optimum_cost: CostBreakdown
    plans_enumerated: int
    optimum_is_feasible: bool


def lah(n: int, m: int) -> int:
    if n == m:
        return 1
    if m < 1 or m > n:
        return 0
    return comb(n - 1, m - 1) * factorial(n) // factorial(m)


def plan_count(n_stores: int, n_vehicles: int) -> int:
    if n_stores == 0:
        return 1
    return sum(lah(n_stores, m) for m in range(1, min(n_stores, n_vehicles) + 1))


def iter_plans(n_stores: int, n_vehicles: int):
    """Yield every vehicle-symmetry-reduced plan as a tuple of K routes."""
    routes: List[List[int]] = []

    def place(sid: int):
        if sid > n_stores:
            yield tuple(tuple(r) for r in routes) + ((),) * (n_vehicles - len(routes))
            return
        for r in routes:
            for pos in range(len(r) + 1):
                r.insert(pos, sid)
                yield from place(sid + 1)
                del r[pos]
        if len(routes) < n_vehicles:
            routes.append([sid])
            yield from place(sid + 1)
            routes.pop()

    yield from place(1)


def _overrun_score(instance: Instance, per_vehicle: List[VehicleCost]) -> float:
    # same terms, same order as check_constraints -> CostBreakdown.violation_score
    fleet = instance.fleet
    score = 0.0
    for vc in per_vehicle:
        if vc.load > fleet.capacity + CAPACITY_EPS:
            score += 1.0 + (vc.load - fleet.capacity)
        if vc.distance > fleet.max_route_distance + DISTANCE_EPS:
            score += 1.0 + (vc.distance - fleet.max_route_distance)
    return score


def enumerate_optimum(instance: Instance, limit: int = DEFAULT_LIMIT) -> OracleResult:
    n, k = instance.n_stores, instance.fleet.vehicle_count
    count = plan_count(n, k)
    if count > limit:
        raise EnumerationTooLarge(count, limit)

    memo: Dict[Tuple[int, ...], VehicleCost] = {}
    best_feasible = None  # (total, canonical routes)
    best_infeasible = None  # (score, total, canonical routes)
    seen = 0
    for routes in iter_plans(n, k):
        seen += 1
        per_vehicle = []
        total_transport = 0.0
        total_penalty = 0.0
        ok = True
        for r in routes:
            vc = memo.get(r)
            if vc is None:
                vc = memo[r] = vehicle_cost(instance, r)
            per_vehicle.append(vc)
            total_transport += vc.transport_cost
            total_penalty += vc.penalty_cost
            ok = ok and vc.feasible
        total = total_transport + total_penalty
        if ok:
            if best_feasible is None or total <= best_feasible[0]:
                key = (total, RoutePlan(routes).canonical().routes)
                if best_feasible is None or key < best_feasible:
                    best_feasible = key
        elif best_feasible is None:
            key = (_overrun_score(instance, per_vehicle), total, RoutePlan(routes).canonical().routes)
            if best_infeasible is None or key < best_infeasible:
                best_infeasible = key

    assert seen == count, (seen, count)
    feasible = best_feasible is not None
    routes = best_feasible[1] if feasible else best_infeasible[2]
    plan = RoutePlan(routes)
    return OracleResult(
        optimum_plan=plan,
        optimum_cost=evaluate(instance, plan),
        plans_enumerated=seen,
        optimum_is_feasible=feasible,
    )
