"""Domain types for the soft-time-window delivery model.

Node 0 is the distribution center; stores are numbered 1..N. Times of day are
integer minutes since midnight, computed arrival times are floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

MINUTES_PER_DAY = 24 * 60


@dataclass(frozen=True)
class Store:
    id: int
    demand: float
    handling_time: float
    accept_earliest: int
    accept_latest: int
    # display-only; penalties use the acceptable window
    expected_earliest: Optional[int] = None
    expected_latest: Optional[int] = None


@dataclass(frozen=True)
class Fleet:
    vehicle_count: int
    capacity: float
    max_route_distance: float
    speed: float  # km/h


@dataclass(frozen=True)
class CostCoefficients:
    per_km: float
    early_penalty: float
    late_penalty: float
    infeasibility_weight: float


@dataclass(frozen=True)
class Instance:
    stores: Tuple[Store, ...]
    fleet: Fleet
    coeffs: CostCoefficients
    distances: Tuple[Tuple[float, ...], ...]
    depot_open: int = 360
    name: str = "instance"
    currency: str = "CNY"
    coords: Optional[Tuple[Tuple[float, float], ...]] = None
    _minutes: Tuple[Tuple[float, ...], ...] = field(
        init=False, repr=False, compare=False, default=()
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "stores", tuple(self.stores))
        object.__setattr__(
            self, "distances", tuple(tuple(float(x) for x in row) for row in self.distances)
        )
        if self.coords is not None:
            object.__setattr__(
                self, "coords", tuple((float(x), float(y)) for x, y in self.coords)
            )
        speed = self.fleet.speed
        if speed > 0:
            minutes = tuple(tuple(d / speed * 60.0 for d in row) for row in self.distances)
        else:
            minutes = ()
        object.__setattr__(self, "_minutes", minutes)

    @property
    def n_stores(self) -> int:
        return len(self.stores)

    def store(self, store_id: int) -> Store:
        return self.stores[store_id - 1]

    def travel_time(self, i: int, j: int) -> float:
        """Minutes needed to drive from node ``i`` to node ``j`` at fleet speed."""
        n = len(self.distances)
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"node pair ({i}, {j}) outside 0..{n - 1}")
        return self._minutes[i][j]

    def feasible_cost_bound(self) -> float:
        """Upper bound on any plan's cost when no constraint is broken."""
        return (
            self.coeffs.per_km * self.fleet.vehicle_count * self.fleet.max_route_distance
            + max(self.coeffs.early_penalty, self.coeffs.late_penalty)
            * MINUTES_PER_DAY
            * self.n_stores
        )


def travel_time(instance: Instance, i: int, j: int) -> float:
    return instance.travel_time(i, j)


@dataclass(frozen=True)
class RoutePlan:
    """Ordered store sequences, one per vehicle; depot legs are implicit."""

    routes: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "routes", tuple(tuple(r) for r in self.routes))

    @classmethod
    def of(cls, *routes: Sequence[int]) -> "RoutePlan":
        return cls(tuple(tuple(r) for r in routes))

    def canonical(self) -> "RoutePlan":
        """Vehicles are identical, so order routes by first store with empty ones last."""
        nonempty = sorted((r for r in self.routes if r), key=lambda r: r[0])
        empty = [r for r in self.routes if not r]
        return RoutePlan(tuple(nonempty + empty))

    def __str__(self) -> str:
        return " | ".join("0 " + " ".join(map(str, r)) + " 0" if r else "0 0" for r in self.routes)


@dataclass(frozen=True)
class Violation:
    """One broken constraint.

    ``amount`` is the overrun (tons or km) for capacity and range violations and
    1 for structural ones.
    """

    kind: str  # capacity | range | missing | duplicate | unknown | structural
    vehicle: Optional[int]
    store: Optional[int]
    amount: float
    limit: Optional[float]
    message: str

    @property
    def severity(self) -> float:
        # floor of 1 per violation so any infeasibility outweighs every feasible cost
        return 1.0 + self.amount

    @property
    def structural(self) -> bool:
        return self.kind in ("missing", "duplicate", "unknown", "structural")


@dataclass(frozen=True)
class VehicleCost:
    transport_cost: float
    penalty_cost: float
    distance: float
    duration: float
    load: float
    load_factor: float
    feasible: bool = True


@dataclass(frozen=True)
class CostBreakdown:
    per_vehicle: Tuple[VehicleCost, ...]
    total_transport: float
    total_penalty: float
    total: float
    feasible: bool
    violations: Tuple[Violation, ...] = ()

    @property
    def total_distance(self) -> float:
        return sum(v.distance for v in self.per_vehicle)

    @property
    def violation_score(self) -> float:
        return sum(v.severity for v in self.violations)


def validate_instance(instance: Instance) -> list[str]:
    """Describe every broken instance invariant; an empty list means valid."""
    problems: list[str] = []
    fleet, coeffs = instance.fleet, instance.coeffs
    n = instance.n_stores

    if fleet.vehicle_count < 1:
        problems.append(f"fleet: vehicle_count {fleet.vehicle_count} < 1")
    if not fleet.capacity > 0:
        problems.append(f"fleet: capacity {fleet.capacity} must be > 0")
    if not fleet.max_route_distance > 0:
        problems.append(f"fleet: max_route_distance {fleet.max_route_distance} must be > 0")
    if not fleet.speed > 0:
        problems.append(f"fleet: speed {fleet.speed} must be > 0")

    for name in ("per_km", "early_penalty", "late_penalty", "infeasibility_weight"):
        if getattr(coeffs, name) < 0:
            problems.append(f"coeffs: {name} {getattr(coeffs, name)} is negative")

    for pos, s in enumerate(instance.stores, start=1):
        if s.id != pos:
            problems.append(f"store #{pos}: id {s.id} out of sequence (expected {pos})")
        if not s.demand > 0:
            problems.append(f"store {s.id}: demand {s.demand} must be > 0")
        if s.demand > fleet.capacity:
            problems.append(
                f"store {s.id}: demand {s.demand} exceeds vehicle capacity {fleet.capacity}"
                " (unservable)"
            )
        if s.handling_time < 0:
            problems.append(f"store {s.id}: handling_time {s.handling_time} is negative")
        if not s.accept_earliest < s.accept_latest:
            problems.append(
                f"store {s.id}: acceptable window {s.accept_earliest}..{s.accept_latest} is empty"
            )
        if (s.expected_earliest is None) != (s.expected_latest is None):
            problems.append(f"store {s.id}: expected window is half-specified")

    d = instance.distances
    if len(d) != n + 1 or any(len(row) != n + 1 for row in d):
        problems.append(f"matrix: expected {n + 1}x{n + 1} distances")
    else:
        for i in range(n + 1):
            if d[i][i] != 0:
                problems.append(f"matrix: diagonal [{i}][{i}] = {d[i][i]} is not zero")
            for j in range(n + 1):
                if d[i][j] < 0:
                    problems.append(f"matrix: [{i}][{j}] = {d[i][j]} is negative")
            for j in range(i + 1, n + 1):
                if d[i][j] != d[j][i]:
                    problems.append(
                        f"matrix: asymmetric [{i}][{j}] = {d[i][j]} vs [{j}][{i}] = {d[j][i]}"
                    )

    if instance.coords is not None and len(instance.coords) != n + 1:
        problems.append(f"coords: expected {n + 1} nodes, got {len(instance.coords)}")

    if not coeffs.infeasibility_weight > instance.feasible_cost_bound():
        problems.append(
            f"coeffs: infeasibility_weight {coeffs.infeasibility_weight} must exceed "
            f"{instance.feasible_cost_bound()}"
        )
    return problems
