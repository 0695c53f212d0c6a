"""Random instances for experiments and the GA-vs-oracle suite."""

from __future__ import annotations

import math

from .model import CostCoefficients, Fleet, Instance, Store, validate_instance
from .rng import Xoshiro256


def random_instance(
    n_stores: int,
    n_vehicles: int = 2,
    seed: int = 0,
    tightness: int = 60,
    area: float = 30.0,
    capacity: float = 2.0,
    speed: float = 60.0,
    depot_open: int = 360,
    per_km: float = 1.8,
    early_penalty: float = 0.5,
    late_penalty: float = 1.0,
) -> Instance:
    """Uniform stores in an ``area`` x ``area`` km square around a central depot.

    Distances are Euclidean rounded to 0.1 km, demands uniform on
    ``[0.1, capacity / 2]`` rounded to 0.1 t, handling one minute per 1/60 t.
    Each acceptable window contains the store's direct arrival time from the
    depot, widened on both sides by up to ``tightness`` minutes.
    """
    if n_stores < 0 or n_vehicles < 1:
        raise ValueError("need n_stores >= 0 and n_vehicles >= 1")
    if tightness < 0 or not area > 0 or not speed > 0:
        raise ValueError("need tightness >= 0, area > 0 and speed > 0")
    if not capacity >= 0.2:
        raise ValueError("capacity must be at least 0.2 t so demands fit in [0.1, capacity/2]")

    rng = Xoshiro256(seed)
    pts = [(area / 2, area / 2)] + [
        (round(rng.uniform(0, area), 1), round(rng.uniform(0, area), 1)) for _ in range(n_stores)
    ]
    size = n_stores + 1
    dist = [[0.0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            d = round(math.dist(pts[i], pts[j]), 1)
            dist[i][j] = dist[j][i] = d

    stores = []
    for sid in range(1, size):
        demand = max(0.1, round(rng.uniform(0.1, capacity / 2), 1))
        direct = depot_open + dist[0][sid] / speed * 60.0
        earliest = max(0, math.floor(direct) - rng.below(tightness + 1))
        latest = min(24 * 60 - 1, math.ceil(direct) + rng.below(tightness + 1))
        if latest <= earliest:
            latest = earliest + 1
        stores.append(Store(sid, demand, float(round(demand * 60)), earliest, latest))

    max_distance = float(math.ceil(3 * area))
    bound = per_km * n_vehicles * max_distance + max(early_penalty, late_penalty) * 1440 * n_stores
    weight = 10.0 ** (math.ceil(math.log10(max(bound, 1.0))) + 1)
    inst = Instance(
        stores=tuple(stores),
        fleet=Fleet(n_vehicles, capacity, max_distance, speed),
        coeffs=CostCoefficients(per_km, early_penalty, late_penalty, weight),
        distances=tuple(tuple(r) for r in dist),
        depot_open=depot_open,
        name=f"random-n{n_stores}-k{n_vehicles}-s{seed}",
        coords=tuple(pts),
    )
    problems = validate_instance(inst)
    assert not problems, problems
    return inst
