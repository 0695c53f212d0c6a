"""Genetic algorithm over giant-tour chromosomes.

A chromosome is a permutation of store ids plus K-1 cut positions that split it
into one segment per vehicle; it renders in the depot-delimited string form
``0|2 1 4 5|7 8 6 3|0``. Fitness is ``1 / (1 + cost)`` where cost carries a
big-M surcharge for capacity or range overruns (infeasible chromosomes are
penalized, never repaired).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

from .evaluator import assemble, check_constraints, evaluate, penalized_cost, vehicle_cost
from .model import CostBreakdown, Instance, RoutePlan, validate_instance
from .rng import Xoshiro256

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Chromosome:
    perm: Tuple[int, ...]
    cuts: Tuple[int, ...]  # sorted, each in 0..len(perm)

    def __post_init__(self) -> None:
        object.__setattr__(self, "perm", tuple(self.perm))
        object.__setattr__(self, "cuts", tuple(self.cuts))

    def segments(self) -> List[Tuple[int, ...]]:
        bounds = (0,) + self.cuts + (len(self.perm),)
        return [self.perm[bounds[i]:bounds[i + 1]] for i in range(len(bounds) - 1)]

    def is_valid(self, n_stores: int, n_vehicles: int) -> bool:
        return (
            sorted(self.perm) == list(range(1, n_stores + 1))
            and len(self.cuts) == n_vehicles - 1
            and all(0 <= c <= len(self.perm) for c in self.cuts)
            and list(self.cuts) == sorted(self.cuts)
        )

    def __str__(self) -> str:
        return "0|" + "|".join(" ".join(map(str, seg)) for seg in self.segments()) + "|0"

    @classmethod
    def parse(cls, text: str) -> "Chromosome":
        """Read ``0|2 1 4|5 3|0``; the compact ``0214053 0`` form needs N < 10."""
        text = text.strip()
        if "|" in text:
            parts = text.split("|")
            if parts[0].strip() != "0" or parts[-1].strip() != "0":
                raise ValueError(f"chromosome must start and end at the depot: {text!r}")
            segs = [[int(tok) for tok in p.split()] for p in parts[1:-1]]
        else:
            digits = [int(ch) for ch in text if not ch.isspace()]
            if len(digits) < 2 or digits[0] != 0 or digits[-1] != 0:
                raise ValueError(f"chromosome must start and end at the depot: {text!r}")
            segs = [[]]
            for g in digits[1:-1]:
                if g == 0:
                    segs.append([])
                else:
                    segs[-1].append(g)
        return encode(RoutePlan(tuple(tuple(s) for s in segs)))


def decode(chromosome: Chromosome) -> RoutePlan:
    return RoutePlan(tuple(chromosome.segments()))


def encode(plan: RoutePlan) -> Chromosome:
    perm: List[int] = []
    cuts: List[int] = []
    for k, route in enumerate(plan.routes):
        if k:
            cuts.append(len(perm))
        perm.extend(route)
    return Chromosome(tuple(perm), tuple(cuts))


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 10
    crossover_rate: float = 0.7
    mutation_rate: float = 0.1
    inversion_rate: float = 0.1
    max_generations: int = 100
    stall_generations: int = 50
    rng_seed: int = 1
    elitism_count: int = 1

    def __post_init__(self) -> None:
        for name in ("crossover_rate", "mutation_rate", "inversion_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if not 1 <= self.elitism_count < self.population_size:
            raise ValueError("elitism_count must be >= 1 and < population_size")
        if self.max_generations < 0 or self.stall_generations < 1:
            raise ValueError("max_generations must be >= 0 and stall_generations >= 1")


@dataclass(frozen=True)
class TraceEntry:
    generation: int
    best_fitness: float
    best_cost: float  # penalized; equals best_total once the best is feasible
    best_total: float


@dataclass(frozen=True)
class SolveReport:
    best_plan: RoutePlan
    best_cost: CostBreakdown
    best_chromosome: Chromosome
    trace: Tuple[TraceEntry, ...]
    generations_run: int
    converged_at: int
    seed: int = 0


class InstanceError(ValueError):
    def __init__(self, problems: Sequence[str]):
        super().__init__("invalid instance:\n  " + "\n  ".join(problems))
        self.problems = list(problems)


# -- operators ---------------------------------------------------------------

def random_chromosome(n_stores: int, n_vehicles: int, rng: Xoshiro256) -> Chromosome:
    perm = list(range(1, n_stores + 1))
    rng.shuffle(perm)
    cuts = sorted(rng.below(n_stores + 1) for _ in range(n_vehicles - 1))
    return Chromosome(tuple(perm), tuple(cuts))


def initialize_population(instance: Instance, config: GaConfig, rng: Xoshiro256) -> List[Chromosome]:
    n, k = instance.n_stores, instance.fleet.vehicle_count
    return [random_chromosome(n, k, rng) for _ in range(config.population_size)]


def _slice_bounds(n: int, rng) -> Tuple[int, int]:
    a = rng.below(n)
    b = rng.below(n)
    return min(a, b), max(a, b) + 1


def order_crossover(keep: Sequence[int], fill: Sequence[int], start: int, stop: int) -> Tuple[int, ...]:
    """Keep ``keep[start:stop]`` in place; fill other positions in ``fill`` order."""
    kept = set(keep[start:stop])
    rest = [g for g in fill if g not in kept]
    return tuple(rest[:start]) + tuple(keep[start:stop]) + tuple(rest[start:])


def crossover(parent_a: Chromosome, parent_b: Chromosome, rng) -> Tuple[Chromosome, Chromosome]:
    n = len(parent_a.perm)
    if n < 2:
        return parent_a, parent_b
    start, stop = _slice_bounds(n, rng)
    child_a = Chromosome(order_crossover(parent_a.perm, parent_b.perm, start, stop), parent_a.cuts)
    child_b = Chromosome(order_crossover(parent_b.perm, parent_a.perm, start, stop), parent_b.cuts)
    return child_a, child_b


def mutate(chromosome: Chromosome, rng, rate: float) -> Chromosome:
    """Swap two distinct store positions with probability ``rate``."""
    n = len(chromosome.perm)
    if n < 2 or not rng.random() < rate:
        return chromosome
    i = rng.below(n)
    j = rng.below(n - 1)
    if j >= i:
        j += 1
    perm = list(chromosome.perm)
    perm[i], perm[j] = perm[j], perm[i]
    return Chromosome(tuple(perm), chromosome.cuts)


def reverse_slice(chromosome: Chromosome, start: int, stop: int) -> Chromosome:
    perm = list(chromosome.perm)
    perm[start:stop] = perm[start:stop][::-1]
    return Chromosome(tuple(perm), chromosome.cuts)


def invert(chromosome: Chromosome, rng, rate: float) -> Chromosome:
    n = len(chromosome.perm)
    if n < 2 or not rng.random() < rate:
        return chromosome
    start, stop = _slice_bounds(n, rng)
    return reverse_slice(chromosome, start, stop)


# -- fitness -----------------------------------------------------------------

class _Pricer:
    """Memoizes per-route figures; a plan's cost is assembled in vehicle order."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self._routes = {}

    def breakdown(self, plan: RoutePlan) -> CostBreakdown:
        per_vehicle = []
        for route in plan.routes:
            vc = self._routes.get(route)
            if vc is None:
                vc = vehicle_cost(self.instance, route)
                self._routes[route] = vc
            per_vehicle.append(vc)
        if all(vc.feasible for vc in per_vehicle):
            violations = []
        else:
            violations = check_constraints(self.instance, plan)
        return assemble(per_vehicle, violations)


def internal_fitness(instance: Instance, chromosome: Chromosome, _pricer: Optional[_Pricer] = None) -> float:
    pricer = _pricer or _Pricer(instance)
    return 1.0 / (1.0 + penalized_cost(instance, pricer.breakdown(decode(chromosome))))


def _roulette(fitness: Sequence[float], total: float, rng) -> int:
    r = rng.random() * total
    acc = 0.0
    for i, f in enumerate(fitness):
        acc += f
        if r < acc:
            return i
    return len(fitness) - 1


# -- main loop ---------------------------------------------------------------

def solve(instance: Instance, config: GaConfig = GaConfig()) -> SolveReport:
    problems = validate_instance(instance)
    if problems:
        raise InstanceError(problems)

    rng = Xoshiro256(config.rng_seed)
    pricer = _Pricer(instance)
    n = config.population_size

    def score(pop: List[Chromosome]) -> List[float]:
        return [penalized_cost(instance, pricer.breakdown(decode(c))) for c in pop]

    population = initialize_population(instance, config, rng)
    costs = score(population)

    def best_index(cs: List[float]) -> int:
        return min(range(len(cs)), key=lambda i: cs[i])

    b = best_index(costs)
    best, best_penalized = population[b], costs[b]
    converged_at = 0
    trace = [TraceEntry(0, 1.0 / (1.0 + best_penalized), best_penalized,
                        pricer.breakdown(decode(best)).total)]

    generation = 0
    while generation < config.max_generations and generation - converged_at < config.stall_generations:
        generation += 1
        order = sorted(range(n), key=lambda i: costs[i])
        nxt = [population[i] for i in order[:config.elitism_count]]

        fitness = [1.0 / (1.0 + c) for c in costs]
        total_fit = sum(fitness)
        while len(nxt) < n:
            pa = population[_roulette(fitness, total_fit, rng)]
            pb = population[_roulette(fitness, total_fit, rng)]
            if rng.random() < config.crossover_rate:
                ca, cb = crossover(pa, pb, rng)
            else:
                ca, cb = pa, pb
            for child in (ca, cb):
                child = mutate(child, rng, config.mutation_rate)
                child = invert(child, rng, config.inversion_rate)
                if len(nxt) < n:
                    nxt.append(child)

        population = nxt
        costs = score(population)
        b = best_index(costs)
        if costs[b] < best_penalized:
            best, best_penalized = population[b], costs[b]
            converged_at = generation
        trace.append(TraceEntry(generation, 1.0 / (1.0 + best_penalized), best_penalized,
                                pricer.breakdown(decode(best)).total))

    log.debug("seed %d: %d generations, best %.6f at %d",
              config.rng_seed, generation, best_penalized, converged_at)
    plan = decode(best).canonical()
    return SolveReport(
        best_plan=plan,
        best_cost=evaluate(instance, plan),
        best_chromosome=best,
        trace=tuple(trace),
        generations_run=generation,
        converged_at=converged_at,
        seed=config.rng_seed,
    )


def solve_restarts(instance: Instance, config: GaConfig, restarts: int, workers: int = 1) -> List[SolveReport]:
    """Independent runs with seeds ``rng_seed .. rng_seed + restarts - 1``."""
    configs = [replace(config, rng_seed=config.rng_seed + r) for r in range(restarts)]
    if workers > 1 and restarts > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(solve, [instance] * restarts, configs))
    return [solve(instance, c) for c in configs]


def best_of(reports: Sequence[SolveReport]) -> SolveReport:
    """Lowest penalized cost; earliest seed wins ties."""
    return min(reports, key=lambda r: r.trace[-1].best_cost)
