import itertools
from collections import Counter
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PinnedRng, tiny_instance
from freshroute.evaluator import evaluate, penalized_cost
from freshroute.ga import (
    Chromosome,
    GaConfig,
    InstanceError,
    crossover,
    decode,
    encode,
    initialize_population,
    internal_fitness,
    invert,
    mutate,
    random_chromosome,
    reverse_slice,
    solve,
)
from freshroute.model import RoutePlan
from freshroute.oracle import iter_plans
from freshroute.rng import Xoshiro256

PAPER_CHROMOSOME = "0|2 1 4 5|7 8 6 3|0"


def test_decode_paper_chromosome():
    c = Chromosome.parse(PAPER_CHROMOSOME)
    assert decode(c) == RoutePlan.of([2, 1, 4, 5], [7, 8, 6, 3])
    assert str(c) == PAPER_CHROMOSOME


def test_compact_form_matches_delimited():
    assert Chromosome.parse("02145078630") == Chromosome.parse(PAPER_CHROMOSOME)


def test_decode_empty_segment():
    assert decode(Chromosome.parse("0||1 2 3|0")) == RoutePlan.of([], [1, 2, 3])


def test_parse_rejects_missing_depot():
    with pytest.raises(ValueError):
        Chromosome.parse("1 2|3|0")


def test_encode_decode_round_trip():
    rng = Xoshiro256(99)
    for _ in range(1000):
        k = 1 + rng.below(4)
        n = rng.below(10)
        c = random_chromosome(n, k, rng)
        plan = decode(c)
        assert decode(encode(plan)) == plan
        assert encode(plan) == c


def test_fitness_of_zero_cost_is_one():
    # a single store at distance 0 inside its window costs nothing
    inst = tiny_instance(windows=((300, 600),), depot_leg=0.0)
    assert internal_fitness(inst, Chromosome((1,), ())) == 1.0


def test_fitness_orders_by_cost(paper):
    a = encode(RoutePlan.of([4, 1, 2, 3, 8], [5, 7, 6]))
    b = encode(RoutePlan.of([1, 2, 3, 8, 4], [5, 6, 7]))
    ca = evaluate(paper, decode(a)).total
    cb = evaluate(paper, decode(b)).total
    assert cb < ca
    assert internal_fitness(paper, b) > internal_fitness(paper, a)
    assert 0 < internal_fitness(paper, a) < 1


def test_infeasible_always_ranks_below_feasible(paper):
    worst_feasible, best_infeasible = 0.0, float("inf")
    for routes in iter_plans(8, 2):
        cb = evaluate(paper, RoutePlan(routes))
        if cb.feasible:
            worst_feasible = max(worst_feasible, penalized_cost(paper, cb))
        elif any(v.kind == "capacity" for v in cb.violations):
            best_infeasible = min(best_infeasible, penalized_cost(paper, cb))
    assert worst_feasible < best_infeasible
    assert 1 / (1 + worst_feasible) > 1 / (1 + best_infeasible)


def test_initial_population_deterministic(paper):
    cfg = GaConfig()
    a = initialize_population(paper, cfg, Xoshiro256(5))
    b = initialize_population(paper, cfg, Xoshiro256(5))
    assert a == b
    assert len(a) == 10
    assert all(c.is_valid(8, 2) for c in a)


def test_separator_placement_is_uniform():
    rng = Xoshiro256(2024)
    hits = Counter()
    samples = 10_000
    for _ in range(samples):
        seg1 = decode(random_chromosome(8, 2, rng)).routes[0]
        hits.update(seg1)
    for store in range(1, 9):
        assert abs(hits[store] / samples - 0.5) <= 0.02


def test_crossover_identical_parents():
    p = Chromosome.parse(PAPER_CHROMOSOME)
    assert crossover(p, p, Xoshiro256(1)) == (p, p)


def test_crossover_keeps_slice_in_place():
    a = Chromosome.parse(PAPER_CHROMOSOME)
    b = Chromosome.parse("0|8 7 6 5|4 3 2 1|0")
    ca, cb = crossover(a, b, PinnedRng(belows=[2, 3]))
    assert ca.perm[2:4] == (4, 5)
    # remaining positions follow b's order: 8 7 6 3 2 1
    assert ca.perm == (8, 7, 4, 5, 6, 3, 2, 1)
    assert ca.cuts == a.cuts
    assert cb.perm[2:4] == (6, 5)
    assert cb.perm == (2, 1, 6, 5, 4, 7, 8, 3)


def test_mutate_rate_zero_is_identity():
    c = Chromosome.parse(PAPER_CHROMOSOME)
    rng = Xoshiro256(3)
    assert all(mutate(c, rng, 0.0) == c for _ in range(100))


def test_mutate_pinned_swap():
    c = Chromosome.parse(PAPER_CHROMOSOME)
    out = mutate(c, PinnedRng(randoms=[0.0], belows=[1, 2]), 1.0)
    assert str(out) == "0|2 5 4 1|7 8 6 3|0"


def test_mutate_rate_one_is_single_transposition():
    rng = Xoshiro256(11)
    for _ in range(1000):
        c = random_chromosome(8, 2, rng)
        m = mutate(c, rng, 1.0)
        diff = [i for i in range(8) if c.perm[i] != m.perm[i]]
        assert len(diff) == 2
        i, j = diff
        assert m.perm[i] == c.perm[j] and m.perm[j] == c.perm[i]
        assert m.cuts == c.cuts


def test_invert_rate_zero_is_identity():
    c = Chromosome.parse(PAPER_CHROMOSOME)
    assert invert(c, Xoshiro256(4), 0.0) == c


def test_reverse_slice_is_involution():
    c = Chromosome.parse(PAPER_CHROMOSOME)
    for start, stop in itertools.combinations(range(9), 2):
        assert reverse_slice(reverse_slice(c, start, stop), start, stop) == c


def test_invert_preserves_multiset():
    rng = Xoshiro256(12)
    for _ in range(1000):
        c = random_chromosome(8, 3, rng)
        out = invert(c, rng, 1.0)
        assert sorted(out.perm) == sorted(c.perm)
        assert out.cuts == c.cuts


@settings(max_examples=200, deadline=None)
@given(n=st.integers(0, 12), k=st.integers(1, 4), seed=st.integers(0, 2**63))
def test_crossover_children_valid(n, k, seed):
    rng = Xoshiro256(seed)
    a, b = random_chromosome(n, k, rng), random_chromosome(n, k, rng)
    for child in crossover(a, b, rng):
        assert child.is_valid(n, k)


def test_solve_one_store():
    inst = tiny_instance(windows=((300, 600),), depot_leg=12.5)
    rep = solve(inst, GaConfig(max_generations=5))
    assert rep.best_plan == RoutePlan.of([1])
    assert rep.best_cost.total == pytest.approx(1.8 * 2 * 12.5)


def test_solve_deterministic(paper):
    cfg = GaConfig(rng_seed=17)
    assert solve(paper, cfg) == solve(paper, cfg)


def test_solve_zero_generations(paper):
    rep = solve(paper, GaConfig(max_generations=0))
    assert rep.generations_run == 0
    assert len(rep.trace) == 1
    assert sorted(s for r in rep.best_plan.routes for s in r) == list(range(1, 9))


def test_solve_trace_monotone(paper):
    for seed in range(5):
        trace = solve(paper, GaConfig(rng_seed=seed)).trace
        costs = [t.best_cost for t in trace]
        assert all(b <= a for a, b in zip(costs, costs[1:]))
        assert [t.generation for t in trace] == list(range(len(trace)))


def test_stall_stops_early(paper):
    rep = solve(paper, GaConfig(max_generations=1000, stall_generations=5))
    assert rep.generations_run == rep.converged_at + 5


def test_solve_refuses_unservable(paper):
    stores = list(paper.stores)
    stores[5] = replace(stores[5], demand=3.0)
    with pytest.raises(InstanceError) as e:
        solve(replace(paper, stores=stores), GaConfig())
    assert any("unservable" in p for p in e.value.problems)


@pytest.mark.parametrize("kwargs", [
    {"crossover_rate": 1.5},
    {"mutation_rate": -0.1},
    {"population_size": 1},
    {"elitism_count": 0},
    {"elitism_count": 10},
])
def test_config_ranges(kwargs):
    with pytest.raises(ValueError):
        GaConfig(**kwargs)


def test_parallel_restarts_match_sequential(paper):
    from freshroute.ga import solve_restarts
    cfg = GaConfig(rng_seed=40, max_generations=20)
    assert solve_restarts(paper, cfg, 3, workers=2) == solve_restarts(paper, cfg, 3)
