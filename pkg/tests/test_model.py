import math
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freshroute.generate import random_instance
from freshroute.model import RoutePlan, travel_time, validate_instance


def test_travel_time_from_table(paper):
    assert travel_time(paper, 2, 1) == 1.0
    assert travel_time(paper, 5, 1) == 24.0
    assert travel_time(paper, 3, 3) == 0.0


def test_travel_time_out_of_range(paper):
    with pytest.raises(IndexError):
        travel_time(paper, 0, 9)
    with pytest.raises(IndexError):
        travel_time(paper, -1, 2)


def test_paper_instance_is_valid(paper):
    assert validate_instance(paper) == []


def test_demand_sums(paper):
    demand = {s.id: s.demand for s in paper.stores}
    assert math.fsum(demand.values()) == pytest.approx(3.4, abs=1e-12)
    assert math.fsum(demand[i] for i in (4, 6, 7, 5)) == pytest.approx(2.2, abs=1e-12)
    assert math.fsum(demand[i] for i in (4, 6, 7, 5)) > paper.fleet.capacity
    assert math.fsum(demand[i] for i in (4, 1, 2, 3, 8)) == pytest.approx(1.8, abs=1e-12)
    assert math.fsum(demand[i] for i in (5, 7, 6)) == pytest.approx(1.6, abs=1e-12)


def test_asymmetric_matrix_reported(paper):
    d = [list(r) for r in paper.distances]
    d[1][2] = 3.0
    problems = validate_instance(replace(paper, distances=d))
    assert len(problems) == 1
    assert "asymmetric [1][2]" in problems[0]


def test_unservable_store_reported(paper):
    stores = list(paper.stores)
    stores[0] = replace(stores[0], demand=2.5)
    problems = validate_instance(replace(paper, stores=stores))
    assert len(problems) == 1
    assert "store 1" in problems[0] and "unservable" in problems[0]


def test_other_invariants_reported(paper):
    stores = list(paper.stores)
    stores[2] = replace(stores[2], accept_earliest=800, accept_latest=700)
    d = [list(r) for r in paper.distances]
    d[4][4] = 1.0
    problems = validate_instance(replace(paper, stores=stores, distances=d))
    assert any("store 3" in p and "window" in p for p in problems)
    assert any("diagonal [4][4]" in p for p in problems)


def test_infeasibility_weight_must_dominate(paper):
    weak = replace(paper, coeffs=replace(paper.coeffs, infeasibility_weight=100.0))
    assert any("infeasibility_weight" in p for p in validate_instance(weak))


def test_canonical_orders_by_first_store():
    plan = RoutePlan.of([5, 7, 6], [], [4, 1, 2])
    assert plan.canonical() == RoutePlan.of([4, 1, 2], [5, 7, 6], [])


@settings(max_examples=30, deadline=None)
@given(n=st.integers(0, 9), seed=st.integers(0, 10_000))
def test_generated_instances_are_valid_and_symmetric(n, seed):
    inst = random_instance(n, 2, seed=seed)
    assert validate_instance(inst) == []
    for i in range(n + 1):
        for j in range(n + 1):
            assert travel_time(inst, i, j) == travel_time(inst, j, i)
