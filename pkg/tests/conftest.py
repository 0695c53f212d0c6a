import pytest

from freshroute import AFTER_PLAN, BEFORE_PLAN, paper_instance
from freshroute.model import CostCoefficients, Fleet, Instance, Store


@pytest.fixture(scope="session")
def paper():
    return paper_instance()


@pytest.fixture
def before_plan():
    return BEFORE_PLAN


@pytest.fixture
def after_plan():
    return AFTER_PLAN


class PinnedRng:
    """Stands in for Xoshiro256 with queued answers."""

    def __init__(self, randoms=(), belows=()):
        self.randoms = list(randoms)
        self.belows = list(belows)

    def random(self):
        return self.randoms.pop(0)

    def below(self, n):
        v = self.belows.pop(0)
        assert 0 <= v < n
        return v


def tiny_instance(windows=((360, 600),), depot_leg=30.0, m1=0.5, m2=1.0, handling=10.0):
    """One or more stores all ``depot_leg`` km from the depot and 10 km apart."""
    n = len(windows)
    dist = [[0.0] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dist[0][i] = dist[i][0] = depot_leg
        for j in range(1, n + 1):
            if i != j:
                dist[i][j] = 10.0
    stores = tuple(Store(i + 1, 0.5, handling, e, l) for i, (e, l) in enumerate(windows))
    return Instance(
        stores=stores,
        fleet=Fleet(1, 2.0, 500.0, 60.0),
        coeffs=CostCoefficients(1.8, m1, m2, 1e7),
        distances=dist,
    )
