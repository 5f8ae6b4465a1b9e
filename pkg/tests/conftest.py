from random import Random

import pytest

from sphero.groups import Config, LabeledIsometry, LeafPartition, TreePair


@pytest.fixture
def sym2():
    return Config.make(2, 1, "sym")


@pytest.fixture
def triv2():
    return Config.make(2, 1, "triv")


@pytest.fixture
def sym3():
    return Config.make(3, 1, "sym")


def make_x0(config: Config) -> TreePair:
    """The order-preserving pair {00,01,1} -> {0,10,11} (q=2, one summand)."""
    dom = LeafPartition(1, ((1, (0, 0)), (1, (0, 1)), (1, (1,))))
    cod = LeafPartition(1, ((1, (0,)), (1, (1, 0)), (1, (1, 1))))
    decs = tuple(LabeledIsometry.identity(2) for _ in range(3))
    return TreePair(config, dom, cod, (0, 1, 2), decs)


@pytest.fixture
def x0(triv2):
    return make_x0(triv2)


@pytest.fixture
def rng():
    return Random(20240817)
