import pytest

from gainbalance.graphcore import Graph, build_named, parse_graph_spec


def named(tag: str) -> Graph:
    return build_named(parse_graph_spec(tag))


@pytest.fixture
def w4():
    return named("W4")


@pytest.fixture
def c332():
    return named("C3(3,3,2)")


@pytest.fixture
def g2c4():
    return named("2C4")


@pytest.fixture
def k4dd():
    return named("K4dd")


def triangle() -> Graph:
    return Graph({"e1": ("a", "b"), "e2": ("b", "c"), "e3": ("c", "a")})
