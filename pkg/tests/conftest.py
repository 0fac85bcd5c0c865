import pytest

from src.geometry_core import point
from src.sge import GraphCollection
from src.walk import parse_walk

UVWXY_WALK = "u v^l y^r w^l x^l y^l u^l w^r v"


@pytest.fixture
def uvwxy_walk():
    return parse_walk(UVWXY_WALK)


@pytest.fixture
def uvwxy_embedding():
    return {
        "u": point(0, 0),
        "v": point(4, 0),
        "y": point(2, 3),
        "w": point(4, 2),
        "x": point(5, 4),
    }


@pytest.fixture
def five_cycles():
    names = [f"v{k}" for k in range(5)]
    return GraphCollection.from_edges(
        names,
        [
            ("C1", [("v0", "v1"), ("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v0")]),
            ("C2", [("v0", "v2"), ("v2", "v4"), ("v4", "v1"), ("v1", "v3"), ("v3", "v0")]),
        ],
    )


@pytest.fixture
def five_cycles_embedding():
    return {
        "v0": point(0, 0),
        "v1": point(6, 0),
        "v2": point(3, 1),
        "v3": point(1, 6),
        "v4": point(2, 2),
    }


@pytest.fixture
def convex_pentagon():
    return {
        "v0": point(0, 0),
        "v1": point(4, 0),
        "v2": point(5, 3),
        "v3": point(2, 5),
        "v4": point(-1, 3),
    }
