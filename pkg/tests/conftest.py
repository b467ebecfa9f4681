import numpy as np
import pytest

from metricgraph import GraphPoint, MetricGraph


@pytest.fixture
def theta():
    # two vertices joined by parallel edges of lengths 1, 2, 3
    return MetricGraph(
        vertices=["u", "v"],
        edges=[("e1", "u", "v", 1.0), ("e2", "u", "v", 2.0), ("e3", "u", "v", 3.0)])


@pytest.fixture
def c12():
    # plain circle of circumference 12; p and q are antipodal
    return MetricGraph(
        vertices=["p", "q"],
        edges=[("arc1", "p", "q", 6.0), ("arc2", "p", "q", 6.0)])


@pytest.fixture
def c12_decorated():
    # stem (2) + cycle (12) + tail (2): the worked example for delta bounds
    return MetricGraph(
        vertices=["p", "a", "b", "q"],
        edges=[("stem", "p", "a", 2.0),
               ("c1", "a", "b", 6.0),
               ("c2", "a", "b", 6.0),
               ("tail", "b", "q", 2.0)])


def random_euclidean_metric(rng: np.random.Generator, n: int) -> np.ndarray:
    P = rng.random((n, 3))
    D = np.sqrt(((P[:, None] - P[None]) ** 2).sum(-1))
    np.fill_diagonal(D, 0.0)
    return D


def random_point(G: MetricGraph, rng: np.random.Generator) -> GraphPoint:
    if rng.random() < 0.5:
        return GraphPoint(vertex=G.vertices[int(rng.integers(len(G.vertices)))])
    e = G.edges[int(rng.integers(len(G.edges)))]
    return G.canonical(GraphPoint(edge=e.id, offset=float(rng.uniform(0, e.length))))
