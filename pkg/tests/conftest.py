# Shared fixtures
# contributors: smlee

# History
# 2026-10-17 | v1.0 - first commit

# Module import
import numpy as np
import pytest
from scipy.spatial.distance import pdist, squareform
from pycoarse.util.spaces import FreeGroup, LatticeGroup, TableGroup, cayley_ball, graph_metric

SEED = 20240517

# Main
@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture(scope="module")
def path3():
    return graph_metric(3, [[0, 1], [1, 2]])


@pytest.fixture(scope="module")
def line4():
    """Z-ball of radius 4 enumerated to radius 8"""
    return cayley_ball(LatticeGroup(1), 4, margin=4)


@pytest.fixture(scope="module")
def free2():
    """F2-ball of radius 2 enumerated to radius 4"""
    return cayley_ball(FreeGroup(2), 2, margin=2)


@pytest.fixture(scope="module")
def cyclic4():
    elements = [0, 1, 2, 3]
    mul = [[(i + j) % 4 for j in elements] for i in elements]
    return TableGroup(elements, mul, [1])


def point_cloud_kernel(rng, n:int, dim:int=3) -> np.ndarray:
    """Squared Euclidean distances of a random point cloud"""
    return squareform(pdist(rng.normal(size=(n, dim)), "sqeuclidean"))


def random_tree_edges(rng, n:int) -> list:
    return [[i, int(rng.integers(0, i))] for i in range(1, n)]


def unit_gram(rng, n:int, rank:int=3, complex_:bool=False) -> np.ndarray:
    """Positive definite kernel with unit diagonal from random unit vectors"""
    X = rng.normal(size=(n, rank))
    if complex_:
        X = X + 1j * rng.normal(size=(n, rank))
    X = X / np.linalg.norm(X, axis=1, keepdims=True)
    K = X @ X.conj().T
    np.fill_diagonal(K, 1.0)
    return K
