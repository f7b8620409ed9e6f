import numpy as np
import pytest

from proxmem import fixtures
from proxmem.memory import hebbian_weights
from proxmem.topology import distance_matrix


@pytest.fixture(scope="session")
def builtin_geometry():
    return fixtures.builtin_geometry()


@pytest.fixture(scope="session")
def builtin_memories():
    return fixtures.builtin_memories()


@pytest.fixture(scope="session")
def builtin_distances(builtin_geometry):
    return distance_matrix(builtin_geometry)


@pytest.fixture(scope="session")
def builtin_weights(builtin_memories):
    return hebbian_weights(builtin_memories)


def random_geometry(rng, n=None, span=9):
    """Distinct integer points, for property tests."""
    from proxmem.topology import NetworkGeometry

    n = n or int(rng.integers(2, 17))
    points = set()
    while len(points) < n:
        points.add(tuple(int(v) for v in rng.integers(0, span + 1, size=3)))
    coords = np.array(sorted(points), dtype=np.int64)
    rng.shuffle(coords)
    return NetworkGeometry(coords=coords)
