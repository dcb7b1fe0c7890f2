import pytest

from riglab.graphs import Graph
from riglab.models import ErParams, sample_er
from riglab.rng import RngStream


@pytest.fixture(scope="session")
def petersen():
    return Graph.from_edges(10, [
        (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
        (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
        (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
    ])


def random_small_graphs(count, seed, n_lo=4, n_hi=10, densities=(0.2, 0.5, 0.8)):
    """Seeded stream of small ER graphs cycling sizes and densities."""
    out = []
    for i in range(count):
        n = n_lo + i % (n_hi - n_lo + 1)
        q = densities[i % len(densities)]
        out.append(sample_er(ErParams(n, q), RngStream(seed, i)))
    return out
