import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hosim import Graph, PlantedSpec  # noqa: E402

# Reconstruction of the worked example graph behind the frozen diffusion
# vectors: a community of two bridged triangles {2,3,4} + {9,10,11}, an
# attachment node 1 carrying three leaves, and a second attachment node 8
# carrying a dense 4-clique.
FIG_EDGES = [
    (1, 2), (1, 5), (1, 6), (1, 7),
    (2, 3), (2, 4), (3, 4), (3, 9), (4, 9), (9, 10), (9, 11), (10, 11),
    (8, 4), (8, 9), (8, 12), (8, 13), (8, 14), (8, 15),
    (12, 13), (12, 14), (12, 15), (13, 14), (13, 15), (14, 15),
]
FIG_COMMUNITY = frozenset({2, 3, 4, 9, 10, 11})

# published 4-step diffusion rows for the graph above, seed node 1
PUBLISHED_ARW = {1: 0.000, 2: 0.262, 3: 0.141, 4: 0.141,
                 5: 0.152, 6: 0.152, 7: 0.152}
PUBLISHED_LRW = {1: 0.419, 2: 0.138, 3: 0.049, 4: 0.049,
                 5: 0.115, 6: 0.115, 7: 0.115}
PUBLISHED_PPR = {1: 0.712, 2: 0.045, 3: 0.114, 4: 0.114,
                 5: 0.005, 6: 0.005, 7: 0.005}
PUBLISHED_COMMUNITY_SCORES = (0.544, 0.392)

# exact ARW masses on the reconstruction (hand-derived fractions)
EXACT_ARW = {2: 227 / 864, 3: 61 / 432, 4: 61 / 432,
             5: 131 / 864, 6: 131 / 864, 7: 131 / 864}


@pytest.fixture
def fig_graph():
    return Graph.from_edges(FIG_EDGES)


def benchmark_spec(seed: int) -> PlantedSpec:
    """The calibrated two-community overlap benchmark instance."""
    return PlantedSpec.chain([25, 25], p_in=0.35, p_out=0.01, overlap=1,
                             seed=seed, core_skew=0.9, overlap_degree=9)


def triangle() -> Graph:
    return Graph.from_edges([(0, 1), (0, 2), (1, 2)])
