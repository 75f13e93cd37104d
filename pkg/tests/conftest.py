import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import degreewalk as dw

# one graph matching the big synthetic benchmark: 1e5 nodes, tree growth,
# degree+0.5 attachment (tail exponent target 2.5)
PA_BENCH = dw.PAConfig(n=100_000, edges_per_node=1, attractiveness=0.5, seed=7)


@pytest.fixture
def star4():
    return dw.Graph.from_edges(np.array([[0, 1], [0, 2], [0, 3]]), n=4)


@pytest.fixture
def triangle():
    return dw.ingest_edge_list(["0 1", "1 2", "2 0"])


@pytest.fixture(scope="session")
def pa_graph():
    return dw.generate_pa(PA_BENCH)
