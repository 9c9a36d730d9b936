import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from mlpareto.network import build_network

TRIANGLES = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def two_triangles_bridge():
    return build_network([TRIANGLES + [(2, 3)]], 6)


@pytest.fixture
def two_triangles_two_layers():
    # layer 0 bridged at (2,3), layer 1 bridged at (0,5)
    return build_network([TRIANGLES + [(2, 3)], TRIANGLES + [(0, 5)]], 6)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@st.composite
def graphs(draw, max_p=10, layers=1, min_p=2):
    p = draw(st.integers(min_p, max_p))
    pairs = [(i, j) for i in range(p) for j in range(i + 1, p)]
    edge_lists = [draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
                  for _ in range(layers)]
    return build_network(edge_lists, p)


def random_network(rng, p, layers=2, density=None):
    out = []
    for _ in range(layers):
        d = rng.uniform(0.1, 0.6) if density is None else density
        upper = np.triu(rng.random((p, p)) < d, k=1)
        i, j = np.nonzero(upper)
        out.append(list(zip(i.tolist(), j.tolist())))
    return build_network(out, p)


_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(cid, title): exit criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    cid, title = marker.args
    failed = call.excinfo is not None
    _ACCEPTANCE[cid] = (title, "FAIL" if failed else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_ACCEPTANCE, key=lambda c: int(c[2:])):
        title, status = _ACCEPTANCE[cid]
        terminalreporter.write_line(f"{status} {cid}: {title}")
