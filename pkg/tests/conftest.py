import json

import pytest

from stochastic_polytope.enumeration import enumerate_vertices
from stochastic_polytope.performance import get_performance_monitor
from stochastic_polytope.polytope import build_omega_h


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False, help="Run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def reset_performance_monitor():
    get_performance_monitor().reset()
    yield
    get_performance_monitor().reset()


@pytest.fixture(scope="session")
def omega3_vertices():
    """Vertex set of Ω₃, enumerated once per session."""
    return enumerate_vertices(build_omega_h(3))


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON-able object (or raw text) to a file under tmp_path and return its path."""
    def _write(name, content):
        path = tmp_path / name
        path.write_text(content if isinstance(content, str) else json.dumps(content), encoding="utf-8")
        return str(path)

    return _write
