import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sociogram.graphcore import Edge, Sociogram  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def graph(pairs, vertices=(), dedup="collapse_pairs") -> Sociogram:
    """Sociogram from (source, target) tuples or 'ab'-style strings."""
    return Sociogram([Edge(u, v) for u, v in pairs], vertices=vertices, dedup=dedup)


@pytest.fixture
def make_graph():
    return graph


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
