import itertools
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from qtedit.graph import Graph  # noqa: E402

EDGE_PROBABILITIES = (0.3, 0.5, 0.7)


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph(n, edges)


def corpus(size: int = 200):
    """Seeded random graphs with 4..7 nodes and every edge probability."""
    out = []
    for i in range(size):
        n = 4 + i % 4
        p = EDGE_PROBABILITIES[(i // 4) % 3]
        out.append((i, random_graph(n, p, 1000 + i)))
    return out


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


@pytest.fixture(scope="session")
def pool4():
    from qtedit.parallel import WorkStealingPool

    with WorkStealingPool(4) as pool:
        yield pool


ACCEPTANCE_LINES: list = []


@pytest.fixture
def report():
    """Record one pass/fail line for an acceptance criterion."""

    def record(criterion: str, passed: bool, detail: str) -> bool:
        line = f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
