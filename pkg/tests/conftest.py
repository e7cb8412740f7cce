import itertools

import numpy as np
import pytest

from ibmtest.graph import Network

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def cycle(n: int, directed: bool = False) -> Network:
    return Network.from_pairs(n, [(i, (i + 1) % n) for i in range(n)], directed)


def complete(n: int) -> Network:
    return Network.from_pairs(n, itertools.combinations(range(n), 2), False)


def random_signed(rng: np.random.Generator, n: int, symmetric: bool) -> np.ndarray:
    x = rng.integers(-1, 2, size=(n, n))
    if symmetric:
        x = np.triu(x, 1)
        x = x + x.T
    np.fill_diagonal(x, 0)
    return x


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
