"""Configuration file for pytest containing customizations and fixtures.

In VSCode, Code Coverage is recorded in config.xml. Delete this file to reset reporting.

See https://stackoverflow.com/questions/34466027/in-pytest-what-is-the-use-of-conftest-py-files
"""

from __future__ import annotations

import numpy as np
import pytest

from renyirange.core.entropy import ProbVector

from .const import ORDER_PAIRS


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for randomized property tests."""
    return np.random.Generator(np.random.PCG64(20240417))


@pytest.fixture(params=ORDER_PAIRS, ids=lambda pair: f"{pair[0]}-{pair[1]}")
def order_pair(request: pytest.FixtureRequest) -> tuple[float, float]:
    """Pair of increasing orders."""
    return request.param  # type: ignore[no-any-return]


@pytest.fixture
def random_distributions(rng: np.random.Generator) -> list[ProbVector]:
    """Random distributions on 2 to 7 letters, some with zero entries."""
    distributions = []
    for n in range(2, 8):
        for _ in range(5):
            probs = rng.dirichlet(np.ones(n))
            if n > 3:
                probs[rng.integers(n)] = 0.0
                probs /= probs.sum()
            distributions.append(ProbVector(probs))
    return distributions
