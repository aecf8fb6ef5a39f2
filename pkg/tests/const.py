"""Constants for all tests."""
from __future__ import annotations

import math
from pathlib import Path

LOG2 = math.log(2.0)
LOG3 = math.log(3.0)
LOG4 = math.log(4.0)

# order pairs covering the Shannon, generic and min-entropy cases
ORDER_PAIRS = ((1.0, 2.0), (0.5, 2.0), (1.0, math.inf), (2.0, 3.0), (0.5, 0.8))
ORDER_TRIPLES = ((1.0, 2.0, 3.0), (0.5, 2.0, 4.0), (2.0, 3.0, 4.0))

TEST_CONF_PATH = Path(__file__).parent / "unit" / "test_config.yaml"
TEST_CONF_PATH_PARTIAL = Path(__file__).parent / "unit" / "test_config_partial.yaml"
TEST_CONF_PATH_ERROR = Path(__file__).parent / "unit" / "test_config_error.yaml"
TEST_CONF_PATH_BROKEN = Path(__file__).parent / "unit" / "test_config_broken.yaml"
