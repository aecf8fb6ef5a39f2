"""Configreader specific pytest setup."""
from __future__ import annotations

import pytest

from renyirange.config.configreader import ConfigReader
from tests.const import TEST_CONF_PATH


@pytest.fixture
def configreader() -> ConfigReader:
    """Fixture for a configreader initialized with the full test configuration."""
    return ConfigReader(TEST_CONF_PATH)
