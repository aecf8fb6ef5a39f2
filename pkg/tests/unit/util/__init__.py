"""Init file for tests/unit/util module."""
