"""Init file for tests/unit/core module."""
