"""Init file for tests/unit/verify module."""
