"""Init file for tests/unit/diagram module."""
