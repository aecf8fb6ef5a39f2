"""Init file for tests/unit/configreader module."""
