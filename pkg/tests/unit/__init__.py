"""Init file for tests/unit module."""
