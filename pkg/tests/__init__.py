"""Init file for tests module."""
