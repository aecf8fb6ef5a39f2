"""Init the commandline tests."""
