"""Sampling oracles for checking the analytic ranges."""
