"""Entropy evaluation and the determinant diagnostics behind the joint range."""
