"""Rényi entropies and the joint range of two or three of them."""
