"""Joint range of two and three Rényi entropies."""
