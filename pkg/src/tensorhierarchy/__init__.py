"""Tensor hierarchies of Lie-Leibniz triples, computed exactly."""
