"""Geometric signatures, edge vectors and moves on planar bicoloured networks."""
