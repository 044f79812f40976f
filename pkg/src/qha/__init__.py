"""Exact computations with graded modules over quiver Hecke algebras."""
