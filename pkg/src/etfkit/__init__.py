"""Equiangular tight frames, perturbation projectors and spark bounds."""
