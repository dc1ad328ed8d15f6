"""Finite fields, Steiner systems, finite planes and strongly regular graphs."""

from .field import FiniteField, factor_prime_power, field_create, is_irreducible, is_prime_power
from .graphs import Graph, SRGParameters, verify_srg
from .steiner import (
    SteinerReport,
    SteinerSystem,
    affine_plane,
    block_intersection_graph,
    plane,
    projective_plane,
    verify_steiner,
)

__all__ = [
    "FiniteField",
    "Graph",
    "SRGParameters",
    "SteinerReport",
    "SteinerSystem",
    "affine_plane",
    "block_intersection_graph",
    "factor_prime_power",
    "field_create",
    "is_irreducible",
    "is_prime_power",
    "plane",
    "projective_plane",
    "verify_srg",
    "verify_steiner",
]
