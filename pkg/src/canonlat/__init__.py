"""Exact computations for reflection groups of canonical type."""

from .symbol import Symbol, classify, parse_symbol, reduce, epsilon_one_equivalent
from .lattice import build_lattice, CanonicalLattice

__all__ = ["Symbol", "classify", "parse_symbol", "reduce", "epsilon_one_equivalent",
           "build_lattice", "CanonicalLattice"]
