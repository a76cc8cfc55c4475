"""Truncated p-typical Witt vectors over computable perfect rings."""

from .perfrings import parse_element, parse_ring
from .wittcore import (WittVec, from_representation, p_order, parse_witt, project, teichmuller,
                       verschiebung, witt_frobenius, witt_from_integer, witt_representation)
from .wittpoly import ghost_polynomial, structure_polynomials

__all__ = [
    "WittVec", "from_representation", "ghost_polynomial", "p_order", "parse_element",
    "parse_ring", "parse_witt", "project", "structure_polynomials", "teichmuller",
    "verschiebung", "witt_frobenius", "witt_from_integer", "witt_representation",
]
