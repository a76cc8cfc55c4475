"""Computable coefficient rings: fields, perfected polynomials and fractions."""

from .base import (CharacteristicError, NotAPthPower, NotInvertible, Ring, RingMismatch,
                   RingValue, random_element, ring_arith)
from .fields import FiniteField, Integers, PrimeField, default_modulus, is_irreducible
from .fractions import PerfFrac, normalize_fraction
from .grammar import ParseError, format_element, parse_element, parse_ring
from .maps import (RingMap, UnsupportedMap, constant_inclusion, evaluation_map, field_inclusion,
                   fraction_inclusion, frobenius_map, supported_maps)
from .polys import PerfPoly, PlainPoly


def frobenius(a: RingValue) -> RingValue:
    return a.frobenius()


def pth_root(a: RingValue) -> RingValue:
    return a.pth_root()


def level(a: RingValue) -> int:
    """Least m with every exponent in ``p^-m * Z``; 0 outside perfected rings."""
    lv = getattr(a.ring, "level", None)
    return lv(a.payload) if lv else 0


__all__ = [
    "CharacteristicError", "FiniteField", "Integers", "NotAPthPower", "NotInvertible",
    "ParseError", "PerfFrac", "PerfPoly", "PlainPoly", "PrimeField", "Ring", "RingMap",
    "RingMismatch", "RingValue", "UnsupportedMap", "constant_inclusion", "default_modulus",
    "evaluation_map", "field_inclusion", "format_element", "fraction_inclusion", "frobenius",
    "frobenius_map", "is_irreducible", "level", "normalize_fraction", "parse_element",
    "parse_ring", "pth_root", "random_element", "ring_arith", "supported_maps",
]
