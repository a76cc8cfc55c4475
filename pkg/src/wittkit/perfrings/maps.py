"""Named ring homomorphisms between supported coefficient rings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .base import Ring, RingMismatch, RingValue
from .fields import BaseField, FiniteField, PrimeField
from .fractions import PerfFrac
from .polys import PerfPoly


class UnsupportedMap(ValueError):
    """No homomorphism of the requested kind between these rings."""


@dataclass(frozen=True)
class RingMap:
    name: str
    source: Ring
    target: Ring
    _apply: Callable

    def __call__(self, a: RingValue) -> RingValue:
        if a.ring != self.source:
            raise RingMismatch(f"{self.name} expects {self.source}, got {a.ring}")
        return RingValue(self.target, self._apply(a.payload))

    def apply_payload(self, payload):
        return self._apply(payload)

    def __str__(self) -> str:
        return self.name


def field_inclusion(source: BaseField, target: BaseField) -> RingMap:
    """F_p into F_q (constants), or the identity of a field."""
    if source == target:
        return RingMap(f"id:{source.descriptor}", source, target, lambda a: a)
    if isinstance(source, PrimeField) and isinstance(target, FiniteField) and source.p == target.p:
        # constant c has code c in base-p digit coding
        return RingMap(f"incl:{source.descriptor}->{target.descriptor}", source, target, lambda a: a)
    raise UnsupportedMap(f"no supported inclusion {source} -> {target}")


def constant_inclusion(target: PerfPoly) -> RingMap:
    base = target.base
    return RingMap(f"const:{base.descriptor}->{target.descriptor}", base, target, target.const)


def fraction_inclusion(source: PerfPoly) -> RingMap:
    target = PerfFrac(source.base, source.variables)
    return RingMap(f"frac:{source.descriptor}", source, target, target.from_poly)


def frobenius_map(ring: Ring) -> RingMap:
    if not ring.char:
        raise UnsupportedMap("Frobenius needs characteristic p")
    return RingMap(f"frob:{ring.descriptor}", ring, ring, ring.frobenius)


def evaluation_map(source: PerfPoly, point: int) -> RingMap:
    """``x -> point`` for a one-variable perfected ring, onto its base field."""
    if not isinstance(source, PerfPoly) or source.nvars != 1:
        raise UnsupportedMap("evaluation needs a one-variable perfected polynomial ring")
    base = source.base
    if not 0 <= point < base.q:
        raise UnsupportedMap(f"{point} is not an element of {base}")
    return RingMap(f"eval:{source.descriptor}@{base.format(point)}", source, base,
                   lambda a: source.evaluate_at(a, point))


def supported_maps(ring: Ring) -> list[RingMap]:
    """Every named map out of ``ring`` that this module builds by default."""
    out: list[RingMap] = []
    if ring.char:
        out.append(frobenius_map(ring))
    if isinstance(ring, PrimeField):
        out.append(field_inclusion(ring, FiniteField(ring.p, 2)))
        out.append(constant_inclusion(PerfPoly(ring, ("x",))))
    elif isinstance(ring, FiniteField):
        out.append(constant_inclusion(PerfPoly(ring, ("x",))))
    elif isinstance(ring, PerfPoly):
        if ring.nvars == 1:
            out.append(fraction_inclusion(ring))
            for point in range(min(ring.base.q, 3)):
                out.append(evaluation_map(ring, point))
    return out
