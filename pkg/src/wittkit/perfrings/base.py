"""Ring descriptors and the value wrapper shared by every coefficient ring."""

from __future__ import annotations

import random
from typing import Any, Iterator


class RingMismatch(ValueError):
    """Operands live in different rings."""


class NotAPthPower(ArithmeticError):
    """The element has no p-th root in its ring (the ring is not perfect there)."""


class NotInvertible(ZeroDivisionError):
    """Division by zero or by a non-unit."""


class CharacteristicError(ValueError):
    """Operation needs characteristic p but the ring has characteristic zero."""


class Ring:
    """A computable commutative ring; elements are opaque, hashable payloads.

    Subclasses implement payload arithmetic.  ``RingValue`` is the public face.
    """

    char: int = 0
    perfect: bool = False
    domain: bool = True
    finite: bool = False
    is_field: bool = False

    # identity -----------------------------------------------------------
    def key(self) -> tuple:
        raise NotImplementedError

    @property
    def descriptor(self) -> str:
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        return isinstance(other, Ring) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"<ring {self.descriptor}>"

    def __str__(self) -> str:
        return self.descriptor

    # payload arithmetic ---------------------------------------------------
    def zero(self) -> Any:
        raise NotImplementedError

    def one(self) -> Any:
        raise NotImplementedError

    def from_int(self, m: int) -> Any:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def scale(self, a, c: int):
        return self.mul(a, self.from_int(c))

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero())

    def inv(self, a):
        raise NotInvertible(f"{self.descriptor} has no general inverse")

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def frobenius(self, a):
        if not self.char:
            raise CharacteristicError(f"{self.descriptor} has characteristic zero")
        return self.pow(a, self.char)

    def pth_root(self, a):
        raise NotImplementedError

    def char_p_pow(self, a, e: int):
        """``a**e`` through base-p digits of ``e``, using cheap Frobenius."""
        p = self.char
        if e < 0:
            return self.char_p_pow(self.inv(a), -e)
        result = self.one()
        base = a
        while e:
            e, d = divmod(e, p)
            if d:
                result = self.mul(result, Ring.pow(self, base, d))
            if e:
                base = self.frobenius(base)
        return result

    # plumbing -----------------------------------------------------------
    def format(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        from .grammar import parse_element
        return parse_element(self, text).payload

    def random_payload(self, rng: random.Random, max_level: int, max_degree: int):
        raise NotImplementedError

    def elements(self) -> Iterator[Any]:
        raise TypeError(f"{self.descriptor} is not finite")

    def run_plan(self, plan, values):
        """Evaluate a compiled monomial plan (see ``wittpoly.EvalPlan``)."""
        return plan.run_generic(self, values)

    def value(self, payload) -> "RingValue":
        return RingValue(self, payload)

    def __call__(self, x) -> "RingValue":
        if isinstance(x, RingValue):
            if x.ring != self:
                raise RingMismatch(f"{x.ring} is not {self}")
            return x
        if isinstance(x, int):
            return RingValue(self, self.from_int(x))
        if isinstance(x, str):
            return RingValue(self, self.parse(x))
        raise TypeError(f"cannot convert {type(x).__name__} into {self}")


class RingValue:
    """An element of a :class:`Ring`."""

    __slots__ = ("ring", "payload")

    def __init__(self, ring: Ring, payload):
        self.ring = ring
        self.payload = payload

    def _other(self, other) -> Any:
        if isinstance(other, RingValue):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other.payload
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingValue(self.ring, self.ring.add(self.payload, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingValue(self.ring, self.ring.sub(self.payload, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingValue(self.ring, self.ring.sub(b, self.payload))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingValue(self.ring, self.ring.mul(self.payload, b))

    __rmul__ = __mul__

    def __neg__(self):
        return RingValue(self.ring, self.ring.neg(self.payload))

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingValue(self.ring, self.ring.mul(self.payload, self.ring.inv(b)))

    def __pow__(self, e: int):
        return RingValue(self.ring, self.ring.pow(self.payload, e))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.ring.eq(self.payload, self.ring.from_int(other))
        if not isinstance(other, RingValue):
            return NotImplemented
        return self.ring == other.ring and self.ring.eq(self.payload, other.payload)

    def __hash__(self) -> int:
        return hash((self.ring, self.payload))

    def __bool__(self) -> bool:
        return not self.ring.is_zero(self.payload)

    def inv(self) -> "RingValue":
        return RingValue(self.ring, self.ring.inv(self.payload))

    def frobenius(self) -> "RingValue":
        return RingValue(self.ring, self.ring.frobenius(self.payload))

    def pth_root(self) -> "RingValue":
        return RingValue(self.ring, self.ring.pth_root(self.payload))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.payload)

    def __str__(self) -> str:
        return self.ring.format(self.payload)

    def __repr__(self) -> str:
        return f"RingValue({self.ring.descriptor!r}, {str(self)!r})"


def ring_arith(op: str, a: RingValue, b: RingValue | None = None):
    """Dispatch ``add | mul | neg | eq | inv`` with strict descriptor checks."""
    if op in ("add", "mul", "eq"):
        if b is None:
            raise TypeError(f"{op} needs two operands")
        if a.ring != b.ring:
            raise RingMismatch(f"{a.ring} vs {b.ring}")
    ring = a.ring
    if op == "add":
        return RingValue(ring, ring.add(a.payload, b.payload))
    if op == "mul":
        return RingValue(ring, ring.mul(a.payload, b.payload))
    if op == "eq":
        return ring.eq(a.payload, b.payload)
    if op == "neg":
        return RingValue(ring, ring.neg(a.payload))
    if op == "inv":
        return RingValue(ring, ring.inv(a.payload))
    raise ValueError(f"unknown ring operation {op!r}")


def random_element(ring: Ring, seed: int, size_bound: tuple[int, int] = (2, 2)) -> RingValue:
    """Deterministic pseudo-random element: same arguments, same element."""
    max_level, max_degree = size_bound
    if max_level < 0 or max_degree < 0:
        raise ValueError("size bounds must be nonnegative")
    rng = random.Random(seed)
    return RingValue(ring, ring.random_payload(rng, max_level, max_degree))
