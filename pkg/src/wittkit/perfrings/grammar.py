"""Text forms of ring descriptors and ring elements.

Descriptors: ``int``, ``fp:5``, ``fq:2:2:t^2+t+1`` (modulus optional),
``perfpoly:fp:2:x``, ``perffrac:fp:2:x``, ``plainpoly:fp:2:x,y``.

Elements are infix expressions over numbers, the ring's variables and (for
extension fields) the generator ``t``, with ``+ - * /`` and ``^``.  Exponents
may be integers or parenthesized fractions ``x^(3/4)`` whose denominator is a
power of p.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .base import Ring, RingValue
from .fields import FiniteField, Integers, PrimeField
from .fractions import PerfFrac
from .polys import PerfPoly, PlainPoly


class ParseError(ValueError):
    """Text does not match the element or descriptor grammar."""


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            out.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+-*/^(),[]":
                raise ParseError(f"unexpected character {ch!r} at {m.start(3)}")
            out.append(("op", ch, m.start(3)))
        pos = m.end()
    return out


class TokenStream:
    def __init__(self, tokens: list[tuple[str, str, int]], text: str = ""):
        self.toks = tokens
        self.i = 0
        self.text = text

    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else ("eof", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def accept(self, value: str) -> bool:
        kind, val, _ = self.peek()
        if kind == "op" and val == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            kind, val, pos = self.peek()
            raise ParseError(f"expected {value!r} at {pos}, found {val or 'end of input'!r}")

    def at_end(self) -> bool:
        return self.i >= len(self.toks)


class ExprBuilder:
    """Parses ring-element expressions into payloads of ``ring``.

    ``names`` maps symbol names to payloads; ``ring`` must provide
    ``from_int, add, sub, mul, neg, inv, pow`` and optionally ``pth_root``.
    """

    def __init__(self, ring, names: dict, char: int = 0):
        self.ring = ring
        self.names = names
        self.char = char

    def expr(self, ts: TokenStream):
        R = self.ring
        if ts.accept("-"):
            acc = R.neg(self.term(ts))
        else:
            ts.accept("+")
            acc = self.term(ts)
        while True:
            if ts.accept("+"):
                acc = R.add(acc, self.term(ts))
            elif ts.accept("-"):
                acc = R.sub(acc, self.term(ts))
            else:
                return acc

    def term(self, ts: TokenStream):
        R = self.ring
        acc = self.unary(ts)
        while True:
            if ts.accept("*"):
                acc = R.mul(acc, self.unary(ts))
            elif ts.accept("/"):
                acc = R.mul(acc, R.inv(self.unary(ts)))
            else:
                return acc

    def unary(self, ts: TokenStream):
        if ts.accept("-"):
            return self.ring.neg(self.unary(ts))
        return self.power(ts)

    def power(self, ts: TokenStream):
        base = self.atom(ts)
        if ts.accept("^"):
            return self.apply_exponent(base, self.exponent(ts))
        return base

    def exponent(self, ts: TokenStream) -> Fraction:
        if ts.accept("("):
            sign = -1 if ts.accept("-") else 1
            num = self._int(ts)
            den = 1
            if ts.accept("/"):
                den = self._int(ts)
            ts.expect(")")
            if den == 0:
                raise ParseError("zero exponent denominator")
            return Fraction(sign * num, den)
        sign = -1 if ts.accept("-") else 1
        return Fraction(sign * self._int(ts))

    def _int(self, ts: TokenStream) -> int:
        kind, val, pos = ts.next()
        if kind != "num":
            raise ParseError(f"expected an integer at {pos}, found {val or 'end of input'!r}")
        return int(val)

    def apply_exponent(self, base, e: Fraction):
        R = self.ring
        value = base
        den = e.denominator
        while den > 1:
            if not self.char or den % self.char:
                raise ParseError(f"exponent denominator {e.denominator} is not a power of the characteristic")
            value = R.pth_root(value)
            den //= self.char
        return R.pow(value, e.numerator)

    def atom(self, ts: TokenStream):
        kind, val, pos = ts.next()
        if kind == "num":
            return self.ring.from_int(int(val))
        if kind == "name":
            if val not in self.names:
                raise ParseError(f"unknown symbol {val!r} at {pos}")
            return self.names[val]
        if kind == "op" and val == "(":
            inner = self.expr(ts)
            ts.expect(")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r} at {pos}")


def ring_symbols(ring: Ring) -> dict:
    names: dict = {}
    base = getattr(ring, "base", ring)
    if isinstance(base, FiniteField):
        g = base.gen()
        names["t"] = ring.const(g) if ring is not base else g
    for v in getattr(ring, "variables", ()):
        names[v] = ring.var(v)
    return names


def parse_element(ring: Ring, text: str) -> RingValue:
    ts = TokenStream(tokenize(text), text)
    if ts.at_end():
        raise ParseError("empty element")
    builder = ExprBuilder(ring, ring_symbols(ring), ring.char)
    payload = builder.expr(ts)
    if not ts.at_end():
        _, val, pos = ts.peek()
        raise ParseError(f"trailing input {val!r} at {pos}")
    return RingValue(ring, payload)


def format_element(value: RingValue) -> str:
    return value.ring.format(value.payload)


# descriptors ----------------------------------------------------------------

def _parse_field(parts: list[str]):
    if not parts:
        raise ParseError("missing base field")
    try:
        if parts[0] == "fp" and len(parts) == 2:
            return PrimeField(int(parts[1]))
        if parts[0] == "fq" and len(parts) in (3, 4):
            p, e = int(parts[1]), int(parts[2])
            if len(parts) == 3:
                return FiniteField(p, e)
            return FiniteField(p, e, _parse_modulus(parts[3], p, e))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc
    raise ParseError(f"bad base field {':'.join(parts)!r}")


def _parse_modulus(text: str, p: int, e: int) -> tuple[int, ...]:
    coeffs: dict[int, int] = {}

    class _TPoly:
        # payloads are dicts degree -> coefficient
        def from_int(self, m):
            return {0: m % p} if m % p else {}

        def add(self, a, b):
            out = dict(a)
            for k, c in b.items():
                out[k] = (out.get(k, 0) + c) % p
            return {k: c for k, c in out.items() if c}

        def neg(self, a):
            return {k: (-c) % p for k, c in a.items()}

        def sub(self, a, b):
            return self.add(a, self.neg(b))

        def mul(self, a, b):
            out: dict[int, int] = {}
            for i, x in a.items():
                for j, y in b.items():
                    out[i + j] = (out.get(i + j, 0) + x * y) % p
            return {k: c for k, c in out.items() if c}

        def inv(self, a):
            raise ParseError("division inside a modulus")

        def pow(self, a, n):
            if n < 0:
                raise ParseError("negative power inside a modulus")
            out = {0: 1}
            for _ in range(n):
                out = self.mul(out, a)
            return out

    tp = _TPoly()
    ts = TokenStream(tokenize(text), text)
    coeffs = ExprBuilder(tp, {"t": {1: 1}}).expr(ts)
    if not ts.at_end():
        raise ParseError(f"trailing input in modulus {text!r}")
    if max(coeffs, default=0) != e:
        raise ParseError(f"modulus {text!r} does not have degree {e}")
    return tuple(coeffs.get(i, 0) for i in range(e + 1))


@lru_cache(maxsize=None)
def parse_ring(descriptor: str) -> Ring:
    """Parse a ring descriptor; identical strings share one ring object."""
    text = descriptor.strip()
    parts = text.split(":")
    kind = parts[0]
    try:
        if kind == "int" and len(parts) == 1:
            return Integers()
        if kind in ("fp", "fq"):
            return _parse_field(parts)
        if kind in ("perfpoly", "plainpoly", "perffrac"):
            if len(parts) < 4:
                raise ParseError(f"descriptor {text!r} needs a base field and variables")
            base = _parse_field(parts[1:-1])
            names = tuple(v.strip() for v in parts[-1].split(","))
            if kind == "perfpoly":
                return PerfPoly(base, names)
            if kind == "plainpoly":
                return PlainPoly(base, names)
            return PerfFrac(base, names)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown ring descriptor {text!r}")


def format_ring(ring: Ring) -> str:
    return ring.descriptor


Builder = Callable[[str], object]
