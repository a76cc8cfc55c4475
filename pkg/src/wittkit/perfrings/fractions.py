"""Fraction field of a one-variable perfected polynomial ring.

Values are ``(num, den)`` pairs of perfected polynomials.  Normal form: at
the common level of the pair, ``gcd(num, den) == 1`` in the ordinary
polynomial ring of that level and ``den`` is monic.  Because
``gcd(f(t^p), g(t^p)) = gcd(f, g)(t^p)``, the normal form does not depend on
which common level is used, so structural equality is value equality.
"""

from __future__ import annotations

from typing import Sequence

from .base import NotInvertible, Ring
from .fields import BaseField
from .polys import PerfPoly


class PerfFrac(Ring):
    perfect = True
    domain = True
    is_field = True

    def __init__(self, base: BaseField, variable: str | Sequence[str]):
        if not isinstance(variable, str):
            variable = tuple(variable)
            if len(variable) != 1:
                raise ValueError("perfected fraction fields take exactly one variable")
            variable = variable[0]
        self.poly = PerfPoly(base, (variable,))
        self.base = base
        self.variable = variable
        self.variables = (variable,)
        self.char = self.p = base.char

    def key(self):
        return ("perffrac", self.base.key(), self.variable)

    @property
    def descriptor(self) -> str:
        return f"perffrac:{self.base.descriptor}:{self.variable}"

    # normal form ------------------------------------------------------------
    def normalize(self, num, den):
        P = self.poly
        if P.is_zero(den):
            raise NotInvertible("zero denominator")
        if P.is_zero(num):
            return (P.zero(), P.one())
        m = max(P.level(num), P.level(den))
        n_l = P.to_level(num, m)
        d_l = P.to_level(den, m)
        g = P.lp_gcd(n_l, d_l)
        if not P.lp_is_one(g):
            n_l = P.lp_exact_div(n_l, g)
            d_l = P.lp_exact_div(d_l, g)
        lead = P.lp_lead(d_l)
        if lead != 1:
            c = self.base.inv(lead)
            n_l = P.lp_scale(n_l, c)
            d_l = P.lp_scale(d_l, c)
        return (P.from_level(m, n_l), P.from_level(m, d_l))

    def from_poly(self, a):
        return (a, self.poly.one())

    def numerator(self, a):
        return a[0]

    def denominator(self, a):
        return a[1]

    def in_poly_subring(self, a) -> bool:
        return a[1] == self.poly.one()

    # arithmetic ---------------------------------------------------------------
    def zero(self):
        return (self.poly.zero(), self.poly.one())

    def one(self):
        return (self.poly.one(), self.poly.one())

    def from_int(self, m):
        return (self.poly.from_int(m), self.poly.one())

    def const(self, code):
        return (self.poly.const(code), self.poly.one())

    def var(self, name):
        return (self.poly.var(name), self.poly.one())

    def is_zero(self, a):
        return self.poly.is_zero(a[0])

    def add(self, a, b):
        P = self.poly
        if P.is_zero(a[0]):
            return b
        if P.is_zero(b[0]):
            return a
        if a[1] == b[1]:
            return self.normalize(P.add(a[0], b[0]), a[1])
        return self.normalize(P.add(P.mul(a[0], b[1]), P.mul(b[0], a[1])), P.mul(a[1], b[1]))

    def neg(self, a):
        return (self.poly.neg(a[0]), a[1])

    def mul(self, a, b):
        P = self.poly
        if P.is_zero(a[0]) or P.is_zero(b[0]):
            return self.zero()
        one = P.one()
        if a[1] == one and b[1] == one:
            return (P.mul(a[0], b[0]), one)
        return self.normalize(P.mul(a[0], b[0]), P.mul(a[1], b[1]))

    def scale(self, a, c):
        return (self.poly.scale(a[0], c), a[1]) if c % self.p else self.zero()

    def inv(self, a):
        if self.is_zero(a):
            raise NotInvertible("division by zero in the fraction field")
        return self.normalize(a[1], a[0])

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        # coprime, monic pairs stay so under powers
        return (self.poly.pow(a[0], e), self.poly.pow(a[1], e))

    def frobenius(self, a):
        return (self.poly.frobenius(a[0]), self.poly.frobenius(a[1]))

    def pth_root(self, a):
        return (self.poly.pth_root(a[0]), self.poly.pth_root(a[1]))

    def level(self, a) -> int:
        return max(self.poly.level(a[0]), self.poly.level(a[1]))

    def format(self, a):
        num = self.poly.format(a[0])
        if a[1] == self.poly.one():
            return num
        den = self.poly.format(a[1])
        if "+" in num:
            num = f"({num})"
        if "+" in den or "*" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def random_payload(self, rng, max_level, max_degree):
        P = self.poly
        num = P.random_payload(rng, max_level, max_degree)
        den = P.zero()
        while P.is_zero(den):
            den = P.random_payload(rng, max_level, max_degree)
        return self.normalize(num, den)


def normalize_fraction(num, den):
    """Normalize ``num/den`` for perfected polynomials in one variable."""
    from .base import RingValue, RingMismatch
    if num.ring != den.ring:
        raise RingMismatch(f"{num.ring} vs {den.ring}")
    if not isinstance(num.ring, PerfPoly):
        raise TypeError("normalize_fraction expects perfected polynomials")
    K = PerfFrac(num.ring.base, num.ring.variables)
    return RingValue(K, K.normalize(num.payload, den.payload))
