"""Ordinary and perfected polynomial rings over a finite base field.

A perfected polynomial is stored at a *level* ``m``: it is an ordinary
polynomial in ``x^(1/p^m)``, so exponents are numerators over ``p^m``.  The
stored level is always the least one that works.

One-variable rings over a prime field use dense numpy arrays (the hot path
for Witt arithmetic); everything else uses sparse term tuples.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from . import dense
from .base import NotAPthPower, NotInvertible, Ring
from .fields import BaseField, FiniteField, PrimeField


class DensePP:
    __slots__ = ("level", "arr", "_hash")

    def __init__(self, level: int, arr: np.ndarray):
        self.level = level
        self.arr = arr
        self._hash = None

    def __eq__(self, other):
        return (isinstance(other, DensePP) and self.level == other.level
                and len(self.arr) == len(other.arr) and bool(np.array_equal(self.arr, other.arr)))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.level, self.arr.tobytes()))
        return self._hash

    def __repr__(self):
        return f"DensePP({self.level}, {self.arr.tolist()})"


class SparsePP:
    """``terms`` is a sorted tuple of ``(exponent numerators, coeff code)``."""

    __slots__ = ("level", "terms")

    def __init__(self, level: int, terms: tuple):
        self.level = level
        self.terms = terms

    def __eq__(self, other):
        return isinstance(other, SparsePP) and self.level == other.level and self.terms == other.terms

    def __hash__(self):
        return hash((self.level, self.terms))

    def __repr__(self):
        return f"SparsePP({self.level}, {self.terms})"


def _fmt_exp(e: Fraction) -> str:
    if e.denominator == 1:
        return "" if e == 1 else f"^{e.numerator}"
    return f"^({e.numerator}/{e.denominator})"


def _fmt_coeff(base: BaseField, c: int) -> str:
    s = base.format(c)
    return f"({s})" if "+" in s else s


def format_terms(base: BaseField, names: Sequence[str], terms) -> str:
    """``terms``: iterable of ``(tuple of Fractions, code)``, printed descending."""
    parts = []
    for exps, c in sorted(terms, key=lambda t: t[0], reverse=True):
        mono = "*".join(f"{v}{_fmt_exp(e)}" for v, e in zip(names, exps) if e)
        cs = _fmt_coeff(base, c)
        if not mono:
            parts.append(cs)
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{cs}*{mono}")
    return "+".join(parts) if parts else "0"


# generic sparse term arithmetic (dict: exponent tuple -> code) ------------

def _sp_add(base, a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        s = base.add(out.get(k, 0), c)
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _sp_mul(base, a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            s = base.add(out.get(k, 0), base.mul(ca, cb))
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def _sp_scale_exps(a: dict, f: int) -> dict:
    return {tuple(e * f for e in k): c for k, c in a.items()}


class _PolyCommon(Ring):
    base: BaseField
    variables: tuple[str, ...]

    def _check_names(self, base, variables):
        if not isinstance(base, BaseField):
            raise TypeError("polynomial base must be a finite field")
        variables = tuple(variables)
        if not variables or len(set(variables)) != len(variables):
            raise ValueError("need distinct variable names")
        reserved = {"t"} if isinstance(base, FiniteField) else set()
        for v in variables:
            if not v.isidentifier() or v in reserved or v in ("p", "teich", "frob", "versch"):
                raise ValueError(f"bad variable name {v!r}")
        return base, variables


class PlainPoly(_PolyCommon):
    """Ordinary polynomials; not perfect, so p-th roots can fail."""

    perfect = False
    domain = True

    def __init__(self, base: BaseField, variables: Sequence[str]):
        self.base, self.variables = self._check_names(base, variables)
        self.char = base.char
        self.nvars = len(self.variables)

    def key(self):
        return ("plainpoly", self.base.key(), self.variables)

    @property
    def descriptor(self) -> str:
        return f"plainpoly:{self.base.descriptor}:{','.join(self.variables)}"

    def _freeze(self, d: dict) -> tuple:
        return tuple(sorted(d.items()))

    def zero(self):
        return ()

    def one(self):
        return (((0,) * self.nvars, 1),)

    def from_int(self, m):
        c = self.base.from_int(m)
        return (((0,) * self.nvars, c),) if c else ()

    def const(self, code: int):
        return (((0,) * self.nvars, code),) if code else ()

    def var(self, name: str):
        i = self.variables.index(name)
        return ((tuple(1 if j == i else 0 for j in range(self.nvars)), 1),)

    def add(self, a, b):
        return self._freeze(_sp_add(self.base, dict(a), dict(b)))

    def neg(self, a):
        return tuple((k, self.base.neg(c)) for k, c in a)

    def mul(self, a, b):
        return self._freeze(_sp_mul(self.base, dict(a), dict(b)))

    def scale(self, a, c):
        return self._freeze({k: self.base.scale(v, c) for k, v in a if self.base.scale(v, c)})

    def inv(self, a):
        if len(a) == 1 and not any(a[0][0]):
            return self.const(self.base.inv(a[0][1]))
        raise NotInvertible("only nonzero constants are invertible")

    def pow(self, a, e):
        return self.char_p_pow(a, e) if e >= 0 else super().pow(a, e)

    def frobenius(self, a):
        p = self.char
        return tuple((tuple(x * p for x in k), self.base.frobenius(c)) for k, c in a)

    def pth_root(self, a):
        p = self.char
        out = []
        for k, c in a:
            if any(x % p for x in k):
                raise NotAPthPower(f"{self.format(a)} is not a p-th power in {self.descriptor}")
            out.append((tuple(x // p for x in k), self.base.pth_root(c)))
        return tuple(out)

    def terms(self, a):
        return [(tuple(Fraction(x) for x in k), c) for k, c in a]

    def monomial(self, exps: Sequence[Fraction], code: int):
        if any(Fraction(e).denominator != 1 or e < 0 for e in exps):
            raise NotAPthPower("ordinary polynomials only take nonnegative integer exponents")
        return self.const(code) if not code else ((tuple(int(e) for e in exps), code),)

    def format(self, a):
        return format_terms(self.base, self.variables, self.terms(a))

    def random_payload(self, rng, max_level, max_degree):
        d: dict = {}
        for _ in range(rng.randint(1, 3)):
            k = tuple(rng.randint(0, max_degree) for _ in range(self.nvars))
            d = _sp_add(self.base, d, {k: self.base.random_nonzero(rng)})
        return self._freeze(d)


class PerfPoly(_PolyCommon):
    """The perfection ``base[x_1..x_d]^perf``."""

    perfect = True
    domain = True

    def __new__(cls, base: BaseField, variables: Sequence[str]):
        if cls is PerfPoly:
            variables = tuple(variables)
            cls = _DensePerfPoly if isinstance(base, PrimeField) and len(variables) == 1 \
                else _SparsePerfPoly
        return super().__new__(cls)

    def __init__(self, base: BaseField, variables: Sequence[str]):
        self.base, self.variables = self._check_names(base, variables)
        self.char = self.p = base.char
        self.nvars = len(self.variables)

    def __getnewargs__(self):
        return (self.base, self.variables)

    def key(self):
        return ("perfpoly", self.base.key(), self.variables)

    @property
    def descriptor(self) -> str:
        return f"perfpoly:{self.base.descriptor}:{','.join(self.variables)}"

    def pow(self, a, e):
        return self.char_p_pow(a, e) if e >= 0 else super().pow(a, e)

    def level(self, a) -> int:
        return a.level

    def format(self, a):
        return format_terms(self.base, self.variables, self.terms(a))

    def random_payload(self, rng, max_level, max_degree):
        p = self.p
        level = rng.randint(0, max_level)
        scale = p ** level
        acc = self.zero()
        for _ in range(rng.randint(1, 3)):
            exps = tuple(Fraction(rng.randint(0, max_degree * scale), scale) for _ in range(self.nvars))
            acc = self.add(acc, self.monomial(exps, self.base.random_nonzero(rng)))
        return acc

    def is_constant(self, a) -> bool:
        return all(not any(e) for e, _ in self.terms(a))

    def in_plain_subring(self, a) -> bool:
        return self.level(a) == 0

    # one-variable helpers used by the fraction field -------------------
    def _require_univariate(self):
        if self.nvars != 1:
            raise ValueError("operation needs a one-variable ring")

    def evaluate_at(self, a, point: int) -> int:
        """Image under the base-field homomorphism sending ``x`` to ``point``."""
        self._require_univariate()
        F = self.base
        acc = 0
        root_cache: dict[int, int] = {}
        for exps, c in self.terms(a):
            e = exps[0]
            m = _plog(e.denominator, self.p)
            r = root_cache.get(m)
            if r is None:
                r = point
                for _ in range(m):
                    r = F.pth_root(r)
                root_cache[m] = r
            acc = F.add(acc, F.mul(c, F.pow(r, e.numerator)))
        return acc


def _plog(d: int, p: int) -> int:
    m = 0
    while d > 1:
        d //= p
        m += 1
    return m


class _DensePerfPoly(PerfPoly):
    def _norm(self, level: int, arr: np.ndarray) -> DensePP:
        p = self.p
        if not len(arr):
            return DensePP(0, dense.empty())
        while level and dense.divisible_stride(arr, p):
            arr = arr[::p]
            level -= 1
        return DensePP(level, arr)

    def _at(self, a: DensePP, level: int) -> np.ndarray:
        return dense.upsample(a.arr, self.p ** (level - a.level))

    def zero(self):
        return DensePP(0, dense.empty())

    def one(self):
        return DensePP(0, dense.const(1, self.p))

    def from_int(self, m):
        return DensePP(0, dense.const(m, self.p))

    def const(self, code):
        return DensePP(0, dense.const(code, self.p))

    def var(self, name):
        self.variables.index(name)
        return DensePP(0, np.array([0, 1], dtype=np.int64))

    def monomial(self, exps, code):
        e = Fraction(exps[0])
        if e < 0:
            raise ValueError("negative exponent in a polynomial ring")
        code %= self.p
        if not code:
            return self.zero()
        m = _plog(e.denominator, self.p)
        if self.p ** m != e.denominator:
            raise ValueError(f"exponent denominator {e.denominator} is not a power of {self.p}")
        arr = np.zeros(e.numerator + 1, dtype=np.int64)
        arr[-1] = code
        return DensePP(m, arr)

    def terms(self, a):
        den = self.p ** a.level
        return [((Fraction(int(k), den),), int(a.arr[k])) for k in np.flatnonzero(a.arr)]

    def add(self, a, b):
        if not len(a.arr):
            return b
        if not len(b.arr):
            return a
        m = max(a.level, b.level)
        return self._norm(m, dense.add(self._at(a, m), self._at(b, m), self.p))

    def neg(self, a):
        return DensePP(a.level, dense.neg(a.arr, self.p))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not len(a.arr) or not len(b.arr):
            return self.zero()
        m = max(a.level, b.level)
        return self._norm(m, dense.mul(self._at(a, m), self._at(b, m), self.p))

    def scale(self, a, c):
        return self._norm(a.level, dense.scale(a.arr, c, self.p))

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return not len(a.arr)

    def inv(self, a):
        if len(a.arr) == 1:
            return DensePP(0, dense.const(pow(int(a.arr[0]), -1, self.p), self.p))
        raise NotInvertible("only nonzero constants are invertible")

    def frobenius(self, a):
        if a.level:
            return DensePP(a.level - 1, a.arr)
        return DensePP(0, dense.upsample(a.arr, self.p))

    def pth_root(self, a):
        if not len(a.arr):
            return a
        return self._norm(a.level + 1, a.arr)

    # level-m ordinary polynomials -----------------------------------------
    def to_level(self, a, m):
        return self._at(a, m)

    def from_level(self, m, arr):
        return self._norm(m, dense.trim(arr))

    def lp_gcd(self, a, b):
        return dense.gcd(a, b, self.p)

    def lp_exact_div(self, a, b):
        return dense.exact_div(a, b, self.p)

    def lp_divides(self, b, a):
        return not len(dense.divmod_(a, b, self.p)[1])

    def lp_lead(self, a):
        return int(a[-1])

    def lp_scale(self, a, c):
        return dense.scale(a, c, self.p)

    def lp_mul(self, a, b):
        return dense.mul(a, b, self.p)

    def lp_is_one(self, a):
        return len(a) == 1 and a[0] == 1

    # fast structure-polynomial evaluation -----------------------------------
    def run_plan(self, plan, values):
        """Evaluate at one common level with un-reduced accumulation.

        Values stay at their own level, seen from the common level ``m`` as
        arrays with stride ``p^(m - level)``; p-power exponents only grow the
        stride, so products are taken on the compressed arrays.
        """
        p = self.p
        live = [v for v in values if v is not None and len(v.arr)]
        if not live:
            return plan.run_generic(self, values)
        m = max(v.level for v in live)
        arrs = [None if (v is None or not len(v.arr)) else (p ** (m - v.level), v.arr)
                for v in values]
        pw_cache: dict = {}

        def power(v, e):
            got = pw_cache.get((v, e))
            if got is None:
                e0 = e
                stride, base = arrs[v]
                got = (1 << 62, dense.const(1, p))
                j = 1
                while e:
                    e, d = divmod(e, p)
                    if d:
                        got = dense.strided_mul(got, (stride * j, dense.power(base, d, p)), p)
                    j *= p
                if got[0] == 1 << 62:
                    got = (1, got[1])
                pw_cache[(v, e0)] = got
            return got

        acc = plan.run_dense(arrs, power, p)
        return self._norm(m, dense.trim(acc % p))


class _SparsePerfPoly(PerfPoly):
    def _norm(self, level: int, d: dict) -> SparsePP:
        p = self.p
        if not d:
            return SparsePP(0, ())
        while level and all(not (x % p) for k in d for x in k):
            d = {tuple(x // p for x in k): c for k, c in d.items()}
            level -= 1
        return SparsePP(level, tuple(sorted(d.items())))

    def _at(self, a: SparsePP, level: int) -> dict:
        f = self.p ** (level - a.level)
        d = dict(a.terms)
        return d if f == 1 else _sp_scale_exps(d, f)

    def zero(self):
        return SparsePP(0, ())

    def one(self):
        return self.const(1)

    def from_int(self, m):
        return self.const(self.base.from_int(m))

    def const(self, code):
        return SparsePP(0, (((0,) * self.nvars, code),)) if code else SparsePP(0, ())

    def var(self, name):
        i = self.variables.index(name)
        return SparsePP(0, ((tuple(1 if j == i else 0 for j in range(self.nvars)), 1),))

    def monomial(self, exps, code):
        if not code:
            return self.zero()
        exps = [Fraction(e) for e in exps]
        if any(e < 0 for e in exps):
            raise ValueError("negative exponent in a polynomial ring")
        m = 0
        for e in exps:
            k = _plog(e.denominator, self.p)
            if self.p ** k != e.denominator:
                raise ValueError(f"exponent denominator {e.denominator} is not a power of {self.p}")
            m = max(m, k)
        key = tuple(int(e * self.p ** m) for e in exps)
        return self._norm(m, {key: code})

    def terms(self, a):
        den = self.p ** a.level
        return [(tuple(Fraction(x, den) for x in k), c) for k, c in a.terms]

    def add(self, a, b):
        m = max(a.level, b.level)
        return self._norm(m, _sp_add(self.base, self._at(a, m), self._at(b, m)))

    def neg(self, a):
        return SparsePP(a.level, tuple((k, self.base.neg(c)) for k, c in a.terms))

    def mul(self, a, b):
        if not a.terms or not b.terms:
            return self.zero()
        m = max(a.level, b.level)
        return self._norm(m, _sp_mul(self.base, self._at(a, m), self._at(b, m)))

    def scale(self, a, c):
        return self._norm(a.level, {k: self.base.scale(v, c) for k, v in a.terms if self.base.scale(v, c)})

    def is_zero(self, a):
        return not a.terms

    def inv(self, a):
        if len(a.terms) == 1 and not any(a.terms[0][0]):
            return self.const(self.base.inv(a.terms[0][1]))
        raise NotInvertible("only nonzero constants are invertible")

    def frobenius(self, a):
        F = self.base
        if a.level:
            return SparsePP(a.level - 1, tuple((k, F.frobenius(c)) for k, c in a.terms))
        return SparsePP(0, tuple(sorted((tuple(x * self.p for x in k), F.frobenius(c))
                                        for k, c in a.terms)))

    def pth_root(self, a):
        F = self.base
        return self._norm(a.level + 1, {k: F.pth_root(c) for k, c in a.terms})

    # level-m ordinary polynomials as coefficient lists (one variable) ----
    def to_level(self, a, m):
        self._require_univariate()
        d = self._at(a, m)
        if not d:
            return []
        out = [0] * (max(k[0] for k in d) + 1)
        for k, c in d.items():
            out[k[0]] = c
        return out

    def from_level(self, m, lst):
        return self._norm(m, {(i,): c for i, c in enumerate(lst) if c})

    def _trim(self, a):
        while a and not a[-1]:
            a.pop()
        return a

    def _divmod(self, a, b):
        F = self.base
        if not b:
            raise NotInvertible("polynomial division by zero")
        a = list(a)
        db = len(b) - 1
        inv_lead = F.inv(b[-1])
        q = [0] * max(0, len(a) - db)
        for k in range(len(a) - 1, db - 1, -1):
            c = F.mul(a[k], inv_lead)
            if c:
                q[k - db] = c
                for j in range(db + 1):
                    a[k - db + j] = F.sub(a[k - db + j], F.mul(c, b[j]))
        return self._trim(q), self._trim(a[:db])

    def lp_gcd(self, a, b):
        a, b = self._trim(list(a)), self._trim(list(b))
        while b:
            a, b = b, self._divmod(a, b)[1]
        if not a:
            return a
        return self.lp_scale(a, None, lead_inverse=True)

    def lp_exact_div(self, a, b):
        q, r = self._divmod(a, b)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def lp_divides(self, b, a):
        return not self._divmod(a, b)[1]

    def lp_lead(self, a):
        return a[-1]

    def lp_scale(self, a, c, lead_inverse=False):
        F = self.base
        if lead_inverse:
            c = F.inv(a[-1])
        return self._trim([F.mul(x, c) for x in a])

    def lp_mul(self, a, b):
        F = self.base
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return self._trim(out)

    def lp_is_one(self, a):
        return a == [1]
