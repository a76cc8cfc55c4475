"""Truncated p-typical Witt vectors W_n(A) and the maps between them."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .config import InvalidConfiguration, require_prime
from .perfrings.base import CharacteristicError, Ring, RingMismatch, RingValue
from .perfrings.fields import Integers
from .perfrings.fractions import PerfFrac
from .perfrings.grammar import ParseError, parse_ring
from .perfrings.maps import RingMap, constant_inclusion
from .perfrings.polys import PerfPoly
from .wittpoly import structure_polynomials


class WittMismatch(RingMismatch):
    """Witt vectors with different (p, n, ring)."""


class WittVec:
    """An element of W_n(A); coordinates are stored as ring payloads."""

    __slots__ = ("p", "n", "ring", "payloads")

    def __init__(self, p: int, n: int, ring: Ring, coords: Iterable):
        require_prime(p)
        if n < 1:
            raise InvalidConfiguration("Witt vectors need length n >= 1")
        if ring.char not in (0, p):
            raise CharacteristicError(f"{ring} has characteristic {ring.char}, not {p}")
        payloads = []
        for c in coords:
            if isinstance(c, RingValue):
                if c.ring != ring:
                    raise RingMismatch(f"coordinate in {c.ring}, expected {ring}")
                payloads.append(c.payload)
            else:
                payloads.append(ring(c).payload if isinstance(c, (int, str)) else c)
        if len(payloads) != n:
            raise ValueError(f"expected {n} coordinates, got {len(payloads)}")
        self.p, self.n, self.ring = p, n, ring
        self.payloads = tuple(payloads)

    @classmethod
    def _raw(cls, p, n, ring, payloads) -> "WittVec":
        obj = object.__new__(cls)
        obj.p, obj.n, obj.ring, obj.payloads = p, n, ring, tuple(payloads)
        return obj

    @property
    def coords(self) -> tuple[RingValue, ...]:
        return tuple(RingValue(self.ring, a) for a in self.payloads)

    def __getitem__(self, i: int) -> RingValue:
        return RingValue(self.ring, self.payloads[i])

    def params(self) -> tuple:
        return (self.p, self.n, self.ring)

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(a) for a in self.payloads)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WittVec):
            return NotImplemented
        return self.params() == other.params() and all(
            self.ring.eq(a, b) for a, b in zip(self.payloads, other.payloads))

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.ring, self.payloads))

    def __add__(self, other):
        return witt_add(self, other)

    def __sub__(self, other):
        return witt_sub(self, other)

    def __mul__(self, other):
        if isinstance(other, int):
            return witt_mul(self, witt_from_integer(other, self.p, self.n, self.ring))
        return witt_mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return witt_neg(self)

    def __pow__(self, e: int):
        return witt_pow(self, e)

    def __str__(self) -> str:
        return format_witt(self)

    def __repr__(self) -> str:
        return f"WittVec({format_witt(self)!r})"


@dataclass(frozen=True)
class WittRepr:
    """Coefficients ``r`` with ``x = sum p^i [r_i]``."""

    p: int
    n: int
    ring: Ring
    coeffs: tuple

    @property
    def values(self) -> tuple[RingValue, ...]:
        return tuple(RingValue(self.ring, r) for r in self.coeffs)

    def __str__(self) -> str:
        return "(" + ", ".join(self.ring.format(r) for r in self.coeffs) + ")"


def _check_same(x: WittVec, y: WittVec) -> None:
    if x.params() != y.params():
        raise WittMismatch(f"W(p={x.p},n={x.n};{x.ring}) vs W(p={y.p},n={y.n};{y.ring})")


def zero(p: int, n: int, ring: Ring) -> WittVec:
    return WittVec._raw(p, n, ring, [ring.zero()] * n)


def one(p: int, n: int, ring: Ring) -> WittVec:
    return WittVec._raw(p, n, ring, [ring.one()] + [ring.zero()] * (n - 1))


# evaluation of structure polynomials ---------------------------------------

def _interleave(xs: Sequence, ys: Sequence | None) -> list:
    out = []
    for k, a in enumerate(xs):
        out.append(a)
        out.append(ys[k] if ys is not None else None)
    return out


def _run(ring: Ring, polys, values: list, n: int, p: int) -> list:
    m = ring.char
    out = []
    for k in range(n):
        plan = polys[k].plan(m)
        out.append(ring.run_plan(plan, values) if m else plan.run_generic(ring, values))
    return out


def _structure_eval(kind: str, x: WittVec, y: WittVec | None, fast: bool = True,
                    exact: bool = False) -> list:
    """Coordinates of x+y (S), x*y (P) or -x (N).

    ``fast=False`` skips the fraction-field shortcut and ``exact=True`` keeps
    integer coefficients; both exist to cross-check the default path.
    """
    ws = structure_polynomials(x.p, x.n)
    polys = {"S": ws.sum_polys, "P": ws.prod_polys, "N": ws.neg_polys}[kind]
    ring = x.ring
    if fast and not exact and isinstance(ring, PerfFrac):
        return _frac_eval(kind, polys, x, y)
    values = _interleave(x.payloads, y.payloads if y is not None else None)
    values = [None if (a is None or ring.is_zero(a)) else a for a in values]
    if exact:
        return [polys[k].plan(0).run_generic(ring, values) for k in range(x.n)]
    return _run(ring, polys, values, x.n, x.p)


def witt_op_reference(kind: str, x: WittVec, y: WittVec | None = None, *,
                      exact: bool = False) -> WittVec:
    """Slow reference for ``kind`` in ``add | mul | neg``: plain structure
    polynomial evaluation in the coefficient ring, no shortcuts."""
    code = {"add": "S", "mul": "P", "neg": "N"}[kind]
    if y is not None:
        _check_same(x, y)
    return WittVec._raw(x.p, x.n, x.ring, _structure_eval(code, x, y, fast=False, exact=exact))


def _pp_gcd(P: PerfPoly, a, b):
    m = max(P.level(a), P.level(b))
    return P.from_level(m, P.lp_gcd(P.to_level(a, m), P.to_level(b, m)))


def _pp_exact_div(P: PerfPoly, a, b):
    m = max(P.level(a), P.level(b))
    return P.from_level(m, P.lp_exact_div(P.to_level(a, m), P.to_level(b, m)))


def _pp_lcm(P: PerfPoly, a, b):
    if a == b or P.eq(b, P.one()):
        return a
    if P.eq(a, P.one()):
        return b
    return _pp_exact_div(P, P.mul(a, b), _pp_gcd(P, a, b))


def _iterate(f, a, times: int):
    for _ in range(times):
        a = f(a)
    return a


def _frac_eval(kind: str, polys, x: WittVec, y: WittVec | None) -> list:
    """Clear denominators with a Teichmuller factor, compute over the
    perfected polynomial ring, then divide back.

    With ``D`` a common multiple of every ``den(x_i)^(1/p^i)``, the vector
    ``[D]x = (x_i D^(p^i))`` has polynomial coordinates.  Structure
    polynomials commute with the scaling: ``[D]x + [D]y = [D](x+y)`` and
    ``[D]x [D]y = [D^2](xy)``.
    """
    K: PerfFrac = x.ring
    P = K.poly
    p, n = x.p, x.n
    vecs = [x] if y is None else [x, y]
    D = P.one()
    for v in vecs:
        for i, (_, den) in enumerate(v.payloads):
            D = _pp_lcm(P, D, _iterate(P.pth_root, den, i))
    D_pows = [D]
    for _ in range(1, n):
        D_pows.append(P.frobenius(D_pows[-1]))

    def scaled(v: WittVec) -> list:
        out = []
        for i, (num, den) in enumerate(v.payloads):
            if P.is_zero(num):
                out.append(None)
            elif P.eq(den, D_pows[i]):
                out.append(num)
            else:
                out.append(P.mul(num, _pp_exact_div(P, D_pows[i], den)))
        return out

    xs = scaled(x)
    ys = scaled(y) if y is not None else None
    values = _interleave(xs, ys)
    coords = _run(P, polys, values, n, p)
    out = []
    for k, c in enumerate(coords):
        den = D_pows[k] if kind != "P" else P.mul(D_pows[k], D_pows[k])
        out.append(K.normalize(c, den) if not P.is_zero(c) else K.zero())
    return out


# ring operations ------------------------------------------------------------

def witt_add(x: WittVec, y: WittVec) -> WittVec:
    _check_same(x, y)
    if x.is_zero():
        return y
    if y.is_zero():
        return x
    return WittVec._raw(x.p, x.n, x.ring, _structure_eval("S", x, y))


def witt_mul(x: WittVec, y: WittVec) -> WittVec:
    _check_same(x, y)
    if x.is_zero() or y.is_zero():
        return zero(x.p, x.n, x.ring)
    return WittVec._raw(x.p, x.n, x.ring, _structure_eval("P", x, y))


def witt_neg(x: WittVec) -> WittVec:
    if x.is_zero():
        return x
    return WittVec._raw(x.p, x.n, x.ring, _structure_eval("N", x, None))


def witt_sub(x: WittVec, y: WittVec) -> WittVec:
    return witt_add(x, witt_neg(y))


def witt_pow(x: WittVec, e: int) -> WittVec:
    if e < 0:
        raise ValueError("negative powers are not defined in W_n(A)")
    result = one(x.p, x.n, x.ring)
    base = x
    while e:
        if e & 1:
            result = witt_mul(result, base)
        e >>= 1
        if e:
            base = witt_mul(base, base)
    return result


def witt_from_integer(m: int, p: int, n: int, ring: Ring) -> WittVec:
    """Image of ``m`` under Z -> W_n(A), by double-and-add over witt_add."""
    if m < 0:
        return witt_neg(witt_from_integer(-m, p, n, ring))
    acc = zero(p, n, ring)
    if m == 0:
        return acc
    u = one(p, n, ring)
    for bit in bin(m)[2:]:
        acc = witt_add(acc, acc)
        if bit == "1":
            acc = witt_add(acc, u)
    return acc


# maps -------------------------------------------------------------------------

def ghost_map(x: WittVec) -> list[int]:
    if not isinstance(x.ring, Integers):
        raise CharacteristicError("ghost components are read over the integers")
    p = x.p
    a = x.payloads
    return [sum(p ** i * a[i] ** (p ** (k - i)) for i in range(k + 1)) for k in range(x.n)]


def project(x: WittVec) -> RingValue:
    return RingValue(x.ring, x.payloads[0])


def teichmuller(a: RingValue, n: int) -> WittVec:
    ring = a.ring
    if not ring.char:
        raise CharacteristicError("Teichmuller lifts need characteristic p")
    return WittVec._raw(ring.char, n, ring, [a.payload] + [ring.zero()] * (n - 1))


def verschiebung(x: WittVec) -> WittVec:
    return WittVec._raw(x.p, x.n, x.ring, (x.ring.zero(),) + x.payloads[:-1])


def witt_frobenius(x: WittVec) -> WittVec:
    if not x.ring.char:
        raise CharacteristicError("Witt-Frobenius is coordinatewise only in characteristic p")
    return WittVec._raw(x.p, x.n, x.ring, [x.ring.frobenius(a) for a in x.payloads])


def witt_map(phi: RingMap, x: WittVec) -> WittVec:
    if phi.source != x.ring:
        raise RingMismatch(f"{phi} starts at {phi.source}, vector lives over {x.ring}")
    if phi.target.char != x.p:
        raise CharacteristicError(f"{phi} does not land in characteristic {x.p}")
    return WittVec._raw(x.p, x.n, phi.target, [phi.apply_payload(a) for a in x.payloads])


def truncate(x: WittVec, m: int) -> WittVec:
    if not 1 <= m <= x.n:
        raise ValueError(f"truncation length {m} not in [1, {x.n}]")
    return WittVec._raw(x.p, m, x.ring, x.payloads[:m])


def witt_representation(x: WittVec) -> WittRepr:
    """``r_i = a_i^(1/p^i)``; NotAPthPower propagates for non-perfect rings."""
    ring = x.ring
    coeffs = []
    for i, a in enumerate(x.payloads):
        coeffs.append(_iterate(ring.pth_root, a, i))
    return WittRepr(x.p, x.n, ring, tuple(coeffs))


def from_representation(r: WittRepr | Sequence, p: int | None = None, n: int | None = None,
                        ring: Ring | None = None) -> WittVec:
    """``sum p^i [r_i]`` computed with Witt arithmetic."""
    if isinstance(r, WittRepr):
        p, n, ring, coeffs = r.p, r.n, r.ring, r.coeffs
    else:
        coeffs = tuple(c.payload if isinstance(c, RingValue) else c for c in r)
    if p is None or n is None or ring is None:
        raise ValueError("p, n and ring are required for a bare coefficient list")
    if len(coeffs) != n:
        raise ValueError(f"expected {n} coefficients")
    acc = zero(p, n, ring)
    p_pow = one(p, n, ring)
    p_vec = witt_from_integer(p, p, n, ring)
    for i, c in enumerate(coeffs):
        if not ring.is_zero(c):
            acc = witt_add(acc, witt_mul(p_pow, teichmuller(RingValue(ring, c), n)))
        if i + 1 < n:
            p_pow = witt_mul(p_pow, p_vec)
    return acc


def p_order(x: WittVec) -> int:
    """Least i with a_i != 0; ``n`` for the zero vector."""
    for i, a in enumerate(x.payloads):
        if not x.ring.is_zero(a):
            return i
    return x.n


def p_power_times(x: WittVec, i: int) -> WittVec:
    return witt_mul(witt_from_integer(x.p ** i, x.p, x.n, x.ring), x)


def divisibility_witness(x: WittVec, i: int) -> WittVec | None:
    """Some y with ``p^i y = x`` or None.

    Perfect rings use the construction ``y_k = a_(k+i)^(1/p^i)``, checked by
    Witt arithmetic; finite rings otherwise fall back to exhaustive search.
    """
    if not 0 <= i <= x.n:
        raise ValueError(f"exponent {i} out of range")
    ring = x.ring
    if ring.perfect:
        if p_order(x) < i:
            return None
        ys = [_iterate(ring.pth_root, x.payloads[k + i], i) for k in range(x.n - i)]
        y = WittVec._raw(x.p, x.n, ring, ys + [ring.zero()] * i)
        if p_power_times(y, i) != x:
            raise AssertionError("divisibility construction failed")
        return y
    return search_divisibility_witness(x, i)


def search_divisibility_witness(x: WittVec, i: int) -> WittVec | None:
    """Exhaustive search for y with ``p^i y = x`` over a finite ring."""
    ring = x.ring
    if not ring.finite:
        raise TypeError(f"witness search needs a finite ring, not {ring}")
    scalar = witt_from_integer(x.p ** i, x.p, x.n, ring)
    for coords in itertools.product(list(ring.elements()), repeat=x.n):
        y = WittVec._raw(x.p, x.n, ring, coords)
        if witt_mul(scalar, y) == x:
            return y
    return None


def is_divisible(x: WittVec, i: int, method: str = "criterion") -> bool:
    if method == "criterion":
        return p_order(x) >= i
    if method == "search":
        return search_divisibility_witness(x, i) is not None
    if method == "witness":
        return divisibility_witness(x, i) is not None
    raise ValueError(f"unknown method {method!r}")


def all_vectors(p: int, n: int, ring: Ring):
    for coords in itertools.product(list(ring.elements()), repeat=n):
        yield WittVec._raw(p, n, ring, coords)


# polynomial lifts -----------------------------------------------------------

class WittPolynomial:
    """Polynomial in named variables with coefficients in W_n(F_q)."""

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], WittVec]):
        self.variables = tuple(variables)
        self.terms = dict(terms)
        params = {c.params() for c in self.terms.values()}
        if len(params) > 1:
            raise WittMismatch("coefficients live in different Witt rings")
        for e in self.terms:
            if len(e) != len(self.variables) or any(k < 0 for k in e):
                raise ValueError(f"bad exponent tuple {e}")

    @classmethod
    def constant(cls, c: WittVec, variables: Sequence[str] = ()) -> "WittPolynomial":
        return cls(variables, {(0,) * len(tuple(variables)): c})

    def reduce(self, target: PerfPoly) -> RingValue:
        """``f mod p`` as an element of the perfected ring (coefficients' a_0)."""
        acc = target.zero()
        for e, c in self.terms.items():
            mono = target.const(c.payloads[0])
            for v, k in zip(self.variables, e):
                mono = target.mul(mono, target.pow(target.var(v), k))
            acc = target.add(acc, mono)
        return RingValue(target, acc)


def poly_lift(f: WittPolynomial, target: PerfPoly) -> WittVec:
    """Substitute ``[z]`` for each variable ``z`` and evaluate with Witt arithmetic."""
    if tuple(target.variables) != f.variables:
        raise ValueError(f"variables {f.variables} do not match {target.variables}")
    if not f.terms:
        raise ValueError("empty polynomial has no Witt parameters")
    sample = next(iter(f.terms.values()))
    p, n = sample.p, sample.n
    if sample.ring != target.base:
        raise RingMismatch(f"coefficients in {sample.ring}, target base is {target.base}")
    inc = constant_inclusion(target)
    acc = zero(p, n, target)
    for e, c in f.terms.items():
        term = witt_map(inc, c)
        for v, k in zip(f.variables, e):
            if k:
                tz = teichmuller(RingValue(target, target.var(v)), n)
                term = witt_mul(term, witt_pow(tz, k))
        acc = witt_add(acc, term)
    return acc


# text and JSON forms -------------------------------------------------------

def format_witt(x: WittVec) -> str:
    coords = ",".join(x.ring.format(a) for a in x.payloads)
    return f"W(p={x.p},n={x.n};{x.ring.descriptor})[{coords}]"


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_witt(text: str) -> WittVec:
    s = text.strip()
    if not (s.startswith("W(") and s.endswith("]")):
        raise ParseError(f"not a Witt vector literal: {text!r}")
    cut = s.rfind(")[")
    if cut < 0:
        raise ParseError(f"missing coordinate list in {text!r}")
    header, body = s[2:cut], s[cut + 2:-1]
    try:
        params, desc = header.split(";", 1)
        kv = dict(item.split("=", 1) for item in params.split(","))
        p, n = int(kv["p"]), int(kv["n"])
    except (ValueError, KeyError) as exc:
        raise ParseError(f"bad Witt header {header!r}") from exc
    ring = parse_ring(desc.strip())
    coords = [ring.parse(c) for c in _split_top(body)] if body.strip() else []
    return WittVec(p, n, ring, [RingValue(ring, c) for c in coords])


def witt_to_json(x: WittVec) -> str:
    return json.dumps({"p": x.p, "n": x.n, "ring": x.ring.descriptor,
                       "coords": [x.ring.format(a) for a in x.payloads]})


def witt_from_json(text: str) -> WittVec:
    doc = json.loads(text)
    ring = parse_ring(doc["ring"])
    return WittVec(doc["p"], doc["n"], ring, [ring(c) for c in doc["coords"]])




def random_witt(p: int, n: int, ring: Ring, rng, size: tuple[int, int] = (1, 2),
                order: int = 0, density: float = 1.0) -> WittVec:
    """Random vector with zero coordinates below ``order``.

    Coordinate ``order`` is nonzero when ``order < n``; later ones are drawn
    with probability ``density`` and zero otherwise.
    """
    level, degree = size
    coords = [ring.zero()] * min(order, n)
    for k in range(order, n):
        if k > order and rng.random() >= density:
            coords.append(ring.zero())
            continue
        v = ring.random_payload(rng, level, degree)
        while k == order and ring.is_zero(v):
            v = ring.random_payload(rng, level, degree)
        coords.append(v)
    return WittVec._raw(p, n, ring, coords)
