"""Ghost polynomials and p-typical Witt structure polynomials over the integers.

Monomials are packed into a single Python int: the exponent of variable ``v``
occupies bits ``[v*SHIFT, (v+1)*SHIFT)``.  Variables are interleaved as
``X0, Y0, X1, Y1, ...`` (index ``2i`` for ``X_i``, ``2i+1`` for ``Y_i``), so a
polynomial's key does not depend on the truncation length it was built for,
and multiplying monomials is integer addition.
"""

from __future__ import annotations

import json
import os
import random
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .config import ResourceLimitError, get_settings, require_prime

SHIFT = 24
MASK = (1 << SHIFT) - 1
MAX_EXPONENT = MASK


class InvariantBreach(RuntimeError):
    """An exact identity the construction relies on failed to hold."""


def var_index(name: str) -> int:
    kind, idx = name[0], int(name[1:])
    if kind == "X":
        return 2 * idx
    if kind == "Y":
        return 2 * idx + 1
    raise ValueError(f"unknown variable {name!r}")


def var_name(v: int) -> str:
    return ("X" if v % 2 == 0 else "Y") + str(v // 2)


def _unpack(key: int) -> tuple[int, ...]:
    out = []
    while key:
        out.append(key & MASK)
        key >>= SHIFT
    return tuple(out)


def _pack(exps: Sequence[int]) -> int:
    key = 0
    for v, e in enumerate(exps):
        if e < 0 or e > MAX_EXPONENT:
            raise ResourceLimitError(f"exponent {e} out of range")
        key |= e << (SHIFT * v)
    return key


class IntPolynomial:
    """Immutable sparse polynomial with integer coefficients in X_i, Y_i."""

    __slots__ = ("_terms", "_hash", "_compiled")

    def __init__(self, terms: Mapping[int, int] | None = None, *, _trusted: bool = False):
        if terms is None:
            terms = {}
        elif not _trusted:
            terms = {k: c for k, c in terms.items() if c}
        self._terms: dict[int, int] = dict(terms) if not _trusted else terms
        self._hash = None
        self._compiled: dict = {}

    # construction -----------------------------------------------------
    @classmethod
    def constant(cls, c: int) -> "IntPolynomial":
        return cls({0: c} if c else {}, _trusted=True)

    @classmethod
    def variable(cls, name: str | int) -> "IntPolynomial":
        v = var_index(name) if isinstance(name, str) else name
        return cls({1 << (SHIFT * v): 1}, _trusted=True)

    @classmethod
    def from_exponents(cls, items: Iterable[tuple[Sequence[int], int]]) -> "IntPolynomial":
        """Build from ``(exponent tuple, coeff)`` pairs, exponents interleaved."""
        terms: dict[int, int] = {}
        for exps, c in items:
            k = _pack(exps)
            terms[k] = terms.get(k, 0) + c
        return cls(terms)

    # inspection -------------------------------------------------------
    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """Yield ``(exponents, coeff)``; exponent tuples are interleaved with
        trailing zeros stripped, so equal polynomials yield equal sets."""
        for k, c in self._terms.items():
            yield _unpack(k), c

    def named_terms(self) -> list[tuple[dict[str, int], int]]:
        """Terms as ``({"X0": 1, "Y0": 1}, coeff)`` in canonical print order."""
        out = []
        for key in sorted(self._terms, key=_order_key, reverse=True):
            exps = _unpack(key)
            named = {var_name(v): e for v, e in _display_vars(exps)}
            out.append((named, self._terms[key]))
        return out

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def variables(self) -> set[int]:
        vs: set[int] = set()
        for k in self._terms:
            v = 0
            while k:
                if k & MASK:
                    vs.add(v)
                k >>= SHIFT
                v += 1
        return vs

    def max_variable(self) -> int:
        """Largest variable index present, or -1 for constants."""
        top = max(self._terms, default=0)
        return (top.bit_length() - 1) // SHIFT if top else -1

    def coefficient(self, exps: Sequence[int]) -> int:
        return self._terms.get(_pack(exps), 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPolynomial.constant(other)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"IntPolynomial({format_polynomial(self)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)

    # arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "IntPolynomial":
        if isinstance(other, IntPolynomial):
            return other
        if isinstance(other, int):
            return IntPolynomial.constant(other)
        raise TypeError(f"cannot combine IntPolynomial with {type(other).__name__}")

    def __add__(self, other) -> "IntPolynomial":
        other = self._coerce(other)
        a, b = (self._terms, other._terms) if len(self._terms) >= len(other._terms) \
            else (other._terms, self._terms)
        out = dict(a)
        for k, c in b.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return IntPolynomial(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial({k: -c for k, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other) -> "IntPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "IntPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            if not other:
                return IntPolynomial()
            return IntPolynomial({k: c * other for k, c in self._terms.items()}, _trusted=True)
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, int] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return IntPolynomial({k: c for k, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPolynomial":
        if e < 0:
            raise ValueError("negative power")
        result = IntPolynomial.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def exact_div(self, d: int) -> "IntPolynomial":
        """Divide every coefficient by ``d``; any remainder is an invariant breach."""
        out = {}
        for k, c in self._terms.items():
            q, r = divmod(c, d)
            if r:
                raise InvariantBreach(f"inexact division by {d}: coefficient {c}")
            out[k] = q
        return IntPolynomial(out, _trusted=True)

    def reduced(self, m: int) -> list[tuple[int, tuple[tuple[int, int], ...]]]:
        """Compiled ``(coeff mod m, ((var, exp), ...))`` list, zero terms dropped.

        ``m = 0`` keeps the integer coefficients.  Cached per modulus.
        """
        cached = self._compiled.get(m)
        if cached is None:
            cached = []
            for k, c in self._terms.items():
                if m:
                    c %= m
                    if not c:
                        continue
                exps = _unpack(k)
                cached.append((c, tuple((v, e) for v, e in enumerate(exps) if e)))
            self._compiled[m] = cached
        return cached

    def plan(self, m: int) -> "EvalPlan":
        """Evaluation plan over coefficients reduced mod ``m`` (cached)."""
        key = ("plan", m)
        got = self._compiled.get(key)
        if got is None:
            got = self._compiled[key] = EvalPlan(self.reduced(m))
        return got

    def evaluate_int(self, values: Sequence[int]) -> int:
        total = 0
        for c, mono in self.reduced(0):
            t = c
            for v, e in mono:
                t *= values[v] ** e
            total += t
        return total


_ORDER_SLOTS = 64


def _order_key(key: int) -> tuple[int, ...]:
    # Higher-index Witt variables dominate; X_i before Y_i at equal index.
    exps = _unpack(key)
    exps = exps + (0,) * (_ORDER_SLOTS - len(exps))
    return tuple(exps[2 * i + j] for i in range(_ORDER_SLOTS // 2 - 1, -1, -1) for j in (0, 1))


def _display_vars(exps: Sequence[int]) -> list[tuple[int, int]]:
    xs = [(v, e) for v, e in enumerate(exps) if e and v % 2 == 0]
    ys = [(v, e) for v, e in enumerate(exps) if e and v % 2 == 1]
    return xs + ys


def format_polynomial(poly: IntPolynomial) -> str:
    """Human-readable form, e.g. ``X1 + Y1 - X0*Y0``."""
    if poly.is_zero():
        return "0"
    parts = []
    for named, c in poly.named_terms():
        mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in named.items())
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


# ghost polynomials --------------------------------------------------------

def _ghost_from(coords: Sequence[IntPolynomial], p: int, k: int) -> IntPolynomial:
    total = IntPolynomial()
    for i in range(k + 1):
        total = total + (coords[i] ** (p ** (k - i))) * (p ** i)
    return total


def ghost_polynomial(p: int, k: int, var: str = "X") -> IntPolynomial:
    """``w_k = sum_{i<=k} p^i * X_i^(p^(k-i))``."""
    require_prime(p)
    if k < 0:
        raise ValueError("ghost index must be nonnegative")
    if p ** k > MAX_EXPONENT:
        raise ResourceLimitError(f"exponent p^{k} exceeds packing limit")
    return _ghost_from([IntPolynomial.variable(f"{var}{i}") for i in range(k + 1)], p, k)


def check_cap(p: int, n: int) -> None:
    require_prime(p)
    if n < 1:
        raise ValueError("truncation length must be at least 1")
    cap = get_settings().caps.cap(p)
    if n > cap:
        raise ResourceLimitError(f"n={n} exceeds the cap {cap} for p={p}")


@dataclass(frozen=True)
class WittStructureSet:
    prime: int
    length: int
    sum_polys: tuple[IntPolynomial, ...]
    prod_polys: tuple[IntPolynomial, ...]
    neg_polys: tuple[IntPolynomial, ...]

    def prefix(self, m: int) -> "WittStructureSet":
        if not 1 <= m <= self.length:
            raise ValueError(f"prefix length {m} out of range")
        return WittStructureSet(self.prime, m, self.sum_polys[:m],
                                self.prod_polys[:m], self.neg_polys[:m])

    def to_json(self) -> str:
        return structure_to_json(self)


class _Builder:
    """Incremental solver for one prime; grows S_k, P_k, N_k on demand.

    ``powers[kind][i][j]`` holds ``poly_i ** (p ** j)``, reused across k.
    """

    def __init__(self, p: int):
        self.p = p
        self.polys: dict[str, list[IntPolynomial]] = {"S": [], "P": [], "N": []}
        self.powers: dict[str, list[list[IntPolynomial]]] = {"S": [], "P": [], "N": []}
        self.lock = threading.Lock()

    def _power(self, kind: str, i: int, j: int) -> IntPolynomial:
        chain = self.powers[kind][i]
        while len(chain) <= j:
            chain.append(chain[-1] ** self.p)
        return chain[j]

    def _solve(self, kind: str, k: int, target: IntPolynomial) -> IntPolynomial:
        p = self.p
        rest = target
        for i in range(k):
            rest = rest - self._power(kind, i, k - i) * (p ** i)
        poly = rest.exact_div(p ** k)
        self.polys[kind].append(poly)
        self.powers[kind].append([poly])
        return poly

    def extend(self, n: int) -> None:
        p = self.p
        while len(self.polys["S"]) < n:
            k = len(self.polys["S"])
            wx = ghost_polynomial(p, k, "X")
            wy = ghost_polynomial(p, k, "Y")
            self._solve("S", k, wx + wy)
            self._solve("P", k, wx * wy)
            neg = self._solve("N", k, -wx)
            if p != 2 and neg != -IntPolynomial.variable(f"X{k}"):
                raise InvariantBreach(f"odd-p negation N_{k} is not -X_{k}")


_builders: dict[int, _Builder] = {}
_builders_lock = threading.Lock()
_sets: dict[tuple[int, int], WittStructureSet] = {}


def _builder(p: int) -> _Builder:
    with _builders_lock:
        b = _builders.get(p)
        if b is None:
            b = _builders[p] = _Builder(p)
        return b


def compute_structure(p: int, n: int) -> WittStructureSet:
    """Compute a structure set from scratch, bypassing every cache."""
    check_cap(p, n)
    b = _Builder(p)
    b.extend(n)
    return WittStructureSet(p, n, tuple(b.polys["S"]), tuple(b.polys["P"]), tuple(b.polys["N"]))


def structure_polynomials(p: int, n: int) -> WittStructureSet:
    """Cached structure polynomials ``S, P, N`` for ``W_n`` at prime ``p``."""
    check_cap(p, n)
    key = (p, n)
    found = _sets.get(key)
    if found is not None:
        return found
    loaded = _load_from_disk(p, n)
    if loaded is not None:
        _sets[key] = loaded
        return loaded
    b = _builder(p)
    with b.lock:
        b.extend(n)
        ws = WittStructureSet(p, n, tuple(b.polys["S"][:n]), tuple(b.polys["P"][:n]),
                              tuple(b.polys["N"][:n]))
    _sets.setdefault(key, ws)
    _store_to_disk(ws)
    return _sets[key]


def verify_ghost_identities(ws: WittStructureSet, *, samples: int = 3, seed: int = 0) -> None:
    """Expand every ghost identity as a polynomial equality and spot-check it
    at random integer points.  Raises :class:`InvariantBreach` on failure."""
    p = ws.prime
    rng = random.Random(seed)
    for k in range(ws.length):
        wx = ghost_polynomial(p, k, "X")
        wy = ghost_polynomial(p, k, "Y")
        checks = (("S", ws.sum_polys, wx + wy), ("P", ws.prod_polys, wx * wy),
                  ("N", ws.neg_polys, -wx))
        for kind, polys, target in checks:
            poly = polys[k]
            if poly.max_variable() > 2 * k + 1:
                raise InvariantBreach(f"{kind}_{k} involves variables beyond index {k}")
            if kind == "N" and any(v % 2 for v in poly.variables()):
                raise InvariantBreach(f"N_{k} involves a Y variable")
            if _ghost_from(polys, p, k) != target:
                raise InvariantBreach(f"ghost identity fails for {kind}_{k}, p={p}")
            for _ in range(samples):
                pt = [rng.randint(-5, 5) for _ in range(2 * (k + 1))]
                coords = [q.evaluate_int(pt) for q in polys[:k + 1]]
                lhs = sum(p ** i * coords[i] ** (p ** (k - i)) for i in range(k + 1))
                if lhs != target.evaluate_int(pt):
                    raise InvariantBreach(f"pointwise ghost check fails for {kind}_{k}")


# serialization ------------------------------------------------------------

def polynomial_to_records(poly: IntPolynomial) -> list[dict]:
    return [{"coeff": str(c), "exps": named} for named, c in poly.named_terms()]


def polynomial_from_records(records: Sequence[Mapping]) -> IntPolynomial:
    terms: dict[int, int] = {}
    for rec in records:
        coeff = rec["coeff"]
        if not isinstance(coeff, str):
            raise ValueError("coefficients must be decimal strings")
        c = int(coeff)
        exps: list[int] = []
        for name, e in rec["exps"].items():
            v = var_index(name)
            if not isinstance(e, int) or e < 1:
                raise ValueError(f"bad exponent {e!r} for {name}")
            exps.extend([0] * (v + 1 - len(exps)))
            exps[v] = e
        k = _pack(exps)
        terms[k] = terms.get(k, 0) + c
    return IntPolynomial(terms)


def structure_to_json(ws: WittStructureSet, indent: int | None = None) -> str:
    doc = {
        "p": ws.prime,
        "n": ws.length,
        "S": [polynomial_to_records(q) for q in ws.sum_polys],
        "P": [polynomial_to_records(q) for q in ws.prod_polys],
        "N": [polynomial_to_records(q) for q in ws.neg_polys],
    }
    return json.dumps(doc, indent=indent)


def structure_from_json(text: str) -> WittStructureSet:
    doc = json.loads(text)
    p, n = doc["p"], doc["n"]
    polys = {kind: tuple(polynomial_from_records(r) for r in doc[kind]) for kind in "SPN"}
    if any(len(v) != n for v in polys.values()):
        raise ValueError("polynomial count does not match n")
    return WittStructureSet(p, n, polys["S"], polys["P"], polys["N"])


def _cache_path(p: int, n: int) -> str | None:
    d = get_settings().cache_dir
    if not d:
        return None
    return os.path.join(d, f"structure_p{p}_n{n}.json")


def _load_from_disk(p: int, n: int) -> WittStructureSet | None:
    path = _cache_path(p, n)
    if path is None or not os.path.exists(path):
        return None
    with open(path, encoding="utf-8") as fh:
        ws = structure_from_json(fh.read())
    if (ws.prime, ws.length) != (p, n):
        raise ValueError(f"{path} holds p={ws.prime}, n={ws.length}")
    return ws


def _store_to_disk(ws: WittStructureSet) -> None:
    path = _cache_path(ws.prime, ws.length)
    if path is None or os.path.exists(path):
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = f"{path}.{os.getpid()}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(structure_to_json(ws))
    os.replace(tmp, path)


# evaluation -----------------------------------------------------------------

class EvalPlan:
    """Monomials compiled into a prefix trie walked depth first.

    Each op is ``(depth, var, exp, coeff, end)``: multiply the product at
    ``depth - 1`` by ``values[var] ** exp``, add ``coeff`` times the result
    when ``coeff`` is nonzero, and jump to ``end`` (past the subtree) when the
    value is zero.  Monomials sharing a prefix share its partial product.
    """

    __slots__ = ("constant", "ops", "depth", "nvars")

    def __init__(self, terms: Sequence[tuple[int, tuple[tuple[int, int], ...]]]):
        root: dict = {}
        self.constant = 0
        for c, mono in terms:
            if not mono:
                self.constant += c
                continue
            node = root
            for step in mono:
                node = node.setdefault(step, [0, {}])
                last = node
                node = node[1]
            last[0] += c
        ops: list[list] = []

        def walk(children: dict, depth: int):
            for (v, e), (c, sub) in sorted(children.items()):
                i = len(ops)
                ops.append([depth, v, e, c, 0])
                walk(sub, depth + 1)
                ops[i][4] = len(ops)

        walk(root, 1)
        self.ops = [tuple(op) for op in ops]
        self.depth = max((op[0] for op in ops), default=0)
        self.nvars = max((op[1] for op in ops), default=-1) + 1

    def run_generic(self, ring, values: Sequence):
        """Evaluate in ``ring``; ``values[v]`` is a payload (None means zero)."""
        slots = [ring.one()] + [None] * self.depth
        acc = ring.zero()
        if self.constant:
            acc = ring.scale(ring.one(), self.constant)
        powers: dict = {}
        ops = self.ops
        i, total = 0, len(ops)
        while i < total:
            d, v, e, c, end = ops[i]
            key = (v, e)
            pw = powers.get(key, False)
            if pw is False:
                x = values[v]
                pw = None if x is None or ring.is_zero(x) else ring.pow(x, e)
                powers[key] = pw
            if pw is None:
                i = end
                continue
            val = ring.mul(slots[d - 1], pw) if d > 1 else pw
            slots[d] = val
            if c:
                acc = ring.add(acc, ring.scale(val, c) if c != 1 else val)
            i += 1
        return acc

    def run_dense(self, arrs: Sequence, power, p: int):
        """Dense F_p[t] evaluation; returns an unreduced int64 accumulator.

        ``arrs[v]`` is a ``(stride, array)`` pair or None (zero) and
        ``power(v, e)`` returns the pair for ``arrs[v] ** e``.  Coefficients
        are below ``p`` and partial products are reduced, so the accumulator
        stays small.
        """
        import numpy as np
        from .perfrings import dense

        slots: list = [None] * (self.depth + 1)
        pending: list = []
        if self.constant % p:
            pending.append((self.constant % p, (1, dense.const(1, p))))
        ops = self.ops
        i, total = 0, len(ops)
        while i < total:
            d, v, e, c, end = ops[i]
            if arrs[v] is None:
                i = end
                continue
            pw = power(v, e)
            val = dense.strided_mul(slots[d - 1], pw, p) if d > 1 else pw
            if not len(val[1]):
                i = end
                continue
            slots[d] = val
            if c:
                pending.append((c, val))
            i += 1
        size = max((dense.strided_len(a) for _, a in pending), default=0)
        acc = np.zeros(size, dtype=np.int64)
        for c, (s, a) in pending:
            acc[:(len(a) - 1) * s + 1:s] += c * a
        return acc


def evaluate_structure(poly: IntPolynomial, x_coords: Sequence, y_coords: Sequence,
                       ring=None, *, exact: bool = False):
    """Evaluate ``poly`` at ``X_i = x_coords[i]``, ``Y_i = y_coords[i]``.

    In characteristic p the coefficients are reduced mod p first; ``exact``
    keeps the integer coefficients instead (the cross-check path).
    """
    from .perfrings.base import RingMismatch, RingValue

    coords = list(x_coords) + list(y_coords)
    if ring is None:
        if not coords:
            raise ValueError("cannot infer the ring without coordinates")
        ring = coords[0].ring
    elif isinstance(ring, str):
        from .perfrings.grammar import parse_ring
        ring = parse_ring(ring)
    for c in coords:
        if c.ring != ring:
            raise RingMismatch(f"{c.ring} vs {ring}")
    top = poly.max_variable()
    used = poly.variables()
    values: list = [None] * max(top + 1, 0)
    for v in range(top + 1):
        seq, i = (x_coords, v // 2) if v % 2 == 0 else (y_coords, v // 2)
        if v in used and i >= len(seq):
            raise ValueError(f"{var_name(v)} needs at least {i + 1} coordinates")
        if i < len(seq):
            values[v] = seq[i].payload
    m = 0 if exact or not ring.char else ring.char
    plan = poly.plan(m)
    if m:
        return RingValue(ring, ring.run_plan(plan, values))
    return RingValue(ring, plan.run_generic(ring, values))
