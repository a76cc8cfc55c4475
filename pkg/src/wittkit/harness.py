"""Finite checks behind the integral-closedness argument and its examples.

* ``lowest_term_check``: the product identity ``d_(ni+j) = b_j c_i^n``.
* ``almost_integrality_scan``: bounded test of ``a c^n`` in a subring.
* ``semigroup_membership``: monomial exponents, with obstruction certificates.
* ``cotangent_dimension``: ``dim m/m^2`` of a local presentation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .config import get_settings, require_prime
from .perfrings.base import RingMismatch, RingValue
from .perfrings.fractions import PerfFrac
from .perfrings.grammar import ExprBuilder, ParseError, TokenStream, tokenize
from .perfrings.polys import PerfPoly
from .wittcore import (WittVec, p_order, teichmuller, witt_from_integer, witt_mul,
                       witt_representation, witt_sub)


class VacuousCheck(ValueError):
    """The hypothesis leaves nothing to check."""


class TruncationTooShort(ValueError):
    """The Witt length cannot hold the requested exponents."""


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True)


# lowest-term identity -------------------------------------------------------

@dataclass(frozen=True)
class LowestTermRecord:
    n: int
    d: RingValue
    expected: RingValue
    equal: bool
    order: int
    expected_order: int

    def order_ok(self) -> bool:
        return self.order == self.expected_order


@dataclass(frozen=True)
class LowestTermReport:
    j: int
    i: int
    records: tuple[LowestTermRecord, ...]

    @property
    def falsifications(self) -> list[LowestTermRecord]:
        return [r for r in self.records if not (r.equal and r.order_ok())]

    @property
    def ok(self) -> bool:
        return not self.falsifications

    def to_json(self) -> str:
        return _dump({
            "check": "lowest-term", "j": self.j, "i": self.i, "evidence": "certified",
            "records": [{"n": r.n, "d": str(r.d), "b_j*c_i^n": str(r.expected),
                         "equal": r.equal, "p_order": r.order,
                         "expected_p_order": r.expected_order} for r in self.records],
        })


def max_exponent(n: int, i: int, j: int, cap: int | None = None) -> int:
    """Largest ``n_max`` with ``n_max*i + j <= n - 1``.

    When ``i = 0`` truncation gives no bound and ``cap`` decides.
    """
    if cap is None:
        cap = get_settings().harness.lowest_term_nmax_cap
    if j > n - 1:
        return 0
    if i == 0:
        return cap
    return (n - 1 - j) // i


def lowest_term_check(a: WittVec, f: WittVec, n_max: int | None = None) -> LowestTermReport:
    """Check ``d_(ni+j) = b_j c_i^n`` for ``n = 1..n_max``.

    ``a = sum p^k [b_k]`` has every ``b_k`` in the perfected polynomial
    subring, ``f = sum p^k [c_k]`` and ``i`` is the first index with ``c_i``
    outside it.  With ``g = f - sum_(k<i) p^k [c_k]`` the Witt coefficient of
    ``a g^n`` at ``ni + j`` is compared with ``b_j c_i^n``.
    """
    if a.params() != f.params():
        raise RingMismatch("a and f must live in the same Witt ring")
    K = a.ring
    if not isinstance(K, PerfFrac):
        raise TypeError("lowest_term_check works over a perfected fraction field")
    if a.is_zero():
        raise ValueError("a must be nonzero")
    p, n = a.p, a.n
    b = witt_representation(a).coeffs
    if not all(K.in_poly_subring(x) for x in b):
        raise ValueError("the Witt coefficients of a must lie in the subring")
    c = witt_representation(f).coeffs
    j = p_order(a)
    i = next((k for k, ck in enumerate(c) if not K.in_poly_subring(ck)), None)
    if i is None:
        raise VacuousCheck("vacuous: f lies in W(B)")
    if n_max is None:
        n_max = max_exponent(n, i, j)
    if n_max < 1 or n_max * i + j > n - 1:
        raise TruncationTooShort(f"need n_max*i + j <= {n - 1}, got n_max={n_max}, i={i}, j={j}")

    g = f
    p_pow = witt_from_integer(1, p, n, K)
    p_vec = witt_from_integer(p, p, n, K)
    for k in range(i):
        if not K.is_zero(c[k]):
            g = witt_sub(g, witt_mul(p_pow, teichmuller(RingValue(K, c[k]), n)))
        p_pow = witt_mul(p_pow, p_vec)

    records = []
    h = a
    cn = K.one()
    for m in range(1, n_max + 1):
        h = witt_mul(h, g)
        cn = K.mul(cn, c[i])
        d = witt_representation(h).coeffs[m * i + j]
        expected = K.mul(b[j], cn)
        records.append(LowestTermRecord(m, RingValue(K, d), RingValue(K, expected),
                                        K.eq(d, expected), p_order(h), m * i + j))
    return LowestTermReport(j, i, tuple(records))


# almost integrality ---------------------------------------------------------

@dataclass(frozen=True)
class AllPass:
    N: int
    evidence: str = "bounded"

    def to_json(self) -> str:
        note = "bounded evidence, not a proof" if self.evidence == "bounded" else \
            "c lies in the subring, closed under products"
        return _dump({"verdict": "AllPass", "N": self.N, "evidence": self.evidence, "note": note})

    def __str__(self) -> str:
        tail = " (bounded evidence, not a proof)" if self.evidence == "bounded" else ""
        return f"AllPass({self.N}){tail}"


@dataclass(frozen=True)
class FirstFailure:
    n: int
    evidence: str = "certified"

    def to_json(self) -> str:
        return _dump({"verdict": "FirstFailure", "n": self.n, "evidence": self.evidence})

    def __str__(self) -> str:
        return f"FirstFailure({self.n})"


def almost_integrality_scan(subring: PerfPoly | str, c: RingValue, a: RingValue,
                            N: int | None = None):
    """Test ``a c^n`` in the subring for ``n = 1..N``."""
    if isinstance(subring, str):
        from .perfrings.grammar import parse_ring
        subring = parse_ring(subring)
    if N is None:
        N = get_settings().harness.scan_bound
    if N < 1:
        raise ValueError("N must be at least 1")
    K = c.ring
    if not isinstance(K, PerfFrac) or K.poly != subring:
        raise RingMismatch(f"c must lie in the fraction field of {subring}")
    if a.ring == subring:
        a_frac = K.from_poly(a.payload)
    elif a.ring == K:
        a_frac = a.payload
    else:
        raise RingMismatch(f"a must lie in {subring}")
    if K.is_zero(a_frac):
        raise ValueError("a must be nonzero")
    if K.in_poly_subring(c.payload) and K.in_poly_subring(a_frac):
        return AllPass(N, "certified")
    acc = a_frac
    for n in range(1, N + 1):
        acc = K.mul(acc, c.payload)
        if not K.in_poly_subring(acc):
            return FirstFailure(n)
    return AllPass(N, "bounded")


# monomial semigroups --------------------------------------------------------

HEITMANN_GENERATORS = ((2, 0), (3, 0), (0, 1), (2, -1), (3, -1))


@dataclass(frozen=True)
class MonomialSemigroup:
    generators: tuple[tuple[int, ...], ...] = HEITMANN_GENERATORS
    search_bound: int = 20

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValueError("need at least one generator")
        if len({len(g) for g in gens}) != 1:
            raise ValueError("generators of different ranks")
        if any(not any(g) for g in gens):
            raise ValueError("generators must be nonzero")
        if self.search_bound < 1:
            raise ValueError("search_bound must be at least 1")

    @property
    def rank(self) -> int:
        return len(self.generators[0])


@dataclass(frozen=True)
class Certificate:
    """Single-coordinate obstruction.

    ``kind == "congruence"``: every generator's coordinate is divisible by
    ``modulus`` but the target's is not.  ``kind == "gap"``: all generator
    coordinates are nonnegative and the target value is not a nonnegative
    combination of them.
    """

    kind: str
    coordinate: int
    values: tuple[int, ...]
    target: int
    modulus: int = 0

    def describe(self) -> str:
        vals = ",".join(map(str, self.values))
        if self.kind == "congruence":
            return (f"coordinate {self.coordinate}: generator values {{{vals}}} are all "
                    f"divisible by {self.modulus}, target {self.target} is not")
        return (f"coordinate {self.coordinate}: generator values {{{vals}}} are nonnegative "
                f"and {self.target} is not a sum of them")


def _numerical_reachable(values: Sequence[int], target: int) -> bool:
    pos = sorted({v for v in values if v > 0})
    if target < 0:
        return False
    ok = [False] * (target + 1)
    ok[0] = True
    for t in range(1, target + 1):
        ok[t] = any(v <= t and ok[t - v] for v in pos)
    return ok[target]


def check_certificate(S: MonomialSemigroup, v: Sequence[int], cert: Certificate) -> bool:
    """Recheck an obstruction from scratch."""
    col = tuple(sorted({g[cert.coordinate] for g in S.generators}))
    t = v[cert.coordinate]
    if col != cert.values or t != cert.target:
        return False
    if cert.kind == "congruence":
        m = cert.modulus
        return m > 1 and all(x % m == 0 for x in col) and t % m != 0
    if cert.kind == "gap":
        return all(x >= 0 for x in col) and not _numerical_reachable(col, t)
    return False


def find_certificate(S: MonomialSemigroup, v: Sequence[int]) -> Certificate | None:
    from math import gcd
    for c in range(S.rank):
        col = tuple(sorted({g[c] for g in S.generators}))
        t = v[c]
        m = 0
        for x in col:
            m = gcd(m, x)
        if m > 1 and t % m:
            return Certificate("congruence", c, col, t, m)
        if all(x >= 0 for x in col) and not _numerical_reachable(col, t):
            return Certificate("gap", c, col, t)
    return None


@dataclass(frozen=True)
class Member:
    witness: tuple[tuple[tuple[int, ...], int], ...]
    evidence: str = "certified"
    name: str = "Member"

    def resum(self, rank: int) -> tuple[int, ...]:
        total = [0] * rank
        for g, k in self.witness:
            for c in range(rank):
                total[c] += k * g[c]
        return tuple(total)

    def to_json(self) -> str:
        return _dump({"verdict": "Member", "evidence": self.evidence,
                      "witness": [{"generator": list(g), "count": k} for g, k in self.witness]})

    def __str__(self) -> str:
        parts = [f"{k}*{g}" if k != 1 else str(g) for g, k in self.witness]
        return "Member{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class NonMemberProven:
    certificate: Certificate
    evidence: str = "certified"
    name: str = "NonMemberProven"

    def to_json(self) -> str:
        c = self.certificate
        return _dump({"verdict": "NonMemberProven", "evidence": self.evidence,
                      "certificate": {"kind": c.kind, "coordinate": c.coordinate,
                                      "values": list(c.values), "target": c.target,
                                      "modulus": c.modulus}})

    def __str__(self) -> str:
        return "NonMemberProven"


@dataclass(frozen=True)
class NotWithinBound:
    bound: int
    evidence: str = "bounded"
    name: str = "NotWithinBound"

    def to_json(self) -> str:
        return _dump({"verdict": "NotWithinBound", "bound": self.bound, "evidence": self.evidence})

    def __str__(self) -> str:
        return "NotWithinBound"


def semigroup_membership(S: MonomialSemigroup, v: Sequence[int]):
    """Is ``v`` a nonnegative integer combination of the generators?

    Certificates are tried first, then breadth-first search over
    combinations with at most ``search_bound`` generators.
    """
    v = tuple(int(x) for x in v)
    if len(v) != S.rank:
        raise ValueError(f"vector of rank {len(v)} for a semigroup of rank {S.rank}")
    cert = find_certificate(S, v)
    if cert is not None:
        return NonMemberProven(cert)
    gens = S.generators
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], int] | None] = {(0,) * S.rank: None}
    frontier = [(0,) * S.rank]
    for _ in range(S.search_bound + 1):
        if v in parent:
            break
        nxt = []
        for u in frontier:
            for gi, g in enumerate(gens):
                w = tuple(a + b for a, b in zip(u, g))
                if w not in parent:
                    parent[w] = (u, gi)
                    nxt.append(w)
        frontier = nxt
    if v not in parent:
        return NotWithinBound(S.search_bound)
    counts = [0] * len(gens)
    cur = v
    while parent[cur] is not None:
        prev, gi = parent[cur]
        counts[gi] += 1
        cur = prev
    return Member(tuple((gens[k], counts[k]) for k in range(len(gens)) if counts[k]))


# local presentations ----------------------------------------------------------

class _IntPolyRing:
    """Integer polynomials as ``{exponent tuple: coefficient}`` dicts."""

    def __init__(self, nvars: int):
        self.nvars = nvars

    def from_int(self, m):
        return {(0,) * self.nvars: m} if m else {}

    def add(self, a, b):
        out = dict(a)
        for k, c in b.items():
            out[k] = out.get(k, 0) + c
        return {k: c for k, c in out.items() if c}

    def neg(self, a):
        return {k: -c for k, c in a.items()}

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        out: dict = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, 0) + ca * cb
        return {k: c for k, c in out.items() if c}

    def inv(self, a):
        raise ParseError("division is not allowed in relations")

    def pow(self, a, e):
        if e < 0:
            raise ParseError("negative powers are not allowed in relations")
        out = self.from_int(1)
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def var(self, i):
        return {tuple(1 if j == i else 0 for j in range(self.nvars)): 1}


@dataclass(frozen=True)
class LocalPresentation:
    """Quotient of ``Z_p[[g_1..g_m]]`` by relations, kept up to degree 2.

    Relations are strings in the generators and the symbol ``p``; terms of
    total degree above 2 (counting ``p``) are dropped on construction.
    """

    generators: tuple[str, ...]
    relations: tuple[str, ...] = ()
    polys: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens) or "p" in gens or not all(g.isidentifier() for g in gens):
            raise ValueError(f"malformed generator list {gens}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relations", tuple(self.relations))
        R = _IntPolyRing(len(gens) + 1)
        names = {"p": R.var(0)}
        names.update({g: R.var(k + 1) for k, g in enumerate(gens)})
        polys = []
        for rel in self.relations:
            ts = TokenStream(tokenize(rel), rel)
            try:
                poly = ExprBuilder(R, names).expr(ts)
            except ParseError as exc:
                raise ValueError(f"malformed relation {rel!r}: {exc}") from exc
            if not ts.at_end():
                raise ValueError(f"malformed relation {rel!r}")
            if poly.get((0,) * (len(gens) + 1)):
                raise ValueError(f"relation {rel!r} has a constant term")
            polys.append({k: c for k, c in poly.items() if sum(k) <= 2})
        object.__setattr__(self, "polys", tuple(polys))

    def linear_parts(self, p: int) -> list[list[int]]:
        """Rows of degree-1 coefficients mod p in the basis ``p, g_1..g_m``.

        An integer coefficient divisible by p on ``g`` is really ``p*g``,
        which has degree 2, hence the reduction.
        """
        m = len(self.generators) + 1
        rows = []
        for poly in self.polys:
            row = [0] * m
            for k, c in poly.items():
                if sum(k) == 1:
                    row[k.index(1)] = c % p
            rows.append(row)
        return rows

    def mod_p(self, p: int) -> list[str]:
        """Relations of the special fibre R/pR, each scaled to be monic."""
        out = []
        names = self.generators
        for poly in self.polys:
            terms = {k[1:]: c % p for k, c in poly.items() if k[0] == 0 and c % p}
            if not terms:
                continue
            lead = terms[max(terms)]
            inv = pow(lead, -1, p)
            parts = []
            for k in sorted(terms, reverse=True):
                c = terms[k] * inv % p
                mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(names, k) if e)
                parts.append(mono if c == 1 else f"{c}*{mono}")
            out.append("+".join(parts))
        return out

    def __str__(self) -> str:
        return f"<{','.join(self.generators)} | {', '.join(self.relations)}>"


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def cotangent_dimension(P: LocalPresentation, p: int) -> int:
    """``dim_F_p m/m^2 = 1 + m - rank(linear parts mod p)``."""
    require_prime(p)
    return 1 + len(P.generators) - _rank_mod_p(P.linear_parts(p), p)


R1 = LocalPresentation(("x", "y"), ("x*y",))
R2 = LocalPresentation(("x", "y"), ("p - x*y",))


def random_lowest_term_instance(seed: int, p: int = 2, n: int = 6, size: tuple[int, int] = (1, 2)):
    """Seeded ``(a, f)`` over ``Frac(F_p[x]^perf)``.

    ``a`` has Witt coefficients in the subring starting at a random index
    ``j``; ``f`` has subring coefficients below a random index ``i`` and a
    genuine fraction at ``i``.  Vectors are assembled from the coefficients
    directly (coordinate ``k`` is ``r_k^(p^k)``).
    """
    import random
    from .perfrings.fields import PrimeField

    rng = random.Random(seed)
    K = PerfFrac(PrimeField(p), ("x",))
    B = K.poly
    level, degree = size
    j = rng.randint(0, min(2, n - 1))
    i = rng.randint(0, min(2, (n - 1 - j)))

    def poly(nonzero: bool):
        while True:
            v = B.random_payload(rng, level, degree)
            if not nonzero or not B.is_zero(v):
                return K.from_poly(v)

    def fraction():
        while True:
            v = K.random_payload(rng, level, degree)
            if not K.in_poly_subring(v):
                return v

    b = [K.zero()] * j + [poly(True)]
    b += [poly(False) if rng.random() < 0.5 else K.zero() for _ in range(n - j - 1)]
    c = [poly(False) for _ in range(i)] + [fraction()]
    c += [fraction() if rng.random() < 0.5 else K.zero() for _ in range(n - i - 1)]

    def assemble(r):
        coords = []
        for k, x in enumerate(r):
            for _ in range(k):
                x = K.frobenius(x)
            coords.append(x)
        return WittVec._raw(p, n, K, coords)

    return assemble(b), assemble(c)
