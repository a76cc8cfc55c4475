"""The integers, prime fields and small finite fields F_q = F_p[t]/(m(t))."""

from __future__ import annotations

import itertools
import random

from ..config import InvalidConfiguration, require_prime
from .base import CharacteristicError, NotInvertible, Ring


class Integers(Ring):
    char = 0
    perfect = False
    domain = True

    def key(self):
        return ("int",)

    @property
    def descriptor(self) -> str:
        return "int"

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, m):
        return m

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def scale(self, a, c):
        return a * c

    def inv(self, a):
        if a in (1, -1):
            return a
        raise NotInvertible(f"{a} is not a unit in Z")

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        return a ** e

    def frobenius(self, a):
        raise CharacteristicError("Frobenius needs characteristic p")

    def pth_root(self, a):
        raise CharacteristicError("p-th roots need characteristic p")

    def format(self, a):
        return str(a)

    def random_payload(self, rng, max_level, max_degree):
        bound = 10 ** max(1, max_degree)
        return rng.randint(-bound, bound)


class BaseField(Ring):
    """Finite fields; payloads are ints ``0 <= code < q``."""

    is_field = True
    perfect = True
    finite = True
    p: int
    q: int

    def zero(self):
        return 0

    def one(self):
        return 1

    def elements(self):
        return iter(range(self.q))

    def random_payload(self, rng, max_level, max_degree):
        return rng.randrange(self.q)

    def random_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, self.q)


class PrimeField(BaseField):
    def __init__(self, p: int):
        self.p = self.char = require_prime(p)
        self.q = p

    def key(self):
        return ("fp", self.p)

    @property
    def descriptor(self) -> str:
        return f"fp:{self.p}"

    def from_int(self, m):
        return m % self.p

    def add(self, a, b):
        s = a + b
        return s - self.p if s >= self.p else s

    def neg(self, a):
        return (self.p - a) if a else 0

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def scale(self, a, c):
        return a * c % self.p

    def inv(self, a):
        if not a:
            raise NotInvertible("division by zero in F_p")
        return pow(a, -1, self.p)

    def pow(self, a, e):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def frobenius(self, a):
        return a

    def pth_root(self, a):
        return a

    def format(self, a):
        return str(a)


def _poly_mulmod(a: list[int], b: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    """Product of coefficient vectors (low to high) reduced by a monic modulus."""
    e = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for j in range(e + 1):
                prod[k - e + j] = (prod[k - e + j] - c * modulus[j]) % p
    prod = prod[:e]
    return prod + [0] * (e - len(prod))


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], -1, p)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv_lead % p
        if c:
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % p
    return a[:db]


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Brute-force search for a monic factor of degree <= e/2."""
    e = len(modulus) - 1
    if e < 1 or modulus[-1] % p != 1:
        return False
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_poly_rem(list(modulus), list(low) + [1], p)):
                return False
    return True


def default_modulus(p: int, e: int) -> tuple[int, ...]:
    """First monic irreducible of degree ``e`` in base-p counting order."""
    for code in range(p ** e):
        low = [(code // p ** i) % p for i in range(e)]
        cand = tuple(low) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise InvalidConfiguration(f"no irreducible polynomial of degree {e} over F_{p}")


class FiniteField(BaseField):
    """F_p[t]/(modulus); payload ``code = sum(c_i * p**i)``.

    Multiplication and addition go through exp/log and Zech tables built at
    construction, so the field must be small (``q`` below about 10**6).
    """

    MAX_ORDER = 1 << 20

    def __init__(self, p: int, e: int, modulus: tuple[int, ...] | None = None):
        require_prime(p)
        if e < 1:
            raise InvalidConfiguration("extension degree must be at least 1")
        if p ** e > self.MAX_ORDER:
            raise InvalidConfiguration(f"F_{p}^{e} is too large for table arithmetic")
        self.explicit_modulus = modulus is not None
        if modulus is None:
            modulus = default_modulus(p, e)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != e + 1:
            raise InvalidConfiguration(f"modulus must have degree {e}")
        if modulus[-1] != 1:
            raise InvalidConfiguration("modulus must be monic")
        if not is_irreducible(modulus, p):
            raise InvalidConfiguration(f"modulus {_format_tpoly(list(modulus), p)} is reducible over F_{p}")
        self.p = self.char = p
        self.e = e
        self.q = p ** e
        self.modulus = modulus
        self._build_tables()

    def key(self):
        return ("fq", self.p, self.e, self.modulus)

    @property
    def descriptor(self) -> str:
        if self.explicit_modulus:
            return f"fq:{self.p}:{self.e}:{_format_tpoly(list(self.modulus), self.p)}"
        return f"fq:{self.p}:{self.e}"

    # coefficient vectors ------------------------------------------------
    def digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.e):
            a, d = divmod(a, p)
            out.append(d)
        return out

    def from_digits(self, ds) -> int:
        code, scale = 0, 1
        for d in ds:
            code += (d % self.p) * scale
            scale *= self.p
        return code

    def _build_tables(self):
        p, q = self.p, self.q
        order = q - 1
        gen_code = None
        for cand in range(1, q):
            x = [1] + [0] * (self.e - 1)
            g = self.digits(cand)
            seen = 0
            for k in range(1, order + 1):
                x = _poly_mulmod(x, g, self.modulus, p)
                if x == [1] + [0] * (self.e - 1):
                    seen = k
                    break
            if seen == order:
                gen_code = cand
                break
        if gen_code is None:
            raise InvalidConfiguration("no primitive element found")
        exp = [0] * order
        log = [None] * q
        x = [1] + [0] * (self.e - 1)
        g = self.digits(gen_code)
        for k in range(order):
            c = self.from_digits(x)
            exp[k] = c
            log[c] = k
            x = _poly_mulmod(x, g, self.modulus, p)
        # zech[k] = log(1 + g^k), None when 1 + g^k = 0
        zech = [None] * order
        for k in range(order):
            ds = self.digits(exp[k])
            ds[0] = (ds[0] + 1) % p
            s = self.from_digits(ds)
            zech[k] = log[s] if s else None
        self._exp, self._log, self._zech, self._order = exp, log, zech, order
        self.generator = gen_code

    # arithmetic --------------------------------------------------------
    def from_int(self, m):
        return m % self.p

    def add(self, a, b):
        if not a:
            return b
        if not b:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self._order]
        if z is None:
            return 0
        return self._exp[(la + z) % self._order]

    def neg(self, a):
        if not a or self.p == 2:
            return a
        return self.from_digits([-d for d in self.digits(a)])

    def mul(self, a, b):
        if not a or not b:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % self._order]

    def scale(self, a, c):
        c %= self.p
        if not c or not a:
            return 0
        return self.mul(a, c)

    def inv(self, a):
        if not a:
            raise NotInvertible("division by zero in F_q")
        return self._exp[(-self._log[a]) % self._order]

    def pow(self, a, e):
        if not a:
            if e < 0:
                raise NotInvertible("zero to a negative power")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self._order]

    def frobenius(self, a):
        return self.pow(a, self.p)

    def pth_root(self, a):
        return self.pow(a, self.p ** (self.e - 1))

    def gen(self) -> int:
        """The class of ``t``."""
        return self.from_digits([0, 1] + [0] * (self.e - 2)) if self.e > 1 else \
            (-self.modulus[0]) % self.p

    def format(self, a):
        return _format_tpoly(self.digits(a), self.p)


def _format_tpoly(ds: list[int], p: int, var: str = "t") -> str:
    parts = []
    for i in range(len(ds) - 1, -1, -1):
        c = ds[i] % p
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
            continue
        mono = var if i == 1 else f"{var}^{i}"
        parts.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(parts) if parts else "0"
