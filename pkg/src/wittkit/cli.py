"""Command-line front end.

Exit codes: 0 success, 2 usage or configuration, 3 parse error, 4 semantic
mismatch, 5 suite failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .config import InvalidConfiguration, ResourceLimitError, configure, get_settings, require_prime
from .harness import (R1, R2, MonomialSemigroup, cotangent_dimension, semigroup_membership)
from .perfrings.base import (CharacteristicError, NotAPthPower, NotInvertible, Ring,
                             RingMismatch, RingValue)
from .perfrings.fields import Integers
from .perfrings.grammar import ParseError, parse_ring
from .suites import SUITES, run_suites
from .wittcore import (WittVec, format_witt, from_representation, p_order, random_witt,
                       teichmuller, verschiebung, witt_from_integer, witt_frobenius, witt_mul,
                       witt_representation, witt_to_json)
from .wittpoly import format_polynomial, structure_polynomials, structure_to_json

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_MISMATCH, EXIT_SUITE = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


# Witt expressions -------------------------------------------------------------

class WittExpr:
    """``expr := term (('+'|'-') term)*``, ``term := unary ('*' unary)*``,
    ``unary := '-' unary | atom`` and atoms are ``[c0,...]``, integers,
    ``teich(elem)``, ``frob(expr)``, ``versch(expr)`` or ``(expr)``."""

    FUNCS = ("teich", "frob", "versch")

    def __init__(self, text: str, p: int, n: int, ring: Ring):
        self.s = text
        self.i = 0
        self.p, self.n, self.ring = p, n, ring

    def parse(self) -> WittVec:
        out = self.expr()
        self.ws()
        if self.i != len(self.s):
            raise ParseError(f"unexpected {self.s[self.i]!r} at {self.i}")
        return out

    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.ws()
        return self.s[self.i] if self.i < len(self.s) else ""

    def take(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise ParseError(f"expected {ch!r} at {self.i}, found {found!r}")
        self.i += 1

    def expr(self) -> WittVec:
        acc = self.term()
        while self.peek() in ("+", "-"):
            op = self.s[self.i]
            self.i += 1
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> WittVec:
        acc = self.unary()
        while self.peek() == "*":
            self.i += 1
            acc = witt_mul(acc, self.unary())
        return acc

    def unary(self) -> WittVec:
        if self.peek() == "-":
            self.i += 1
            return -self.unary()
        return self.atom()

    def _balanced(self, close: str) -> str:
        """Raw text up to the matching ``close`` at depth zero (consumed)."""
        depth = 0
        start = self.i
        while self.i < len(self.s):
            ch = self.s[self.i]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0 and close == ")":
                    break
                depth -= 1
            elif ch == close and depth == 0:
                break
            self.i += 1
        if self.i >= len(self.s):
            raise ParseError(f"missing {close!r}")
        text = self.s[start:self.i]
        self.i += 1
        return text

    def element(self, text: str) -> RingValue:
        return RingValue(self.ring, self.ring.parse(text))

    def atom(self) -> WittVec:
        ch = self.peek()
        if ch == "[":
            self.i += 1
            body = self._balanced("]")
            parts = _split_commas(body)
            if len(parts) != self.n:
                raise RingMismatch(f"literal has {len(parts)} coordinates, ring has n={self.n}")
            return WittVec(self.p, self.n, self.ring, [self.element(c) for c in parts])
        if ch == "(":
            self.i += 1
            inner = self.expr()
            self.take(")")
            return inner
        if ch.isdigit():
            start = self.i
            while self.i < len(self.s) and self.s[self.i].isdigit():
                self.i += 1
            return witt_from_integer(int(self.s[start:self.i]), self.p, self.n, self.ring)
        for name in self.FUNCS:
            if self.s.startswith(name, self.i):
                self.i += len(name)
                self.take("(")
                if name == "teich":
                    return teichmuller(self.element(self._balanced(")")), self.n)
                inner = self.expr()
                self.take(")")
                return witt_frobenius(inner) if name == "frob" else verschiebung(inner)
        raise ParseError(f"unexpected {ch or 'end of input'!r} at {self.i}")


def _split_commas(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
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
    return [x.strip() for x in parts]


def _witt_params(args) -> tuple[int, int, Ring]:
    try:
        ring = parse_ring(args.ring)
    except ParseError as exc:
        raise UsageError(f"bad --ring: {exc}") from exc
    p = args.p
    if isinstance(ring, Integers):
        if p is None:
            raise UsageError("--p is required over int")
    elif p is None:
        p = ring.char
    elif p != ring.char:
        raise UsageError(f"--p {p} does not match the characteristic of {ring}")
    require_prime(p)
    if args.n is None or args.n < 1:
        raise UsageError("--n must be a positive integer")
    structure_polynomials(p, args.n)  # cap check before parsing
    return p, args.n, ring


# subcommands ------------------------------------------------------------------

def cmd_gen_structure(args, out) -> int:
    if args.p is None or args.n is None:
        raise UsageError("--p and --n are required")
    ws = structure_polynomials(require_prime(args.p), args.n)
    if args.format == "json":
        out.write(structure_to_json(ws) + "\n")
        return EXIT_OK
    for label, polys in (("S", ws.sum_polys), ("P", ws.prod_polys), ("N", ws.neg_polys)):
        for k, poly in enumerate(polys):
            out.write(f"{label}{k} = {format_polynomial(poly)}\n")
    return EXIT_OK


def cmd_compute(args, out) -> int:
    p, n, ring = _witt_params(args)
    x = WittExpr(args.expression, p, n, ring).parse()
    out.write((witt_to_json(x) if args.format == "json" else format_witt(x)) + "\n")
    return EXIT_OK


def cmd_repr(args, out) -> int:
    p, n, ring = _witt_params(args)
    x = WittExpr(args.expression, p, n, ring).parse()
    r = witt_representation(x)
    back = from_representation(r)
    out.write(f"x = {format_witt(x)}\n")
    out.write("r = (" + ",".join(ring.format(c) for c in r.coeffs) + ")\n")
    out.write(f"sum p^i [r_i] = x: {back == x}\n")
    return EXIT_OK if back == x else EXIT_SUITE


def cmd_verify(args, out) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for result in run_suites(names, args.seed):
        out.write(result.report() + "\n")
        out.flush()
        ok = ok and result.ok
    out.write(f"seed {args.seed}: {'all suites pass' if ok else 'FAILURES'}\n")
    return EXIT_OK if ok else EXIT_SUITE


def demo_deformation(args, out) -> int:
    primes = [args.p] if args.p else [2, 3, 5]
    out.write(f"R1 = Z_p[[x,y]]/(xy)      presentation {R1}\n")
    out.write(f"R2 = Z_p[[x,y]]/(p - xy)  presentation {R2}\n")
    for p in primes:
        require_prime(p)
        q1, q2 = R1.mod_p(p), R2.mod_p(p)
        d1, d2 = cotangent_dimension(R1, p), cotangent_dimension(R2, p)
        same = "same" if q1 == q2 else "different"
        out.write(f"p={p}: R1/p = F_{p}[[x,y]]/({', '.join(q1)}), "
                  f"R2/p = F_{p}[[x,y]]/({', '.join(q2)}) ({same} special fibre)\n")
        verdict = "deformations differ" if d1 != d2 else "not distinguished"
        out.write(f"p={p}: dim m/m²: R1 = {d1}, R2 = {d2} — {verdict}\n")
    return EXIT_OK


def demo_heitmann(args, out) -> int:
    bound = args.bound if args.bound is not None else get_settings().harness.search_bound
    S = MonomialSemigroup(search_bound=bound)
    out.write("R = K[x^2, x^3, y, x^2/y, x^3/y] (exponent generators "
              + ", ".join(str(g) for g in S.generators) + f"), search bound {bound}\n")
    results = []
    for v in ((1, 0), (2, 0), (3, 0)):
        res = semigroup_membership(S, v)
        results.append(f"({v[0]},{v[1]}): {res.name}")
        detail = str(res) if res.name == "Member" else \
            (res.certificate.describe() if res.name == "NonMemberProven" else "")
        out.write(f"  x^{v[0]}: {detail}\n")
    out.write("; ".join(results) + "\n")
    out.write("x is not in R, and it is integral over R: "
              "integrality witness T² − x² with x² ∈ R\n")
    return EXIT_OK


def demo_dvr(args, out) -> int:
    import random
    n = 4
    K = parse_ring("perffrac:fp:2:x")
    rng = random.Random(f"dvr:{args.seed}")
    samples = [random_witt(2, n, K, rng, size=(1, 1), order=k, density=0.7) for k in range(n)]
    out.write(f"W_{n}(Frac(F_2[x]^perf)): p_order of products, x_k has p_order k\n")
    for k, x in enumerate(samples):
        out.write(f"  x_{k} = {format_witt(x)}\n")
    out.write("      " + " ".join(f"x_{k}" for k in range(n)) + "\n")
    violations = 0
    for a, x in enumerate(samples):
        row = []
        for b, y in enumerate(samples):
            o = p_order(witt_mul(x, y))
            expected = min(a + b, n)
            if o != expected:
                violations += 1
            row.append(f"{o:>3}")
        out.write(f"  x_{a} " + " ".join(row) + "\n")
    out.write(f"p_order(x*y) = p_order(x) + p_order(y) (capped at {n}): "
              f"{'no violations' if not violations else f'{violations} violations'}\n")
    return EXIT_OK if not violations else EXIT_SUITE


DEMOS = {"deformation": demo_deformation, "heitmann": demo_heitmann, "dvr": demo_dvr}


def cmd_demo(args, out) -> int:
    return DEMOS[args.name](args, out)


# argument parsing -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wittkit",
                                     description="Truncated Witt vectors over perfect rings.")
    parser.add_argument("--cache-dir", help="persist structure sets here (overrides WITT_CACHE_DIR)")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-structure", help="print the structure polynomials S, P, N")
    g.add_argument("--p", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--format", choices=("text", "json"), default="text")
    g.set_defaults(func=cmd_gen_structure)

    for name, func, helptext in (("compute", cmd_compute, "evaluate a Witt expression"),
                                 ("repr", cmd_repr, "Witt representation of an expression")):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("--ring", required=True)
        c.add_argument("--p", type=int)
        c.add_argument("--n", type=int, required=True)
        c.add_argument("--format", choices=("text", "json"), default="text")
        c.add_argument("expression")
        c.set_defaults(func=func)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    v.add_argument("--seed", type=int, default=get_settings().harness.seed)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("demo", help="replay a worked example")
    d.add_argument("name", choices=sorted(DEMOS))
    d.add_argument("--p", type=int)
    d.add_argument("--bound", type=int)
    d.add_argument("--seed", type=int, default=get_settings().harness.seed)
    d.set_defaults(func=cmd_demo)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.cache_dir:
        configure(cache_dir=args.cache_dir)
    err = sys.stderr
    try:
        return args.func(args, out)
    except (InvalidConfiguration, ResourceLimitError, UsageError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (RingMismatch, NotAPthPower, NotInvertible, CharacteristicError, ValueError,
            TypeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
