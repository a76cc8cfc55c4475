import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wittkit.perfrings import (FiniteField, NotAPthPower, NotInvertible, ParseError, PerfFrac,
                               PerfPoly, PrimeField, RingMismatch, default_modulus, frobenius,
                               is_irreducible, level, normalize_fraction, parse_element,
                               parse_ring, pth_root, random_element, ring_arith)
from wittkit.perfrings import dense
from wittkit.perfrings.maps import (UnsupportedMap, evaluation_map, field_inclusion,
                                    fraction_inclusion, frobenius_map, supported_maps)

F4 = "fq:2:2"


def test_arith_examples():
    R = parse_ring("perfpoly:fp:2:x")
    h = R("x^(1/2)")
    assert ring_arith("add", h, h).is_zero()
    R3 = parse_ring("perfpoly:fp:3:x")
    r = R3("x^(1/3)")
    assert ring_arith("mul", r, r * r) == R3("x")
    K = parse_ring("perffrac:fp:2:x")
    inv = ring_arith("inv", K("x"))
    assert str(inv) == "1/x"
    assert K.denominator(inv.payload) == K.numerator(K("x").payload)
    assert ring_arith("eq", K("x") * inv, K(1)) is True
    assert ring_arith("neg", K("x")) == K("x")


def test_half_exponent_rejected_in_char_3():
    R3 = parse_ring("perfpoly:fp:3:x")
    with pytest.raises(ParseError):
        R3("x^(1/2)")


def test_frobenius_examples():
    R = parse_ring("perfpoly:fp:2:x")
    assert frobenius(R("x^(1/2) + 1")) == R("x + 1")
    F = parse_ring("fq:2:2:t^2+t+1")
    w = F("t")
    assert frobenius(w) == w * w == F("t + 1")
    assert frobenius(F(0)).is_zero()


def test_pth_root_examples():
    R = parse_ring("perfpoly:fp:2:x")
    assert pth_root(R("x")) == R("x^(1/2)")
    with pytest.raises(NotAPthPower):
        pth_root(parse_ring("plainpoly:fp:2:x")("x"))
    F = parse_ring(F4)
    w = F("t")
    assert pth_root(w) == w * w
    # oracle: exhaust F_4 for the square root
    roots = [b for b in map(F.value, F.elements()) if b * b == w]
    assert roots == [pth_root(w)]


def test_normalize_examples():
    R = parse_ring("perfpoly:fp:2:x")
    assert normalize_fraction(R("x^(3/2)"), R("x^(1/2)")) == parse_ring("perffrac:fp:2:x")("x")
    assert normalize_fraction(R("x+1"), R("x+1")) == parse_ring("perffrac:fp:2:x")(1)
    half = normalize_fraction(R("x^(1/2)"), R(1))
    assert str(half) == "x^(1/2)"
    with pytest.raises(NotInvertible):
        normalize_fraction(R("x"), R(0))


def test_random_element_contract():
    F2 = parse_ring("fp:2")
    assert random_element(F2, 1) == random_element(F2, 1)
    R = parse_ring("perfpoly:fp:2:x")
    for seed in range(50):
        a = random_element(R, seed, (2, 2))
        assert a == random_element(R, seed, (2, 2))
        assert level(a) <= 2
        for exps, _ in R.terms(a.payload):
            assert all(0 <= e <= 2 and (e * 4).denominator == 1 for e in exps)


# fields ---------------------------------------------------------------------

@pytest.mark.parametrize("p,e", [(2, 1), (2, 2), (2, 3), (3, 2), (5, 2), (7, 1)])
def test_field_structure(p, e):
    F = parse_ring(f"fq:{p}:{e}") if e > 1 else parse_ring(f"fp:{p}")
    elems = [F.value(c) for c in F.elements()]
    assert len(elems) == p ** e
    nonzero = [a for a in elems if not a.is_zero()]
    for a in nonzero:
        assert a * a.inv() == F(1)
        assert a ** (p ** e - 1) == F(1)
    for a in elems:
        assert frobenius(pth_root(a)) == a == pth_root(frobenius(a))
        assert a * p == F(0) or F.char != p


def test_default_modulus_is_irreducible():
    for p, e in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)]:
        assert is_irreducible(default_modulus(p, e), p)
    assert default_modulus(2, 2) == (1, 1, 1)


def test_reducible_modulus_rejected():
    with pytest.raises(ParseError):
        parse_ring("fq:2:2:t^2+1")
    with pytest.raises(ParseError):
        parse_ring("fq:2:2:t^3+t+1")


@pytest.mark.parametrize("desc", ["", "fp:4", "fq:2", "perfpoly:fp:2", "foo:1", "fp:x",
                                  "perfpoly:fp:2:x,x"])
def test_bad_descriptors(desc):
    with pytest.raises(ParseError):
        parse_ring(desc)


def test_parse_errors():
    R = parse_ring("perfpoly:fp:2:x")
    for text in ["", "x +", "y", "x^(1/0)", "x $ 1", "(x", "x)"]:
        with pytest.raises(ParseError):
            R(text)


def test_mismatch():
    with pytest.raises(RingMismatch):
        parse_ring("fp:2")(1) + parse_ring("fp:3")(1)


# homomorphism and round-trip properties ---------------------------------------

CHAR_P = ["fp:2", "fp:3", "fq:2:2", "fq:3:2", "perfpoly:fp:2:x", "perfpoly:fp:3:x",
          "perfpoly:fq:2:2:x", "perfpoly:fp:2:x,y", "perffrac:fp:2:x", "perffrac:fp:3:x"]
seeds = st.integers(0, 2 ** 31)


@pytest.mark.parametrize("desc", CHAR_P)
@given(s1=seeds, s2=seeds)
def test_frobenius_is_ring_homomorphism(desc, s1, s2):
    R = parse_ring(desc)
    a, b = random_element(R, s1), random_element(R, s2)
    assert frobenius(a + b) == frobenius(a) + frobenius(b)
    assert frobenius(a * b) == frobenius(a) * frobenius(b)
    assert frobenius(a) == a ** R.char


@pytest.mark.parametrize("desc", CHAR_P)
@given(s=seeds)
def test_frobenius_bijective(desc, s):
    a = random_element(parse_ring(desc), s)
    assert frobenius(pth_root(a)) == a
    assert pth_root(frobenius(a)) == a


@pytest.mark.parametrize("desc", ["perfpoly:fp:2:x", "perfpoly:fp:3:x", "perffrac:fp:2:x"])
@given(s=seeds)
def test_frobenius_lowers_level(desc, s):
    a = random_element(parse_ring(desc), s, (3, 2))
    assert level(frobenius(a)) <= max(level(a) - 1, 0)
    assert level(pth_root(a)) <= level(a) + 1


@pytest.mark.parametrize("desc", CHAR_P + ["int", "plainpoly:fp:2:x"])
@given(s=seeds)
def test_text_round_trip(desc, s):
    R = parse_ring(desc)
    a = random_element(R, s)
    assert parse_element(R, str(a)) == a
    assert str(parse_element(R, str(a))) == str(a)


@pytest.mark.parametrize("desc", ["perffrac:fp:2:x", "perffrac:fp:3:x", "perffrac:fq:2:2:x"])
@given(s1=seeds, s2=seeds)
def test_fraction_field_laws(desc, s1, s2):
    K = parse_ring(desc)
    a, b = random_element(K, s1), random_element(K, s2)
    if not b.is_zero():
        assert (a / b) * b == a
    # normal form: equal values share one payload
    assert (a + b) - b == a and ((a + b) - b).payload == a.payload


@given(s1=seeds, s2=seeds, k=st.integers(0, 3))
def test_normalize_independent_of_level(s1, s2, k):
    R = parse_ring("perfpoly:fp:2:x")
    num, den = random_element(R, s1), random_element(R, s2)
    if den.is_zero():
        return
    q = normalize_fraction(num, den)
    # rescaling both by a Frobenius power does not change the class after a matching root
    num2, den2 = num, den
    for _ in range(k):
        num2, den2 = frobenius(num2), frobenius(den2)
    q2 = normalize_fraction(num2, den2)
    for _ in range(k):
        q2 = pth_root(q2)
    assert q == q2
    K = q.ring
    assert normalize_fraction(R.value(K.numerator(q.payload)), R.value(K.denominator(q.payload))) == q


def test_descriptor_interning():
    assert parse_ring("perfpoly:fp:2:x") is parse_ring("perfpoly:fp:2:x")
    assert parse_ring("fq:2:2") == parse_ring("fq:2:2:t^2+t+1")


# maps -------------------------------------------------------------------------

def test_maps():
    F2, F4r = parse_ring("fp:2"), parse_ring(F4)
    inc = field_inclusion(F2, F4r)
    assert inc(F2(1)) == F4r(1)
    with pytest.raises(RingMismatch):
        inc(F4r(1))
    R = parse_ring("perfpoly:fp:2:x")
    ev = evaluation_map(R, 1)
    assert ev(R("x^(1/2) + x")) == F2(0)
    assert fraction_inclusion(R)(R("x")) == parse_ring("perffrac:fp:2:x")("x")
    assert frobenius_map(R)(R("x")) == R("x^2")
    with pytest.raises(UnsupportedMap):
        field_inclusion(parse_ring("fp:3"), F4r)
    assert supported_maps(R)


# dense multiplication ---------------------------------------------------------

def naive(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + int(x) * int(y)) % p
    return out


@pytest.mark.parametrize("n", [1, 5, 47, 48, 200, 511, 512, 1500])
@pytest.mark.parametrize("p", [2, 3, 5, 251])
def test_dense_mul_paths(n, p):
    rng = np.random.default_rng(n * 1000 + p)
    a = rng.integers(0, p, n, dtype=np.int64)
    b = rng.integers(0, p, n + 3, dtype=np.int64)
    got = dense.trim(dense.mul(a, b, p))
    want = dense.trim(np.array(naive(a, b, p), dtype=np.int64))
    assert np.array_equal(got, want)
