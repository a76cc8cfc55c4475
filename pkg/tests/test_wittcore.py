import json
import random

import pytest
from hypothesis import given, strategies as st

from wittkit.config import InvalidConfiguration
from wittkit.perfrings import (CharacteristicError, NotAPthPower, RingMismatch, frobenius,
                               parse_ring, random_element)
from wittkit.perfrings.maps import (constant_inclusion, evaluation_map, field_inclusion,
                                    fraction_inclusion, frobenius_map)
from wittkit.wittcore import (WittMismatch, WittPolynomial, WittRepr, WittVec,
                              divisibility_witness, format_witt, from_representation, ghost_map,
                              is_divisible, one, p_order, parse_witt, poly_lift, project,
                              random_witt, search_divisibility_witness, teichmuller, truncate,
                              verschiebung, witt_frobenius, witt_from_integer, witt_from_json,
                              witt_map, witt_mul, witt_neg, witt_op_reference,
                              witt_representation, witt_to_json, zero)

F2 = parse_ring("fp:2")
F4 = parse_ring("fq:2:2")
Z = parse_ring("int")
seeds = st.integers(0, 2 ** 31)


def W(p, ring, *coords):
    return WittVec(p, len(coords), ring, coords)


# examples ---------------------------------------------------------------------

def test_w2_f2_examples():
    # oracle: W_2(F_2) is Z/4 with 1 = (1,0), 2 = (0,1), 3 = (1,1)
    assert W(2, F2, 1, 0) + W(2, F2, 1, 0) == W(2, F2, 0, 1)
    assert W(2, F2, 0, 1) + W(2, F2, 0, 1) == zero(2, 2, F2)
    assert witt_neg(W(2, F2, 1, 0)) == W(2, F2, 1, 1)
    x = W(2, F2, 1, 1)
    assert x * one(2, 2, F2) == x


def test_from_integer_examples():
    assert witt_from_integer(2, 2, 2, F2) == W(2, F2, 0, 1)
    assert witt_from_integer(4, 2, 2, F2) == zero(2, 2, F2)
    assert witt_from_integer(0, 3, 3, parse_ring("fp:3")).is_zero()
    assert witt_from_integer(-1, 2, 2, F2) == W(2, F2, 1, 1)


def test_ghost_examples():
    assert ghost_map(W(2, Z, 1, 1)) == [1, 3]
    assert ghost_map(W(3, Z, 2, 1)) == [2, 11]
    assert ghost_map(zero(5, 3, Z)) == [0, 0, 0]
    with pytest.raises(CharacteristicError):
        ghost_map(W(2, F2, 1))


def test_projection_and_teichmuller_examples():
    w = F4("t")
    assert project(W(2, F4, w, F4(1))) == w
    assert teichmuller(F4(1), 3) == one(2, 3, F4)
    R = parse_ring("perfpoly:fp:2:x")
    h = teichmuller(R("x^(1/2)"), 3)
    assert h * h == teichmuller(R("x"), 3)
    with pytest.raises(CharacteristicError):
        teichmuller(Z(3), 2)


def test_verschiebung_examples():
    assert verschiebung(W(2, F2, 1, 1)) == W(2, F2, 0, 1)
    assert verschiebung(zero(2, 3, F2)).is_zero()


def test_frobenius_examples():
    assert witt_frobenius(W(2, F2, 1, 1)) == W(2, F2, 1, 1)
    a = F4("t")
    assert witt_frobenius(teichmuller(a, 2)) == teichmuller(a ** 2, 2)
    with pytest.raises(CharacteristicError):
        witt_frobenius(W(2, Z, 1))


def test_representation_examples():
    w = F4("t")
    r = witt_representation(W(2, F4, w, w))
    assert r.values == (w, w * w)
    # [w] + 2[w^2] rebuilt by hand
    two = witt_from_integer(2, 2, 2, F4)
    assert teichmuller(w, 2) + two * teichmuller(w * w, 2) == W(2, F4, w, w)
    assert witt_representation(teichmuller(w, 3)).values == (w, F4(0), F4(0))
    P = parse_ring("plainpoly:fp:2:x")
    with pytest.raises(NotAPthPower):
        witt_representation(W(2, P, 0, "x"))


def test_from_representation_examples():
    a = F4("t+1")
    assert from_representation([a, F4(0), F4(0)], 2, 3, F4) == teichmuller(a, 3)
    assert from_representation([F4(0), F4(1), F4(0)], 2, 3, F4) == verschiebung(one(2, 3, F4))
    with pytest.raises(ValueError):
        from_representation([a], 2, 3)


def test_p_order_examples():
    assert p_order(W(2, F2, 0, 0, 1)) == 2
    assert p_order(zero(2, 3, F2)) == 3


def test_witt_map_examples():
    inc = field_inclusion(F2, F4)
    assert witt_map(inc, W(2, F2, 1, 1)) == W(2, F4, 1, 1)
    with pytest.raises(RingMismatch):
        witt_map(inc, W(2, F4, 1, 1))


def test_poly_lift_examples():
    R = parse_ring("perfpoly:fp:2:x")
    onev = one(2, 3, F2)
    assert poly_lift(WittPolynomial(("x",), {(1,): onev}), R) == teichmuller(R("x"), 3)
    two = witt_from_integer(2, 2, 3, F2)
    assert poly_lift(WittPolynomial.constant(two, ("x",)), R) == witt_from_integer(2, 2, 3, R)
    with pytest.raises(ValueError):
        poly_lift(WittPolynomial(("y",), {(1,): onev}), R)


def test_truncate_examples():
    x = W(2, F4, 1, "t", 0)
    assert truncate(x, 3) == x
    assert truncate(teichmuller(F4("t"), 3), 2) == teichmuller(F4("t"), 2)
    with pytest.raises(ValueError):
        truncate(x, 4)


def test_validation():
    with pytest.raises(WittMismatch):
        W(2, F2, 1) + W(2, F2, 1, 0)
    with pytest.raises(CharacteristicError):
        W(3, F2, 1)
    with pytest.raises(InvalidConfiguration):
        WittVec(2, 0, F2, [])
    with pytest.raises(ValueError):
        WittVec(2, 2, F2, [1])


# properties ------------------------------------------------------------------

RINGS = {
    "fp:2": 4, "fp:3": 3, "fq:2:2": 3, "fq:3:2": 2, "perfpoly:fp:2:x": 3,
    "perfpoly:fp:3:x": 3, "perffrac:fp:2:x": 3, "perfpoly:fp:2:x,y": 2, "int": 3,
}
LENGTHS = dict(RINGS, **{"perffrac:fp:3:x": 2, "perffrac:fq:2:2:x": 2})


def rand_vec(desc, seed, order=0):
    R = parse_ring(desc)
    p = R.char or 3
    rng = random.Random(seed)
    if not R.char:
        return WittVec(p, LENGTHS[desc], R, [rng.randint(-9, 9) for _ in range(LENGTHS[desc])])
    return random_witt(p, LENGTHS[desc], R, rng, (1, 2), order=order)


@pytest.mark.parametrize("desc", list(RINGS))
@given(s1=seeds, s2=seeds, s3=seeds)
def test_ring_axioms(desc, s1, s2, s3):
    x, y, z = rand_vec(desc, s1), rand_vec(desc, s2), rand_vec(desc, s3)
    o, zr = one(x.p, x.n, x.ring), zero(x.p, x.n, x.ring)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x and x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert x + zr == x and x * o == x
    assert (x + -x).is_zero()


@given(s1=seeds, s2=seeds)
def test_ghost_intertwines(s1, s2):
    x, y = rand_vec("int", s1), rand_vec("int", s2)
    gx, gy = ghost_map(x), ghost_map(y)
    assert ghost_map(x + y) == [a + b for a, b in zip(gx, gy)]
    assert ghost_map(x * y) == [a * b for a, b in zip(gx, gy)]
    assert ghost_map(-x) == [-a for a in gx]


@pytest.mark.parametrize("desc", ["fq:2:2", "perfpoly:fp:2:x", "perfpoly:fp:3:x", "perffrac:fp:2:x"])
@given(s=seeds)
def test_p_times_teichmuller_is_shift(desc, s):
    R = parse_ring(desc)
    a = random_element(R, s, (1, 2))
    n = 3
    pa = witt_from_integer(R.char, R.char, n, R) * teichmuller(a, n)
    assert pa == verschiebung(teichmuller(frobenius(a), n))
    assert project(pa).is_zero()


@pytest.mark.parametrize("desc", ["fq:2:2", "perfpoly:fp:3:x", "perffrac:fp:2:x"])
@given(s1=seeds, s2=seeds)
def test_projection_is_multiplicative(desc, s1, s2):
    x, y = rand_vec(desc, s1), rand_vec(desc, s2)
    assert project(x * y) == project(x) * project(y)
    assert project(x + y) == project(x) + project(y)


@pytest.mark.parametrize("desc", ["perfpoly:fp:2:x", "perfpoly:fp:3:x", "fq:3:2"])
@given(s=seeds, order=st.integers(0, 1))
def test_p_order_shift(desc, s, order):
    x = rand_vec(desc, s, order)
    px = witt_from_integer(x.p, x.p, x.n, x.ring) * x
    if p_order(x) < x.n - 1:
        assert p_order(px) == p_order(x) + 1


@pytest.mark.parametrize("desc", ["fq:2:2", "perfpoly:fp:2:x", "perfpoly:fp:3:x", "perffrac:fp:2:x"])
@given(s=seeds)
def test_representation_round_trip(desc, s):
    x = rand_vec(desc, s)
    r = witt_representation(x)
    assert from_representation(r) == x
    assert isinstance(r, WittRepr)


@pytest.mark.parametrize("desc", ["fp:3", "fq:2:2", "perfpoly:fp:2:x", "perffrac:fp:3:x"])
@given(s1=seeds, s2=seeds, m=st.integers(1, 3))
def test_truncation_commutes(desc, s1, s2, m):
    x, y = rand_vec(desc, s1), rand_vec(desc, s2)
    m = min(m, x.n)
    assert truncate(x + y, m) == truncate(x, m) + truncate(y, m)
    assert truncate(x * y, m) == truncate(x, m) * truncate(y, m)
    assert truncate(witt_frobenius(x), m) == witt_frobenius(truncate(x, m))


@pytest.mark.parametrize("desc", ["fp:2", "fq:3:2", "perfpoly:fp:2:x", "perffrac:fp:2:x"])
@given(s1=seeds, s2=seeds)
def test_witt_frobenius_is_homomorphism(desc, s1, s2):
    x, y = rand_vec(desc, s1), rand_vec(desc, s2)
    F = witt_frobenius
    assert F(x + y) == F(x) + F(y)
    assert F(x * y) == F(x) * F(y)
    assert p_order(F(x) - x ** x.p) >= 1


@given(s=seeds)
def test_frobenius_map_matches_witt_frobenius(s):
    x = rand_vec("perfpoly:fp:2:x", s)
    assert witt_map(frobenius_map(x.ring), x) == witt_frobenius(x)


@pytest.mark.parametrize("factory,src", [
    (lambda R: fraction_inclusion(R), "perfpoly:fp:2:x"),
    (lambda R: evaluation_map(R, 1), "perfpoly:fp:2:x"),
    (lambda R: constant_inclusion(parse_ring("perfpoly:fq:2:2:x")), "fq:2:2"),
])
@given(s1=seeds, s2=seeds)
def test_witt_map_is_homomorphism(factory, src, s1, s2):
    x, y = rand_vec(src, s1), rand_vec(src, s2)
    phi = factory(x.ring)
    assert witt_map(phi, x + y) == witt_map(phi, x) + witt_map(phi, y)
    assert witt_map(phi, x * y) == witt_map(phi, x) * witt_map(phi, y)
    assert project(witt_map(phi, x)) == phi(project(x))


@given(s=seeds)
def test_poly_lift_reduces_mod_p(s):
    rng = random.Random(s)
    R = parse_ring("perfpoly:fq:2:2:x,y")
    terms = {}
    for _ in range(3):
        e = (rng.randint(0, 2), rng.randint(0, 2))
        if sum(e) <= 2:
            terms[e] = random_witt(2, 3, F4, rng)
    if not terms:
        return
    f = WittPolynomial(("x", "y"), terms)
    assert project(poly_lift(f, R)) == f.reduce(R)


@pytest.mark.parametrize("desc", ["fq:2:2", "perfpoly:fp:2:x"])
@given(s=seeds, i=st.integers(0, 3))
def test_divisibility_witness(desc, s, i):
    x = rand_vec(desc, s, order=s % 4)
    y = divisibility_witness(x, i)
    assert (y is not None) == is_divisible(x, i)
    if y is not None:
        assert witt_from_integer(x.p ** i, x.p, x.n, x.ring) * y == x


def test_search_agrees_on_small_ring():
    for coords in [(0, 0, 1), (1, 0, 0), (0, 1, 1), (0, 0, 0)]:
        x = W(2, F2, *coords)
        for i in range(4):
            assert (search_divisibility_witness(x, i) is not None) == (p_order(x) >= i)


# fast path against the slow reference ----------------------------------------

@pytest.mark.parametrize("desc", ["perffrac:fp:2:x", "perffrac:fp:3:x", "perffrac:fq:2:2:x",
                                  "perfpoly:fp:2:x", "fq:3:2"])
@given(s1=seeds, s2=seeds)
def test_fast_path_matches_reference(desc, s1, s2):
    x, y = rand_vec(desc, s1), rand_vec(desc, s2)
    assert witt_op_reference("add", x, y) == x + y
    assert witt_op_reference("mul", x, y) == x * y
    assert witt_op_reference("neg", x) == -x
    assert witt_op_reference("mul", x, y, exact=True) == witt_mul(x, y)


# text and JSON ---------------------------------------------------------------

def test_text_example():
    x = parse_witt("W(p=2,n=3;fq:2:1)[1,0,1]")
    assert format_witt(x) == "W(p=2,n=3;fq:2:1)[1,0,1]"
    assert p_order(x) == 0 and x.n == 3


@pytest.mark.parametrize("desc", list(RINGS))
@given(s=seeds)
def test_text_and_json_round_trip(desc, s):
    x = rand_vec(desc, s)
    assert parse_witt(format_witt(x)) == x
    assert format_witt(parse_witt(format_witt(x))) == format_witt(x)
    doc = witt_to_json(x)
    assert witt_from_json(doc) == x
    assert set(json.loads(doc)) == {"p", "n", "ring", "coords"}


def test_parse_witt_errors():
    from wittkit.perfrings import ParseError
    for bad in ["W(p=2,n=2;fp:2)[1]", "W(p=2;fp:2)[1]", "[1,0]", "W(p=2,n=1;fp:2)[x]"]:
        with pytest.raises((ParseError, ValueError)):
            parse_witt(bad)
