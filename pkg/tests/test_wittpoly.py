import json
import random

import pytest
from hypothesis import given, strategies as st

from wittkit.config import InvalidConfiguration, ResourceLimitError
from wittkit.perfrings import parse_ring, random_element
from wittkit.wittpoly import (IntPolynomial, InvariantBreach, compute_structure,
                              evaluate_structure, format_polynomial, ghost_polynomial,
                              polynomial_from_records, polynomial_to_records,
                              structure_from_json, structure_polynomials, structure_to_json,
                              verify_ghost_identities, _Builder)

X = IntPolynomial.variable


def poly(text_terms):
    """Build from ``[(coeff, {"X0": 1, ...}), ...]``."""
    return polynomial_from_records([{"coeff": str(c), "exps": e} for c, e in text_terms])


# ghost polynomials --------------------------------------------------------

def test_ghost_examples():
    assert ghost_polynomial(2, 0) == X("X0")
    assert ghost_polynomial(2, 2) == X("X0") ** 4 + 2 * X("X1") ** 2 + 4 * X("X2")
    assert ghost_polynomial(3, 1) == X("X0") ** 3 + 3 * X("X1")


@pytest.mark.parametrize("p,k", [(2, 0), (2, 5), (3, 3), (5, 2), (7, 1)])
def test_ghost_has_k_plus_one_terms(p, k):
    assert len(ghost_polynomial(p, k)) == k + 1


def test_ghost_rejects_composite():
    with pytest.raises(InvalidConfiguration):
        ghost_polynomial(4, 1)


# structure polynomials: hand-solved ghost identities ----------------------

def test_sum_p2_n2():
    # w_1: S0^2 + 2 S1 = X0^2 + 2X1 + Y0^2 + 2Y1 with S0 = X0 + Y0
    ws = structure_polynomials(2, 2)
    assert ws.sum_polys[0] == X("X0") + X("Y0")
    assert ws.sum_polys[1] == X("X1") + X("Y1") - X("X0") * X("Y0")


def test_product_p2_n2():
    ws = structure_polynomials(2, 2)
    expected = X("X0") ** 2 * X("Y1") + X("X1") * X("Y0") ** 2 + 2 * X("X1") * X("Y1")
    assert ws.prod_polys[1] == expected


def test_sum_p3_n2():
    ws = structure_polynomials(3, 2)
    x0, y0 = X("X0"), X("Y0")
    assert ws.sum_polys[1] == X("X1") + X("Y1") - x0 ** 2 * y0 - x0 * y0 ** 2


def test_negation_p2_n2():
    assert structure_polynomials(2, 2).neg_polys[1] == -X("X0") ** 2 - X("X1")


@pytest.mark.parametrize("p,n", [(3, 4), (5, 3)])
def test_odd_negation_is_coordinatewise(p, n):
    ws = structure_polynomials(p, n)
    assert all(ws.neg_polys[k] == -X(f"X{k}") for k in range(n))


def test_length_one():
    ws = structure_polynomials(2, 1)
    assert ws.sum_polys == (X("X0") + X("Y0"),)
    assert ws.prod_polys == (X("X0") * X("Y0"),)
    assert ws.neg_polys == (-X("X0"),)


def test_term_counts_p2():
    # counts recorded when the builder was first validated
    ws = structure_polynomials(2, 6)
    assert [len(q) for q in ws.sum_polys] == [2, 3, 8, 40, 454, 12576]
    assert [len(q) for q in ws.prod_polys] == [1, 3, 9, 51, 710, 25400]


@pytest.mark.parametrize("p,n", [(2, 4), (3, 3), (5, 2)])
def test_ghost_identities_verified(p, n):
    verify_ghost_identities(structure_polynomials(p, n))


def test_variable_scope():
    ws = structure_polynomials(3, 4)
    for k in range(4):
        assert ws.sum_polys[k].max_variable() <= 2 * k + 1
        assert ws.prod_polys[k].max_variable() <= 2 * k + 1
        assert all(v % 2 == 0 for v in ws.neg_polys[k].variables())


@pytest.mark.parametrize("p,n", [(2, 6), (3, 5), (5, 4)])
def test_prefix_stability(p, n):
    ws = structure_polynomials(p, n)
    for m in range(1, n):
        assert structure_polynomials(p, m) == ws.prefix(m)


def test_cached_equals_fresh():
    assert compute_structure(2, 4) == structure_polynomials(2, 4)


def test_cap_enforced():
    with pytest.raises(ResourceLimitError):
        structure_polynomials(2, 7)
    with pytest.raises(ResourceLimitError):
        structure_polynomials(7, 4)


def test_inexact_division_is_a_breach():
    b = _Builder(2)
    b.extend(1)
    # S_0^2 is not congruent to X0 + Y0 mod 2, so solving for S_1 cannot divide evenly
    with pytest.raises(InvariantBreach):
        b._solve("S", 1, X("X0") + X("Y0"))


def test_exact_div_reports_remainder():
    with pytest.raises(InvariantBreach):
        (3 * X("X0") + 2).exact_div(2)
    assert (4 * X("X0") + 2).exact_div(2) == 2 * X("X0") + 1


def test_tampered_set_fails_verification():
    from wittkit.wittpoly import WittStructureSet
    ws = structure_polynomials(2, 3)
    bad = WittStructureSet(2, 3, ws.sum_polys[:2] + (ws.sum_polys[2] + 2,), ws.prod_polys,
                           ws.neg_polys)
    with pytest.raises(InvariantBreach):
        verify_ghost_identities(bad)


# formatting and JSON --------------------------------------------------------

def test_format():
    ws = structure_polynomials(2, 2)
    assert format_polynomial(ws.sum_polys[1]) == "X1 + Y1 - X0*Y0"
    assert format_polynomial(ws.prod_polys[1]) == "2*X1*Y1 + X1*Y0^2 + X0^2*Y1"
    assert format_polynomial(ws.neg_polys[1]) == "-X1 - X0^2"
    assert format_polynomial(ghost_polynomial(2, 2)) == "4*X2 + 2*X1^2 + X0^4"


def test_json_shape_and_decimal_strings():
    doc = json.loads(structure_to_json(structure_polynomials(2, 2)))
    assert set(doc) == {"p", "n", "S", "P", "N"}
    assert doc["S"][0] == [{"coeff": "1", "exps": {"X0": 1}}, {"coeff": "1", "exps": {"Y0": 1}}]
    for kind in "SPN":
        for rec in doc[kind][1]:
            assert isinstance(rec["coeff"], str)


@pytest.mark.parametrize("p,n", [(2, 5), (3, 3)])
def test_json_round_trip(p, n):
    ws = structure_polynomials(p, n)
    text = structure_to_json(ws)
    assert structure_from_json(text) == ws
    assert structure_to_json(structure_from_json(text)) == text


def test_records_reject_float_coefficients():
    with pytest.raises(ValueError):
        polynomial_from_records([{"coeff": 1.0, "exps": {"X0": 1}}])


def test_disk_cache(tmp_path, monkeypatch):
    from wittkit import config, wittpoly
    old = config.get_settings()
    config.configure(cache_dir=str(tmp_path))
    try:
        wittpoly._sets.pop((3, 2), None)
        ws = structure_polynomials(3, 2)
        path = tmp_path / "structure_p3_n2.json"
        assert path.exists()
        wittpoly._sets.pop((3, 2), None)
        assert structure_polynomials(3, 2) == ws
    finally:
        config.configure(cache_dir=old.cache_dir)


# arithmetic ---------------------------------------------------------------

small = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)),
                        st.integers(-5, 5), max_size=4)


def from_dict(d):
    return IntPolynomial.from_exponents(((e0, e1), c) for (e0, e1), c in d.items())


@given(small, small, small)
def test_ring_laws(a, b, c):
    a, b, c = from_dict(a), from_dict(b), from_dict(c)
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a).is_zero()


@given(small, st.lists(st.integers(-4, 4), min_size=2, max_size=2))
def test_evaluate_int_matches_arithmetic(a, pt):
    q = from_dict(a)
    assert (q * q).evaluate_int(pt) == q.evaluate_int(pt) ** 2


def test_no_zero_terms_stored():
    q = X("X0") + X("Y0") - X("Y0")
    assert len(q) == 1 and all(c for _, c in q.items())


# evaluation ---------------------------------------------------------------

def test_evaluate_examples():
    F2 = parse_ring("fp:2")
    ws = structure_polynomials(2, 2)
    one, zero = F2(1), F2(0)
    assert evaluate_structure(ws.sum_polys[1], [one, zero], [one, zero], "fp:2") == 1
    assert evaluate_structure(ws.prod_polys[0], [zero, one], [one, one], F2) == 0
    R = parse_ring("perfpoly:fp:3:x")
    a = R("x^(1/3)+2")
    assert evaluate_structure(ws.sum_polys[0], [a], [R(0)], R) == a


def test_evaluate_ring_mismatch():
    from wittkit.perfrings import RingMismatch
    ws = structure_polynomials(2, 1)
    with pytest.raises(RingMismatch):
        evaluate_structure(ws.sum_polys[0], [parse_ring("fp:2")(1)], [parse_ring("fp:3")(1)],
                           "fp:2")


def test_evaluate_needs_enough_coordinates():
    ws = structure_polynomials(2, 3)
    F2 = parse_ring("fp:2")
    with pytest.raises(ValueError):
        evaluate_structure(ws.sum_polys[2], [F2(1)], [F2(1)], F2)


RINGS = ["fp:2", "fp:3", "fq:2:2", "fq:3:2", "perfpoly:fp:2:x", "perfpoly:fp:3:x",
         "perfpoly:fq:2:2:x", "perffrac:fp:2:x", "perfpoly:fp:2:x,y"]


@pytest.mark.parametrize("desc", RINGS)
@given(seed=st.integers(0, 10 ** 6))
def test_reduced_equals_unreduced(desc, seed):
    R = parse_ring(desc)
    n = 3
    ws = structure_polynomials(R.char, n)
    xs = [random_element(R, seed + i, (1, 2)) for i in range(n)]
    ys = [random_element(R, seed + 10 + i, (1, 2)) for i in range(n)]
    for q in ws.sum_polys + ws.prod_polys + ws.neg_polys:
        assert evaluate_structure(q, xs, ys, R) == evaluate_structure(q, xs, ys, R, exact=True)


def test_plan_matches_integer_evaluation():
    ws = structure_polynomials(2, 4)
    rng = random.Random(3)
    Z = parse_ring("int")
    for q in ws.prod_polys:
        pt = [rng.randint(-3, 3) for _ in range(8)]
        xs = [Z(pt[2 * i]) for i in range(4)]
        ys = [Z(pt[2 * i + 1]) for i in range(4)]
        assert evaluate_structure(q, xs, ys, Z).payload == q.evaluate_int(pt)
