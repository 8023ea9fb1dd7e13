import random

import pytest
from hypothesis import given, settings, strategies as st

from semicong.congruence import TRIVIAL
from semicong.errors import InvalidInputError
from semicong.positive import (
    PositiveCongruence, bounded_agreement, canonical_generators, classify_congruence, derive_integer_relation,
    ideal_from_generators, ideal_membership, in_S, is_related, k_ideal_of, make_order, minimal_polynomial,
    quotient_semiring, relation_identity_holds, ring_ideal_of, small_generators,
)
from semicong.semiring import validate_axioms

Z2 = make_order([-2, 0, 1], 1)
Z3 = make_order([-2, 0, 0, 1], 0)
w = Z2.theta


def el(order, *c):
    return order.element(c)


def test_make_order():
    assert make_order("x^2-2@1") == Z2
    assert make_order("x^3-2", 0).degree == 3
    with pytest.raises(InvalidInputError):
        make_order([1, 0, 1])
    with pytest.raises(InvalidInputError):
        make_order([-3, 1])


def test_in_S():
    assert in_S(w - 1)
    assert not in_S(1 - w)
    assert in_S(Z2.zero)


def test_ideal_examples():
    i = ideal_from_generators(Z2, [w])
    assert i.det == 2
    assert i.contains(el(Z2, 0, 1)) and i.contains(el(Z2, 2, 0))
    assert ideal_from_generators(Z2, [Z2.one]).det == 1
    assert ideal_from_generators(Z2, [Z2.from_int(2)]).det == 4
    with pytest.raises(InvalidInputError):
        ideal_from_generators(Z2, [Z2.zero])


def test_ideal_membership_examples():
    i = ideal_from_generators(Z2, [w])
    assert ideal_membership(i, 3 * w)
    assert not ideal_membership(i, Z2.one)
    assert ideal_membership(i, Z2.zero)


def test_k_ideal_correspondence():
    i = ideal_from_generators(Z2, [w])
    assert ring_ideal_of(k_ideal_of(i)) == i
    k = k_ideal_of(ideal_from_generators(Z2, [-w]))
    assert k.generators == (w,)
    assert Z2.one in k_ideal_of(ideal_from_generators(Z2, [Z2.one]))
    assert not k.contains(-w)


def test_classification_examples():
    c = classify_congruence(Z2, [(Z2.one, 1 + w)])
    assert isinstance(c, PositiveCongruence) and c.j == 1
    assert c.ideal == ideal_from_generators(Z2, [w])
    c0 = classify_congruence(Z2, [(Z2.zero, w)])
    assert c0.j == 0 and c0.ideal == c.ideal
    assert classify_congruence(Z2, [(Z2.from_int(3), Z2.from_int(3))]) is TRIVIAL
    with pytest.raises(InvalidInputError):
        classify_congruence(Z2, [(1 - w, Z2.one)])


def test_relatedness_examples():
    i = ideal_from_generators(Z2, [w])
    c1, c0 = PositiveCongruence(i, 1), PositiveCongruence(i, 0)
    assert not is_related(Z2, c1, Z2.zero, w)
    assert is_related(Z2, c0, Z2.zero, w)
    assert is_related(Z2, c1, Z2.one, 1 + 2 * w)
    assert is_related(Z2, TRIVIAL, w, w) and not is_related(Z2, TRIVIAL, w, 2 * w)


def test_quotient_examples():
    i = ideal_from_generators(Z2, [w])
    q0 = quotient_semiring(Z2, PositiveCongruence(i, 0))
    q1 = quotient_semiring(Z2, PositiveCongruence(i, 1))
    assert q0.size == 2 and q1.size == 3
    assert validate_axioms(q0) == [] and validate_axioms(q1) == []
    assert quotient_semiring(Z2, PositiveCongruence(ideal_from_generators(Z2, [Z2.from_int(2)]), 0)).size == 4
    with pytest.raises(InvalidInputError):
        quotient_semiring(Z2, TRIVIAL)


def test_canonical_generators():
    i = ideal_from_generators(Z2, [w])
    assert canonical_generators(PositiveCongruence(i, 1), [w]) == [(Z2.one, 1 + w)]
    assert canonical_generators(PositiveCongruence(i, 0), [w]) == [(Z2.zero, w)]


def random_class(rng, order):
    pairs = []
    for _ in range(rng.randint(1, 3)):
        a = order.element([rng.randint(0, 5) for _ in range(order.degree)])
        b = order.element([rng.randint(0, 5) for _ in range(order.degree)])
        pairs.append((a, b))
    return classify_congruence(order, pairs, cross_check=False)


@pytest.mark.parametrize("order", [Z2, Z3], ids=["sqrt2", "cbrt2"])
def test_canonical_round_trip_and_quotient_sizes(order):
    rng = random.Random(4)
    seen = 0
    while seen < 15:
        c = random_class(rng, order)
        if c is TRIVIAL:
            continue
        seen += 1
        assert classify_congruence(order, canonical_generators(c), cross_check=False) == c
        assert ring_ideal_of(k_ideal_of(c.ideal)) == c.ideal
        if c.ideal.det <= 60:
            q = quotient_semiring(order, c)
            assert q.size == c.ideal.det + c.j


@pytest.mark.parametrize("order", [Z2, Z3], ids=["sqrt2", "cbrt2"])
def test_classification_agrees_with_bounded_closure(order):
    rng = random.Random(12)
    for _ in range(6):
        c = random_class(rng, order)
        if c is TRIVIAL:
            continue
        pairs = canonical_generators(c)
        report = bounded_agreement(order, pairs, c)
        assert report.agrees, report.to_dict()


def test_growth_of_ideal_with_base_point():
    # if x <= y then {t : x + t ~ x} is inside {t : y + t ~ y}
    rng = random.Random(2)
    c = classify_congruence(Z2, [(Z2.one, 3 + w)], cross_check=False)
    for _ in range(200):
        x = Z2.element([rng.randint(0, 4), rng.randint(0, 3)])
        y = x + Z2.element([rng.randint(0, 4), rng.randint(0, 3)])
        t = Z2.element([rng.randint(0, 6), rng.randint(0, 6)])
        if is_related(Z2, c, x + t, x):
            assert is_related(Z2, c, y + t, y)


def test_integer_relation_examples():
    r = derive_integer_relation(Z2, w, w)
    assert (r.f, r.g, r.l, r.m, r.n) == ((0, 1), (), 2, 3, 5)
    t = Z3.theta
    r3 = derive_integer_relation(Z3, t, t)
    assert r3.f == (0, 0, 1) and r3.g == () and r3.l == 2
    u = 1 + w
    assert minimal_polynomial(u) == (-1, -2, 1)
    ru = derive_integer_relation(Z2, Z2.one, u)
    assert ru.f == (0, 1) and ru.g == (2,) and ru.l == 1
    assert relation_identity_holds(u, ru)
    with pytest.raises(InvalidInputError):
        derive_integer_relation(Z2, Z2.zero, w)
    with pytest.raises(InvalidInputError):
        derive_integer_relation(Z2, w, Z2.zero)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_integer_relation_identity(a, u):
    x, y = Z3.element(a), Z3.element(u)
    if x.sign() <= 0 or y.sign() <= 0:
        return
    r = derive_integer_relation(Z3, x, y)
    assert relation_identity_holds(y, r)
    assert r.n - r.m == r.l > 0 and r.m >= 2
    assert Z3.from_int(r.m) > x * sum_poly(r.f, x) + x * sum_poly(r.g, x)


def sum_poly(p, x):
    acc = x.order.zero
    for c in reversed(p):
        acc = acc * x + c
    return acc


def test_two_generators_suffice_for_small_ideals():
    for gens in ([w], [Z2.from_int(3), 1 + w], [Z2.from_int(6), 2 + w]):
        i = ideal_from_generators(Z2, gens)
        found = small_generators(i)
        assert found is not None and len(found) <= 2
        assert ideal_from_generators(Z2, found) == i
