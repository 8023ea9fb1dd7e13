import random

import pytest
from hypothesis import given, settings, strategies as st

from semicong.congruence import (
    TRIVIAL, CongruencePartition, NatCongruence, bg_check, boolean_quotient_exhaustive,
    check_bx_nonrelation, classify_nat_congruence, congruence_closure, congruence_violation,
    enumerate_congruences, has_boolean_quotient, is_c_principal, is_congruence, x_power_plus_one,
)
from semicong.semiring import CATALOG, BoolPolynomial, catalog_semiring, make_minmax, make_zmod, random_semiring


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in set_partitions(rest):
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]
        yield [[first]] + p


def compatible(s, classes) -> bool:
    """Direct check of both operations against every related pair."""
    lab = {}
    for k, c in enumerate(classes):
        for a in c:
            lab[a] = k
    n = s.size
    for a in range(n):
        for b in range(n):
            if lab[a] != lab[b]:
                continue
            for r in range(n):
                if lab[s.add[a][r]] != lab[s.add[b][r]] or lab[s.mul[a][r]] != lab[s.mul[b][r]] \
                        or lab[s.mul[r][a]] != lab[s.mul[r][b]]:
                    return False
    return True


def all_congruences(s) -> set:
    return {CongruencePartition.from_classes(s.size, p) for p in set_partitions(list(range(s.size)))
            if compatible(s, p)}


def test_closure_examples():
    assert congruence_closure(make_minmax(3), [(0, 2)]) == CongruencePartition.full(3)
    assert congruence_closure(make_minmax(4), []) == CongruencePartition.diagonal(4)
    p = congruence_closure(make_minmax(4), [(0, 1)])
    assert sorted(p.classes()) == [(0, 1), (2,), (3,)]


def test_violation_witness():
    m3 = make_minmax(3)
    p = CongruencePartition.from_classes(3, [[0, 2], [1]])
    v = congruence_violation(m3, p)
    assert v is not None
    a, b = v.pair
    r = v.multiplier
    ops = {"adding": m3.add, "right-multiplying": m3.mul, "left-multiplying": m3.mul}
    t = ops[v.operation]
    x, y = (t[a][r], t[b][r]) if v.operation != "left-multiplying" else (t[r][a], t[r][b])
    assert not p.related(x, y)
    assert is_congruence(m3, CongruencePartition.diagonal(3))


@pytest.mark.parametrize("b,count", [(2, 2), (3, 4), (4, 8), (5, 16)])
def test_minmax_lattice_sizes(b, count):
    assert len(enumerate_congruences(make_minmax(b))) == count


def test_boolean_lattice():
    assert len(enumerate_congruences(catalog_semiring("boolean"))) == 2


@pytest.mark.parametrize("name", [n for n in CATALOG if catalog_semiring(n).size <= 7])
def test_enumeration_matches_brute_force(name):
    s = catalog_semiring(name)
    lattice = enumerate_congruences(s)
    assert set(lattice.partitions()) == all_congruences(s)
    for e in lattice:
        assert congruence_closure(s, e.generators) == e.partition
        assert e.principal == (len(e.generators) <= 1)


def test_closure_is_least_congruence_containing_generators():
    rng = random.Random(11)
    for _ in range(25):
        s = random_semiring(rng, 5)
        congs = all_congruences(s)
        gens = [(rng.randrange(s.size), rng.randrange(s.size)) for _ in range(rng.randint(0, 2))]
        p = congruence_closure(s, gens)
        above = [c for c in congs if all(c.related(a, b) for a, b in gens)]
        meet = [tuple(c.related(x, y) for c in above) for x in range(s.size) for y in range(s.size)]
        for k, (x, y) in enumerate((x, y) for x in range(s.size) for y in range(s.size)):
            assert p.related(x, y) == all(meet[k])


def test_closure_is_monotone():
    rng = random.Random(3)
    for _ in range(30):
        s = random_semiring(rng, 6)
        g1 = [(rng.randrange(s.size), rng.randrange(s.size))]
        g2 = g1 + [(rng.randrange(s.size), rng.randrange(s.size))]
        assert congruence_closure(s, g1).refines(congruence_closure(s, g2))


def test_principality():
    for b in (2, 3):
        assert is_c_principal(make_minmax(b)).principal
    v = is_c_principal(make_minmax(4))
    assert not v.principal
    assert sorted(v.witness.classes()) == [(0, 1), (2, 3)]
    for p in (2, 3, 5, 7):
        assert is_c_principal(make_zmod(p)).principal


def test_boolean_quotient_examples():
    assert has_boolean_quotient(catalog_semiring("boolean")) == frozenset({0})
    assert has_boolean_quotient(make_zmod(4)) is None
    assert has_boolean_quotient(make_minmax(4)) == frozenset({0})


@pytest.mark.parametrize("name", CATALOG)
def test_bg_consistent_on_catalog(name):
    s = catalog_semiring(name)
    r = bg_check(s)
    assert r.consistent
    assert (r.boolean_quotient is None) == (boolean_quotient_exhaustive(s) is None)


def test_bg_named_cases():
    r = bg_check(make_zmod(6))
    assert r.is_ring and r.boolean_quotient is None and r.consistent
    r = bg_check(catalog_semiring("truncnat:2:3"))
    assert not r.is_ring and r.boolean_quotient is not None and r.consistent


def test_bg_on_random_semirings():
    rng = random.Random(99)
    for _ in range(100):
        s = random_semiring(rng, 6)
        assert bg_check(s).consistent


@pytest.mark.parametrize("name", CATALOG)
def test_power_relations_hold_in_closures(name):
    s = catalog_semiring(name)
    for x in range(s.size):
        for y in range(s.size):
            if y == s.zero:
                continue
            p = congruence_closure(s, [(x, s.add[x][y])])
            x2, y2 = s.mul[x][x], s.mul[y][y]
            x3, y3 = s.mul[x2][x], s.mul[y2][y]
            assert p.related(x2, s.add[x2][y2])
            assert p.related(x3, s.add[x3][y3])


def test_nat_classifier_examples():
    assert classify_nat_congruence([]) is TRIVIAL
    assert classify_nat_congruence([(4, 4)]) is TRIVIAL
    assert classify_nat_congruence([(2, 5)]) == NatCongruence(2, 3)
    assert classify_nat_congruence([(3, 5), (4, 10)]) == NatCongruence(3, 2)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12)), min_size=1, max_size=3))
def test_nat_classifier_cross_checks(pairs):
    classify_nat_congruence(pairs)  # raises on any disagreement with bounded closure


def test_bx_examples():
    r = check_bx_nonrelation(3, 10)
    assert not r.related and r.complete
    assert "under-approximates" in r.note
    extra = [(x_power_plus_one(4), x_power_plus_one(5))]
    assert check_bx_nonrelation(3, 10, extra=extra).related
    q = (x_power_plus_one(2), x_power_plus_one(3))
    assert check_bx_nonrelation(3, 10, query=q).related


def test_bx_degree_bound_must_exceed():
    from semicong.errors import InvalidInputError
    with pytest.raises(InvalidInputError):
        check_bx_nonrelation(3, 5)
    assert BoolPolynomial.of(0, 4) == x_power_plus_one(4)
