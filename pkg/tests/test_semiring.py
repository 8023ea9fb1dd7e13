import random

import pytest
from hypothesis import given, settings, strategies as st

from semicong.congruence import CongruencePartition, congruence_closure
from semicong.errors import InvalidInputError
from semicong.semiring import (
    CATALOG, BoolPolynomial, FiniteSemiring, PositivityMap, bool_poly_add, bool_poly_mul, catalog_semiring,
    is_ring, load_semiring, make_boolean, make_minmax, make_product, make_quotient, make_star,
    make_truncated_nat, make_zmod, positive_subsemiring, random_semiring, validate_axioms,
)


def isomorphic(s: FiniteSemiring, t: FiniteSemiring) -> bool:
    from itertools import permutations
    if s.size != t.size:
        return False
    for perm in permutations(range(s.size)):
        if perm[s.zero] != t.zero or perm[s.one] != t.one:
            continue
        if all(perm[s.add[a][b]] == t.add[perm[a]][perm[b]] and perm[s.mul[a][b]] == t.mul[perm[a]][perm[b]]
               for a in range(s.size) for b in range(s.size)):
            return True
    return False


@pytest.mark.parametrize("name", CATALOG)
def test_catalog_members_are_semirings(name):
    s = catalog_semiring(name)
    assert validate_axioms(s) == []


def test_boolean_and_zmod4_validate():
    assert validate_axioms(make_boolean()) == []
    assert validate_axioms(make_zmod(4)) == []


def test_non_distributive_table_is_reported_with_witness():
    z3 = make_zmod(3)
    mul = [list(r) for r in z3.mul]
    mul[2][2] = 2  # now 2*(1+1) = 2 but 2*1 + 2*1 = 1
    s = FiniteSemiring.from_tables(z3.add, mul, 0, 1)
    report = {v.axiom: v.witness for v in validate_axioms(s)}
    assert "left distributivity" in report
    a, b, c = report["left distributivity"]
    assert s.mul[a][s.add[b][c]] != s.add[s.mul[a][b]][s.mul[a][c]]


def test_malformed_tables_rejected():
    with pytest.raises(InvalidInputError):
        FiniteSemiring.from_tables([[0, 5], [1, 1]], [[0, 0], [0, 1]], 0, 1)
    with pytest.raises(InvalidInputError):
        FiniteSemiring.from_dict({"size": 3, "add": [[0]], "mul": [[0]], "zero": 0, "one": 0})


def test_truncated_nat_one_one_is_boolean():
    assert isomorphic(make_truncated_nat(1, 1), make_boolean())


def test_truncated_nat_matches_closure_on_nat():
    # N / <2 ~ 5>, read off a bounded quotient large enough to be exact on 0..4
    from semicong.universe import NatUniverse, bounded_closure
    part = bounded_closure(NatUniverse(30), [(2, 5)])
    t = make_truncated_nat(2, 3)
    for x in range(5):
        for y in range(5):
            assert part.related(x + y, t.add[x][y])
            assert part.related(x * y, t.mul[x][y])


def test_minmax_and_product():
    m = make_minmax(3)
    assert validate_axioms(m) == [] and m.size == 3 and m.one == 2
    p = make_product(make_boolean(), make_boolean())
    assert p.size == 4 and validate_axioms(p) == []
    with pytest.raises(InvalidInputError):
        make_minmax(1)


def test_star_construction():
    s = make_star(make_boolean())
    assert s.size == 3 and validate_axioms(s) == []
    w = s.zero
    for x in range(3):
        assert s.add[w][x] == x and s.mul[w][x] == w and s.mul[x][w] == w
    z2 = make_star(make_zmod(2))
    assert z2.zero == 2 and z2.label(z2.zero) == "ω"
    assert z2.add[0][1] == 1 and z2.mul[0][1] == 0  # the old zero is ordinary now


@pytest.mark.parametrize("name", CATALOG)
def test_star_grows_by_one_and_is_never_a_ring(name):
    s = catalog_semiring(name)
    t = make_star(s)
    assert t.size == s.size + 1
    assert validate_axioms(t) == []
    assert not is_ring(t)


def test_quotients():
    m3 = make_minmax(3)
    q = make_quotient(m3, CongruencePartition.from_classes(3, [[0, 1], [2]]))
    assert q.size == 2 and validate_axioms(q) == []
    assert isomorphic(make_quotient(m3, CongruencePartition.diagonal(3)), m3)
    assert make_quotient(m3, CongruencePartition.full(3)).size == 1
    with pytest.raises(InvalidInputError, match="not a congruence"):
        make_quotient(m3, CongruencePartition.from_classes(3, [[0, 2], [1]]))


def test_bool_polynomials():
    assert bool_poly_add(BoolPolynomial.of(0, 3), BoolPolynomial.of(0, 5)) == BoolPolynomial.of(0, 3, 5)
    assert bool_poly_mul(BoolPolynomial.of(0, 1), BoolPolynomial.of(0, 1)) == BoolPolynomial.of(0, 1, 2)
    assert bool_poly_mul(BoolPolynomial.of(0, 4), BoolPolynomial.of(0, 7)) == BoolPolynomial.of(0, 4, 7, 11)
    assert str(BoolPolynomial.of()) == "0"


polys = st.frozensets(st.integers(0, 8), max_size=5).map(BoolPolynomial)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_bool_polynomial_laws(a, b, c):
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
    assert a + a == a
    assert a * (b + c) == a * b + a * c


def test_is_ring_examples():
    assert is_ring(make_zmod(4))
    assert not is_ring(make_boolean())
    assert not is_ring(make_minmax(4))


def test_positive_subsemiring():
    z2 = make_zmod(2)
    assert positive_subsemiring(z2, PositivityMap((0, 1))).size == 2
    z3 = make_zmod(3)
    assert positive_subsemiring(z3, PositivityMap((0, 1, 1))).size == 3
    with pytest.raises(InvalidInputError, match="p\\(xy\\)"):
        positive_subsemiring(make_zmod(5), PositivityMap((0, 1, 1, -1, -1)))  # p(2*2) = -1
    with pytest.raises(InvalidInputError, match="p\\(x\\+y\\)"):
        positive_subsemiring(z3, PositivityMap((0, 1, -1)))
    with pytest.raises(InvalidInputError):
        positive_subsemiring(make_boolean(), PositivityMap((0, 1)))


def test_load_semiring_round_trip(tmp_path):
    import json
    s = catalog_semiring("star:minmax:3")
    path = tmp_path / "s.json"
    path.write_text(json.dumps(s.to_dict()))
    assert load_semiring(str(path)) == s
    with pytest.raises(InvalidInputError):
        load_semiring("nosuch:1")


def test_quotient_size_equals_closure_classes():
    rng = random.Random(5)
    for _ in range(40):
        s = random_semiring(rng, 6)
        assert validate_axioms(s) == []
        a, b = rng.randrange(s.size), rng.randrange(s.size)
        part = congruence_closure(s, [(a, b)])
        q = make_quotient(s, part)
        assert q.size == part.num_classes
        assert validate_axioms(q) == []
