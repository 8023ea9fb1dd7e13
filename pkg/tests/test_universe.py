import random

import pytest

from semicong.congruence import congruence_closure
from semicong.errors import ResourceError
from semicong.semiring import BoolPolynomial as P, random_semiring
from semicong.universe import BoolPolyUniverse, FiniteUniverse, NatUniverse, bounded_closure


def test_bool_poly_window_example():
    u = BoolPolyUniverse(6)
    part = bounded_closure(u, [(P.of(0, 1), P.of(0, 2))])
    rel = lambda a, b: part.related(u.index(a), u.index(b))  # noqa: E731
    assert rel(P.of(1, 2), P.of(1, 3))
    assert rel(P.of(0, 1, 2), P.of(0, 1, 3))
    assert not rel(P.of(0), P.of(0, 1))


def test_empty_generators_give_diagonal():
    u = BoolPolyUniverse(4)
    part = bounded_closure(u, [])
    assert part.num_classes == u.size


def test_nat_window_classes():
    part = bounded_closure(NatUniverse(20), [(2, 5)])
    classes = sorted(part.classes())
    assert (0,) in classes and (1,) in classes
    assert tuple(range(2, 21, 3)) in classes
    assert tuple(range(3, 21, 3)) in classes
    assert tuple(range(4, 21, 3)) in classes
    assert len(classes) == 5


def test_finite_universe_agrees_with_exact_closure():
    rng = random.Random(8)
    for _ in range(30):
        s = random_semiring(rng, 6)
        gens = [(rng.randrange(s.size), rng.randrange(s.size)) for _ in range(2)]
        assert bounded_closure(FiniteUniverse(s), gens) == congruence_closure(s, gens)


def test_nat_window_is_sound_against_truncations():
    # every relation found on 0..B holds in N/<n ~ n+k>, which contains the generated congruence
    part = bounded_closure(NatUniverse(25), [(3, 7)])
    red = lambda x: x if x < 3 else 3 + (x - 3) % 4  # noqa: E731
    for x in range(26):
        for y in range(26):
            if part.related(x, y):
                assert red(x) == red(y)


def test_budget_exhaustion_carries_partial_result():
    with pytest.raises(ResourceError) as info:
        bounded_closure(NatUniverse(40), [(2, 3)], budget=3)
    partial = info.value.partial
    assert partial is not None and not partial.complete
    assert partial.related(2, 3)


def test_until_stops_early():
    u = NatUniverse(60)
    part = bounded_closure(u, [(2, 5)], until=[(8, 11)])
    assert part.related(8, 11)
    full = bounded_closure(u, [(2, 5)])
    assert part.refines(full)
    assert part.steps <= full.steps
