import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from semicong import intmat
from semicong.algebraic import NumberField
from semicong.audit import verify_chain, verify_membership
from semicong.errors import DependenceError, InvalidInputError, InvalidStepError
from semicong.flatness import (
    GammaForm, MembershipCertificate, Permute, RefinementChain, Run, Subtract, absorb, apply_step, convergents,
    cover, gamma_sign, gamma_value, is_nice, refinement_reachable, shrink_pair, shrink_subset, standard_basis,
)

SQRT2 = NumberField([-2, 0, 1], 1)
CBRT2 = NumberField([-2, 0, 0, 1], 0)
G2 = GammaForm.parse(SQRT2, "1;w")
G3 = GammaForm.parse(CBRT2, "1;w;w^2")
E2 = standard_basis(2)


def nonneg_coefficients(basis, v):
    c = intmat.solve_integer([tuple(b) for b in basis], v)
    return all(x >= 0 for x in c)


def test_gamma_values():
    assert gamma_value(G2, (-1, 1)) == SQRT2.gen - 1
    assert gamma_sign(G2, (-1, 1)) == 1
    assert gamma_value(G2, (0, 0)).is_zero() and gamma_sign(G2, (0, 0)) == 0
    with pytest.raises(InvalidInputError):
        gamma_value(G2, (1, 2, 3))


def test_dependent_gamma_is_rejected():
    with pytest.raises(DependenceError):
        GammaForm.parse(SQRT2, "1;2")
    g = GammaForm.parse(SQRT2, "1;2", check_independence=False)
    assert gamma_value(g, (2, -1)).is_zero()
    with pytest.raises(DependenceError):
        gamma_sign(g, (2, -1))


def test_gamma_needs_positive_coordinates():
    with pytest.raises(InvalidInputError):
        GammaForm.parse(SQRT2, "1;-w")


def test_niceness_examples():
    assert is_nice(G2, E2)
    v = is_nice(G2, [(1, 0), (2, 0)])
    assert not v and "determinant" in v.reason
    v = is_nice(G2, [(1, 0), (1, -1)])
    assert not v and "vector 1" in v.reason


def test_apply_step_examples():
    assert apply_step(G2, E2, Subtract(1, 0)) == ((1, 0), (-1, 1))
    swapped = apply_step(G2, E2, Permute((1, 0)))
    assert swapped == ((0, 1), (1, 0)) and is_nice(G2, swapped)
    with pytest.raises(InvalidStepError):
        apply_step(G2, E2, Subtract(0, 1))


def test_shrink_pair_follows_pell_convergents():
    r = shrink_pair(G2, (1, 0), (0, 1), Fraction(1, 5))
    assert r.pair == ((3, -2), (-7, 5))
    assert len(r) == 5
    for v in r.pair:
        assert (gamma_value(G2, v) - Fraction(1, 5)).sign() < 0
    # the original vectors are nonnegative combinations of the final pair
    assert r.coefficients == ((5, 2), (7, 3))
    for orig, (a, b) in zip(((1, 0), (0, 1)), r.coefficients):
        assert tuple(a * x + b * y for x, y in zip(*r.pair)) == orig


def test_shrink_pair_with_large_delta_does_nothing():
    r = shrink_pair(G2, (1, 0), (0, 1), 2)
    assert len(r) == 0 and r.pair == ((1, 0), (0, 1))


def test_shrink_pair_preconditions():
    with pytest.raises(InvalidInputError):
        shrink_pair(G2, (0, 1), (1, 0), Fraction(1, 5))
    with pytest.raises(InvalidInputError):
        shrink_pair(G2, (1, 0), (0, 1), 0)


def test_shrink_subset_two_dimensional():
    r = shrink_subset(G2, E2, [0, 1], "1/5")
    assert r.chain.result == ((3, -2), (-7, 5))
    assert verify_chain(G2, r.chain)
    for i, cert in r.certificates.items():
        assert cert.target == E2[i]
        assert verify_membership(G2, r.chain.result, cert)


def test_shrink_subset_leaves_other_indices_alone():
    delta = Fraction(1, 10)
    r = shrink_subset(G3, standard_basis(3), [1, 2], delta)
    res = r.chain.result
    assert res[0] == (1, 0, 0)
    for j in (1, 2):
        assert (gamma_value(G3, res[j]) - delta).sign() < 0
        assert verify_membership(G3, res, r.certificates[j])
    assert verify_chain(G3, r.chain)
    with pytest.raises(InvalidInputError):
        shrink_subset(G3, standard_basis(3), [1], delta)


def test_shrink_subset_large_delta_gives_empty_chain():
    assert len(shrink_subset(G3, standard_basis(3), [0, 1, 2], 10).chain) == 0


def test_absorb_examples():
    chain, cert = absorb(G2, E2, (-1, 1))
    assert [r.step for r in chain.runs] == [Subtract(1, 0)] and len(chain) == 1
    assert cert.coefficients == (0, 1)
    chain, cert = absorb(G2, E2, (2, 3))
    assert len(chain) == 0 and cert.coefficients == (2, 3)


def test_absorb_two_negative_coefficients():
    e = (-1, -1, 2)
    assert gamma_sign(G3, e) == 1
    chain, cert = absorb(G3, standard_basis(3), e)
    assert verify_chain(G3, chain)
    assert verify_membership(G3, chain.result, cert)


def test_absorb_rejects_outside_cone():
    with pytest.raises(InvalidInputError):
        cover(G2, None, [(1, -1)])


def test_cover_examples():
    r = cover(G2, None, [(-1, 1)])
    assert r.chain.result == ((1, 0), (-1, 1))
    assert r.certificates[0].coefficients == (0, 1)
    r = cover(G3, None, standard_basis(3))
    assert len(r.chain) == 0
    assert [c.coefficients for c in r.certificates] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    r = cover(G2, None, [(0, 0)])
    assert r.certificates[0].coefficients == (0, 0)


def random_targets(rng, g, count, bound=5):
    out = []
    while len(out) < count:
        t = tuple(rng.randint(-bound, bound) for _ in range(g.n))
        if any(t) and gamma_sign(g, t) > 0:
            out.append(t)
    return out


@pytest.mark.parametrize("g", [G2, G3], ids=["n2", "n3"])
def test_random_covers_verify_independently(g):
    rng = random.Random(17)
    for _ in range(10):
        targets = random_targets(rng, g, 3)
        r = cover(g, None, targets)
        assert verify_chain(g, r.chain)
        for t, c in zip(targets, r.certificates):
            assert c.target == t
            assert verify_membership(g, r.chain.result, c)
        # the start collection stays inside the span of the refinement
        for v in r.chain.start:
            assert nonneg_coefficients(r.chain.result, v)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=4))
def test_covers_in_the_plane(targets):
    targets = [t for t in targets if any(t) and gamma_sign(G2, t) > 0]
    r = cover(G2, None, targets)
    assert verify_chain(G2, r.chain)
    for c in r.certificates:
        assert verify_membership(G2, r.chain.result, c)


@pytest.mark.parametrize("target", [(-1, 1, 0), (2, -1, 0), (1, 1, -1)])
def test_every_step_keeps_determinant_and_span(target):
    r = cover(G3, None, [target])
    vs = r.chain.start
    for step in r.chain.steps():
        old = vs
        vs = apply_step(G3, vs, step)
        assert abs(intmat.det(intmat.transpose(vs))) == 1
        for v in old:
            assert nonneg_coefficients(vs, v)
    assert vs == r.chain.result


def test_tampered_certificate_fails():
    r = cover(G2, None, [(-1, 1), (3, 1)])
    c = r.certificates[1]
    bad = MembershipCertificate(c.target, (-1,) + c.coefficients[1:])
    res = verify_membership(G2, r.chain.result, bad)
    assert not res and "coefficient 0" in res.reason


def test_inserted_illegal_step_is_named():
    r = cover(G2, None, [(-1, 1)])
    bad = RefinementChain(r.chain.start, (Run(Subtract(0, 1)),) + r.chain.runs, r.chain.result)
    res = verify_chain(G2, bad)
    assert not res and "step 0 (Subtract 0 1) is illegal" in res.reason


def test_chain_json_round_trip():
    r = cover(G3, None, [(-1, -1, 2)])
    again = RefinementChain.from_dict(r.chain.to_dict())
    assert again == r.chain
    assert verify_chain(G3, again)


def test_shrinking_walks_through_sqrt2_convergents():
    # sqrt(2) = [1; 2, 2, 2, ...]; each run leaves a vector +-(p, -q) for a convergent p/q
    conv = convergents([1] + [2] * 40, 40)
    r = shrink_pair(G2, (1, 0), (0, 1), Fraction(1, 10**6))
    pair = [(1, 0), (0, 1)]
    visited = []
    for run in r.runs:
        i, j = run.step.i, run.step.j
        pair[i] = tuple(a - run.repeat * b for a, b in zip(pair[i], pair[j]))
        visited.append(pair[i])
    assert len(visited) >= 6
    for k, v in enumerate(visited):
        p, q = conv[k]
        assert v in ((-p, q), (p, -q))


def test_refinement_search_confirms_a_known_chain():
    r = cover(G3, None, [(2, -1, 0)])
    verdict, explored = refinement_reachable(G3, r.chain.start, r.chain.result, budget=20_000)
    assert verdict == "refines" and explored >= 1


def test_span_containment_without_refinement_candidate():
    # found by the n = 3 sampling search: Sp_N(V) lies inside Sp_N(W), yet no chain leads from V to W
    W = ((18, -13, -1), (13, -9, -1), (-14, 10, 1))
    V = ((-29, 21, 2), (52, -37, -3), (49, -35, -3))
    assert is_nice(G3, W) and is_nice(G3, V)
    for v in V:
        assert nonneg_coefficients(W, v)
    verdict, _ = refinement_reachable(G3, V, W, budget=100_000)
    assert verdict == "no-refinement"
