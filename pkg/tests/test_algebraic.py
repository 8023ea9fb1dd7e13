from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from semicong.algebraic import (
    NumberField, field_add, field_inv, field_mul, field_neg, floor_ratio, isolate_real_roots,
    parse_field_spec, sign, sturm_count, sturm_sequence,
)
from semicong.errors import InvalidInputError

SQRT2 = NumberField([-2, 0, 1], 1)
CBRT2 = NumberField([-2, 0, 0, 1], 0)


def mp_value(a) -> mpmath.mpf:
    """100-digit evaluation of a field element, independent of the interval code."""
    with mpmath.workdps(110):
        p = [int(c) for c in reversed(a.field.poly)]
        roots = [r for r in mpmath.polyroots(p, maxsteps=200, extraprec=400) if abs(mpmath.im(r)) < 1e-50]
        roots = sorted(mpmath.re(r) for r in roots)
        t = roots[a.field.root_index]
        return sum(mpmath.mpf(c.numerator) / c.denominator * t ** k for k, c in enumerate(a.coords))


def test_isolate_sqrt2_roots():
    roots = isolate_real_roots([-2, 0, 1])
    assert len(roots) == 2
    assert roots[0].hi <= 0 <= roots[1].lo
    assert abs(float(roots[0].refined_to(Fraction(1, 10**9))) + 2 ** 0.5) < 1e-8
    assert abs(float(roots[1].refined_to(Fraction(1, 10**9))) - 2 ** 0.5) < 1e-8


def test_isolate_no_real_roots_and_rational_root():
    assert isolate_real_roots([1, 0, 1]) == []
    (r,) = isolate_real_roots([-3, 1])
    assert r.lo == r.hi == 3


def test_isolate_zero_polynomial_rejected():
    with pytest.raises(InvalidInputError):
        isolate_real_roots([0, 0])


def test_isolating_intervals_have_sturm_count_one_and_are_disjoint():
    p = [-1, 3, 0, -4, 0, 1]  # x^5 - 4x^3 + 3x - 1
    roots = isolate_real_roots(p)
    seq = sturm_sequence(p)
    for r in roots:
        if not r.exact:
            assert sturm_count(seq, r.lo, r.hi) == 1
    for a, b in zip(roots, roots[1:]):
        assert a.hi <= b.lo


def test_field_operation_examples():
    w = SQRT2.gen
    assert field_mul(1 + w, w - 1) == SQRT2.one
    a = SQRT2.parse("3/2 - 5*w")
    assert field_add(a, field_neg(a)).is_zero()
    t = CBRT2.gen
    assert t * (t * t) == CBRT2.from_rational(2)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        field_inv(SQRT2.zero)


def test_sign_examples():
    w = SQRT2.gen
    assert sign(w - 1) == 1
    assert sign(SQRT2.zero) == 0
    assert sign(3 - 2 * w) == 1
    assert sign(1 - w) == -1


def test_floor_ratio_examples():
    w = SQRT2.gen
    assert floor_ratio(w, SQRT2.one) == 1
    assert floor_ratio(SQRT2.one, w - 1) == 2
    assert floor_ratio(SQRT2.from_rational(5), SQRT2.one) == 5
    with pytest.raises(InvalidInputError):
        floor_ratio(w, 1 - w)


def test_field_spec_parsing():
    f = parse_field_spec("x^2-2@1")
    assert f == SQRT2
    assert float(f.gen) > 0
    with pytest.raises(InvalidInputError):
        parse_field_spec("x^2+1@0")
    with pytest.raises(InvalidInputError):
        parse_field_spec("x^2-4@0")  # reducible


def test_spec_string_round_trip():
    assert parse_field_spec(CBRT2.spec()) == CBRT2


coords2 = st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=20), min_size=2, max_size=2)
coords3 = st.lists(st.integers(-40, 40), min_size=3, max_size=3)


@settings(max_examples=60, deadline=None)
@given(coords2, coords2)
def test_sign_is_multiplicative(a, b):
    x, y = SQRT2.element(a), SQRT2.element(b)
    assert sign(x * y) == sign(x) * sign(y)


@settings(max_examples=40, deadline=None)
@given(coords3)
def test_sign_agrees_with_high_precision(c):
    x = CBRT2.element(c)
    v = mp_value(x)
    expected = 0 if x.is_zero() else (1 if v > 0 else -1)
    assert sign(x) == expected


@settings(max_examples=40, deadline=None)
@given(coords2)
def test_sign_agrees_with_high_precision_quadratic(c):
    x = SQRT2.element(c)
    v = mp_value(x)
    expected = 0 if x.is_zero() else (1 if v > 0 else -1)
    assert sign(x) == expected


@settings(max_examples=40, deadline=None)
@given(coords3)
def test_double_inverse(c):
    x = CBRT2.element(c)
    if x.is_zero():
        return
    assert field_inv(field_inv(x)) == x
    assert x * field_inv(x) == CBRT2.one


@settings(max_examples=60, deadline=None)
@given(coords3, st.lists(st.integers(-20, 20), min_size=3, max_size=3))
def test_floor_ratio_bracket(a, b):
    x, y = CBRT2.element(a), CBRT2.element(b)
    if y.sign() <= 0:
        y = -y
    if y.is_zero():
        return
    m = floor_ratio(x, y)
    assert sign(x - m * y) >= 0
    assert sign(x - (m + 1) * y) == -1


@settings(max_examples=40, deadline=None)
@given(coords2, coords2, coords2)
def test_field_laws(a, b, c):
    x, y, z = (SQRT2.element(v) for v in (a, b, c))
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x
