from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lvl2net.numerics import (Interval, Polynomial, count_roots, decimal_ceil, decimal_floor,
                              decimal_round, euler_e, interval_sqrt, poly_gcd, refine_root,
                              squarefree_part, sturm_isolate)

small = st.fractions(min_value=-20, max_value=20, max_denominator=50)


@st.composite
def intervals(draw):
    a, b = draw(small), draw(small)
    return Interval(min(a, b), max(a, b))


@st.composite
def interval_with_member(draw):
    iv = draw(intervals())
    t = draw(st.fractions(min_value=0, max_value=1, max_denominator=30))
    return iv, iv.lo + t * (iv.hi - iv.lo)


@settings(max_examples=200, deadline=None)
@given(interval_with_member(), interval_with_member())
def test_interval_ops_contain_pointwise_results(p, q):
    (a, x), (b, y) = p, q
    assert x + y in a + b
    assert x - y in a - b
    assert x * y in a * b
    if not b.contains_zero():
        assert x / y in a / b


@settings(max_examples=100, deadline=None)
@given(interval_with_member(), st.integers(min_value=0, max_value=5))
def test_interval_power_contains(p, k):
    a, x = p
    assert x ** k in a ** k


def test_interval_rejects_reversed_bounds():
    with pytest.raises(ValueError):
        Interval(1, 0)


def test_division_by_interval_containing_zero():
    with pytest.raises(ZeroDivisionError):
        Interval(1, 2) / Interval(-1, 1)


def test_from_decimal_is_half_ulp():
    iv = Interval.from_decimal("4.67104907")
    assert iv.lo == Fraction(467104906, 10**8) + Fraction(1, 2 * 10**8)
    assert iv.hi == Fraction(467104907, 10**8) + Fraction(1, 2 * 10**8)


def test_abs_interval():
    assert abs(Interval(-3, 2)) == Interval(0, 3)
    assert abs(Interval(-3, -1)) == Interval(1, 3)


def test_decimal_formatting_directions():
    x = Fraction(1, 3)
    assert decimal_floor(x, 4) == "0.3333"
    assert decimal_ceil(x, 4) == "0.3334"
    assert decimal_round(Fraction(2, 3), 3) == "0.667"
    assert decimal_floor(Fraction(-1, 3), 2) == "-0.34"


@settings(max_examples=100, deadline=None)
@given(st.lists(small, min_size=1, max_size=5), st.lists(small, min_size=1, max_size=5),
       st.lists(small, min_size=1, max_size=5))
def test_polynomial_ring_axioms(a, b, c):
    p, q, r = Polynomial(a), Polynomial(b), Polynomial(c)
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
    assert (p - p).is_zero()


@settings(max_examples=100, deadline=None)
@given(st.lists(small, min_size=2, max_size=6), st.lists(small, min_size=1, max_size=4))
def test_polynomial_division_identity(a, b):
    p, d = Polynomial(a), Polynomial(b)
    if d.is_zero():
        return
    q, r = divmod(p, d)
    assert q * d + r == p
    assert r.is_zero() or r.degree < d.degree


def test_gcd_and_squarefree():
    p = Polynomial.from_roots([1, 1, 2, Fraction(1, 3)])
    q = Polynomial.from_roots([1, 5])
    assert poly_gcd(p, q).monic() == Polynomial.from_roots([1])
    assert squarefree_part(p).monic() == Polynomial.from_roots([1, 2, Fraction(1, 3)]).monic()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7),
                min_size=1, max_size=5, unique=True))
def test_sturm_counts_distinct_rational_roots_exactly(roots):
    p = Polynomial.from_roots(roots)
    assert count_roots(p, -6, 6) == len(roots)
    # (a, b] semantics
    r = roots[0]
    inside = sum(1 for x in roots if -6 < x <= r)
    assert count_roots(p, -6, r) == inside
    isolated = sturm_isolate(p, -6, 6)
    assert len(isolated) == len(roots)
    for iv, x in zip(isolated, sorted(roots)):
        assert x in iv


def test_sturm_isolation_sqrt2():
    p = Polynomial([-2, 0, 1])
    [iv] = sturm_isolate(p, 0, 2)
    tight = refine_root(p, iv, Fraction(1, 10**30))
    assert tight.width <= Fraction(1, 10**30)
    assert tight.lo ** 2 < 2 < tight.hi ** 2


def test_double_root_counted_once():
    p = Polynomial.from_roots([1, 1])
    assert sturm_isolate(p, 0, 2) == [Interval(1, 1)]


def test_refine_requires_positive_width():
    with pytest.raises(ValueError):
        refine_root(Polynomial([-2, 0, 1]), Interval(1, 2), 0)


def test_euler_e_encloses_known_digits():
    e = euler_e(30)
    assert e.width <= Fraction(1, 10**30)
    ref = Fraction("2.71828182845904523536028747135266249775724709369995")
    slack = Fraction(1, 10**50)
    assert e.lo <= ref + slack and ref - slack <= e.hi


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=100, max_denominator=1000))
def test_interval_sqrt_squares_back(x):
    r = interval_sqrt(Interval.point(x), 20)
    # rounding is relative to the size of the root
    assert r.width <= Fraction(1, 10**20) * r.hi
    assert r.lo ** 2 <= x <= r.hi ** 2


def test_interval_sqrt_needs_positive_argument():
    with pytest.raises(ValueError):
        interval_sqrt(Interval(0, 1), 10)


def test_interval_sqrt_exact_square():
    assert interval_sqrt(Interval(4, 4), 10) == Interval(2, 2)
