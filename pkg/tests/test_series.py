from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from lvl2net.series import (Add, ContractionError, NotInvertibleError, TruncatedSeries, U, X,
                            eval_expr, fixed_point_solve, parse_prefix, series_mul,
                            series_reciprocal)

coeff = st.fractions(min_value=-10, max_value=10, max_denominator=12)
series6 = st.lists(coeff, min_size=7, max_size=7).map(TruncatedSeries)


def naive_mul(a, b):
    n = min(a.order, b.order)
    return TruncatedSeries([sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1)])


@settings(max_examples=100, deadline=None)
@given(series6, series6, series6)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * b == naive_mul(a, b)


@settings(max_examples=100, deadline=None)
@given(series6)
def test_reciprocal_is_inverse(a):
    if a[0] == 0:
        with pytest.raises(NotInvertibleError):
            series_reciprocal(a)
        return
    one = TruncatedSeries.constant(1, a.order)
    assert series_mul(a, series_reciprocal(a)) == one


def test_mixed_orders_truncate_to_smaller():
    a = TruncatedSeries([1, 1, 1, 1])
    b = TruncatedSeries([1, 1])
    assert (a * b).order == 1


def test_geometric_series():
    g = 1 / TruncatedSeries([1, -1, 0, 0, 0, 0])
    assert g.coeffs == (1,) * 6


def test_json_round_trip():
    s = TruncatedSeries([Fraction(3, 2), -7, Fraction(1, 9)])
    assert TruncatedSeries.from_json(s.to_json()) == s
    assert "3/2" in s.to_json()


def test_prefix_round_trip():
    expr = X + Fraction(1, 2) * U ** 2 + U / (1 - U)
    assert parse_prefix(expr.prefix()).prefix() == expr.prefix()


def test_catalan_fixed_point():
    sol = fixed_point_solve(X + U ** 2, 12)
    # T = x + T^2 gives Catalan numbers C_{n-1}
    assert [sol[n] for n in range(1, 13)] == [comb(2 * n - 2, n - 1) // n for n in range(1, 13)]


def test_newton_and_iteration_agree():
    expr = X + U ** 2 / (1 - U) + Fraction(1, 3) * U ** 3
    assert fixed_point_solve(expr, 25) == fixed_point_solve(expr, 25, method="iterate")


def test_non_contracting_equation_rejected():
    # S = X + S has no unique solution: dF/dU has constant term 1
    with pytest.raises(ContractionError):
        fixed_point_solve(X + U, 5)


def test_division_by_non_invertible_reports_path():
    with pytest.raises(NotInvertibleError) as info:
        eval_expr(X / U, TruncatedSeries.variable(4), TruncatedSeries.variable(4))
    assert info.value.path


def test_unknown_method():
    with pytest.raises(ValueError):
        fixed_point_solve(X + U ** 2, 3, method="magic")


def test_eval_expr_substitution():
    x = TruncatedSeries.variable(5)
    out = eval_expr(Add(X, U ** 2), x, x)
    assert out.coeffs == (0, 1, 1, 0, 0, 0)
