import json
import math
from fractions import Fraction

import pytest

from lvl2net.inversion import (HypothesisError, InsufficientCountsError, CountIntegralityError,
                               characteristic_polynomial, compute_profile, convergence_report,
                               counts_from_series, lagrange_coefficients, matching_roundings,
                               reference_matches, verify_hypotheses)
from lvl2net.netclass import RationalFunction, catalan_equation, derive_phi, tree_child_equation
from lvl2net.numerics import Interval, Polynomial
from lvl2net.series import TruncatedSeries, fixed_point_solve

from oracle_values import (CATALAN_GAMMA, INDEPENDENT_COUNTS, TREE_CHILD_C, TREE_CHILD_GAMMA,
                           TREE_CHILD_R, TREE_CHILD_RHO, TREE_CHILD_TAU)

z = RationalFunction.variable()


@pytest.fixture(scope="module")
def tc_phi():
    return derive_phi(tree_child_equation())


@pytest.fixture(scope="module")
def tc_profile(tc_phi):
    return compute_profile(tc_phi, 12)


def close_to(iv, reference, slack_digits):
    slack = Fraction(1, 10**slack_digits)
    ref = Fraction(reference)
    return iv.lo - slack <= ref <= iv.hi + slack


def test_characteristic_polynomial_examples():
    assert characteristic_polynomial(1 / (1 - z)) == Polynomial([1, -2])
    assert characteristic_polynomial(1 + z ** 2) == Polynomial([1, 0, -1])


def test_hypotheses_tree_child(tc_phi):
    rep = verify_hypotheses(tc_phi, 200)
    assert rep.ok
    assert rep.coeffs_nonneg_checked_to == 200
    assert rep.tau_root_count == 1
    assert close_to(rep.R_enclosure, TREE_CHILD_R, 14)


def test_hypotheses_linear_control():
    rep = verify_hypotheses(z, 50)
    assert not rep.nonlinear
    # forced by linearity: phi(0) = 0 and phi - z phi' vanishes identically
    assert set(rep.failures()) == {"(i) phi(0) != 0", "(iii) phi nonlinear",
                                   "(v) unique characteristic root in (0, R)"}


def test_hypotheses_periodic_control():
    rep = verify_hypotheses(1 + z ** 2, 50)
    assert rep.failures() == ["(vi) phi aperiodic"]
    assert rep.support_gcd == 2


def test_hypotheses_negative_coefficient():
    rep = verify_hypotheses(1 + z - z ** 3 + z ** 2, 10)
    assert not rep.coeffs_nonneg
    assert rep.coeffs_nonneg_checked_to == 2


def test_hypotheses_pole_at_zero():
    rep = verify_hypotheses(1 / z, 10)
    assert not rep.radius_positive


def test_periodic_profile_refused():
    with pytest.raises(HypothesisError, match="aperiodic"):
        compute_profile(1 + z ** 2, 10)


def test_tree_child_profile_against_independent_values(tc_profile):
    p = tc_profile
    for iv in (p.tau, p.rho, p.gamma, p.c):
        assert iv.width <= Fraction(1, 10**12)
    assert close_to(p.tau, TREE_CHILD_TAU, 25)
    assert close_to(p.rho, TREE_CHILD_RHO, 25)
    assert close_to(p.gamma, TREE_CHILD_GAMMA, 25)
    assert close_to(p.c, TREE_CHILD_C, 25)


def test_profile_invariants(tc_phi, tc_profile):
    p = tc_profile
    assert p.rho.intersects(p.tau / tc_phi.eval_interval(p.tau))
    assert 1 in p.gamma * p.rho * p.e
    c2 = p.c * p.c
    ratio = p.phi_tau / p.phi2_tau
    assert c2.intersects(ratio)


def test_gamma_rounding_reported(tc_phi):
    p = compute_profile(tc_phi, 10)
    assert matching_roundings(p.gamma, 10) == ["4.6710490707"]
    assert reference_matches(p.gamma, "4.67104907")
    assert not reference_matches(p.gamma, "4.6710490708")


def test_catalan_profile():
    p = compute_profile(derive_phi(catalan_equation()), 10)
    assert p.tau == Interval(Fraction(1, 2), Fraction(1, 2))
    assert p.rho == Interval(Fraction(1, 4), Fraction(1, 4))
    assert close_to(p.gamma, CATALAN_GAMMA, 20)
    # 1.47151776468... rounds up at ten places
    assert matching_roundings(p.gamma, 10) == ["1.4715177647"]
    assert not reference_matches(p.gamma, "1.4715177646")


def test_profile_json_has_only_strings(tc_profile):
    doc = json.loads(json.dumps(tc_profile.to_dict()))
    for k in ("tau", "rho", "gamma", "c"):
        assert isinstance(doc[k]["lo"], str) and isinstance(doc[k]["hi"], str)


def test_lagrange_matches_fixed_point(tc_phi):
    lag = lagrange_coefficients(tc_phi, 40)
    fp = fixed_point_solve(tree_child_equation(), 40)
    assert lag == list(fp.coeffs[1:])


def test_counts_match_independent_oracle(tc_phi):
    lag = lagrange_coefficients(tc_phi, len(INDEPENDENT_COUNTS))
    assert counts_from_series([0] + lag) == INDEPENDENT_COUNTS


def test_counts_integrality_enforced():
    with pytest.raises(CountIntegralityError):
        counts_from_series(TruncatedSeries([0, 1, Fraction(1, 3)]))


def test_catalan_lagrange():
    lag = lagrange_coefficients(1 / (1 - z), 20)
    assert lag == [math.comb(2 * n - 2, n - 1) // n for n in range(1, 21)]


def test_lagrange_pole_rejected():
    with pytest.raises(ZeroDivisionError):
        lagrange_coefficients(1 / z, 5)


def test_convergence_report_bounds(tc_phi, tc_profile):
    counts = counts_from_series([0] + lagrange_coefficients(tc_phi, 30))
    rep = dict(convergence_report(counts, tc_profile, 1, 30))
    assert abs(rep[30] - 1).hi < abs(rep[20] - 1).lo
    with pytest.raises(InsufficientCountsError):
        convergence_report(counts, tc_profile, 1, 31)


def test_stirling_consistency(tc_profile):
    # n! [z^n]C ~ n! sqrt(phi/(2 phi'')) rho^-n / sqrt(pi n^3) equals c n^(n-1) gamma^n to first order
    p = tc_profile
    n = 400
    lhs = (math.lgamma(n + 1) + 0.5 * math.log(float(p.c.mid) ** 2 / 2)
           - n * math.log(float(p.rho.mid)) - 0.5 * math.log(math.pi * n ** 3))
    rhs = math.log(float(p.c.mid)) + (n - 1) * math.log(n) + n * math.log(float(p.gamma.mid))
    assert abs(lhs - rhs) < 1.0 / n
