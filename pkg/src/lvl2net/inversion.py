"""Singular inversion for T = z*phi(T): hypothesis checks, certified constants, Lagrange coefficients.

For phi satisfying the usual conditions (phi(0) != 0, non-negative coefficients,
nonlinear, analytic at 0, a unique root tau of phi - z*phi' in (0, R),
aperiodic) the solution has radius rho = tau/phi(tau) and

    n! [z^n] T  ~  c * n^(n-1) * gamma^n,   c = sqrt(phi(tau)/phi''(tau)),  gamma = 1/(rho*e).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .netclass import RationalFunction, phi_series
from .numerics import (Interval, Polynomial, certified_constants, count_roots, decimal_ceil,
                       decimal_floor, poly_gcd, refine_root, squarefree_part, sturm_isolate)
from .series import TruncatedSeries, series_mul


class HypothesisError(ValueError):
    def __init__(self, report: "HypothesisReport"):
        self.report = report
        super().__init__("singular inversion hypotheses fail: " + ", ".join(report.failures()))


class ProfileError(ArithmeticError):
    pass


class CountIntegralityError(ValueError):
    def __init__(self, n: int, value: Fraction):
        self.n = n
        self.value = value
        super().__init__(f"n! * [x^{n}] = {value} is not an integer")


class InsufficientCountsError(ValueError):
    pass


@dataclass
class HypothesisReport:
    phi0_nonzero: bool
    coeffs_nonneg: bool
    coeffs_nonneg_checked_to: int
    nonlinear: bool
    radius_positive: bool
    tau_unique_in_0R: bool
    aperiodic: bool
    R_enclosure: Optional[Interval]  # None means R = +infinity
    tau_root_count: int = 0
    support_gcd: int = 0
    tau_isolation: Optional[Interval] = field(default=None, repr=False)

    _LABELS = (
        ("phi0_nonzero", "(i) phi(0) != 0"),
        ("coeffs_nonneg", "(ii) non-negative coefficients"),
        ("nonlinear", "(iii) phi nonlinear"),
        ("radius_positive", "(iv) phi analytic at 0"),
        ("tau_unique_in_0R", "(v) unique characteristic root in (0, R)"),
        ("aperiodic", "(vi) phi aperiodic"),
    )

    def failures(self) -> list[str]:
        return [label for attr, label in self._LABELS if not getattr(self, attr)]

    @property
    def ok(self) -> bool:
        return not self.failures()

    def to_dict(self, digits: int = 12) -> dict:
        out = {attr: getattr(self, attr) for attr, _ in self._LABELS}
        out["coeffs_nonneg_checked_to"] = self.coeffs_nonneg_checked_to
        out["tau_root_count"] = self.tau_root_count
        out["support_gcd"] = self.support_gcd
        out["R"] = "inf" if self.R_enclosure is None else interval_json(self.R_enclosure, digits)
        return out


@dataclass
class AsymptoticProfile:
    tau: Interval
    rho: Interval
    gamma: Interval
    c: Interval
    report: HypothesisReport
    digits: int
    phi_tau: Interval
    phi2_tau: Interval
    e: Interval

    def to_dict(self) -> dict:
        d = self.digits + 3
        return {
            "digits": self.digits,
            "tau": interval_json(self.tau, d),
            "rho": interval_json(self.rho, d),
            "gamma": interval_json(self.gamma, d),
            "c": interval_json(self.c, d),
            "hypotheses": self.report.to_dict(d),
        }


def interval_json(iv: Interval, digits: int) -> dict:
    return {"lo": decimal_floor(iv.lo, digits), "hi": decimal_ceil(iv.hi, digits)}


def reference_matches(iv: Interval, reference: str) -> bool:
    """A printed decimal matches when its half-ulp rounding interval meets the enclosure."""
    return Interval.from_decimal(reference).intersects(iv)


def matching_roundings(iv: Interval, digits: int) -> list[str]:
    """All `digits`-place decimals whose rounding interval meets iv."""
    scale = 10**digits
    lo = math.floor(iv.lo * scale - Fraction(1, 2))
    hi = math.ceil(iv.hi * scale + Fraction(1, 2))
    out = []
    for k in range(lo, hi + 1):
        text = decimal_floor(Fraction(k, scale), digits)
        if reference_matches(iv, text):
            out.append(text)
    return out


# ---------------------------------------------------------------------------
# Hypotheses
# ---------------------------------------------------------------------------


def characteristic_polynomial(phi: RationalFunction) -> Polynomial:
    """Numerator of phi - z*phi' = (PQ - z(P'Q - PQ')) / Q^2, scaled by a positive
    constant to integer coefficients with gcd 1."""
    p, q = phi.num, phi.den
    z = Polynomial([0, 1])
    n = p * q - z * (p.derivative() * q - p * q.derivative())
    if n.is_zero():
        return n
    prim = n.integer_primitive()
    return prim if n.leading > 0 else -prim


def cauchy_bound(p: Polynomial) -> Fraction:
    """Every real root of p lies in (-B, B)."""
    lead = abs(p.leading)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0)) + 1


def _radius(phi: RationalFunction) -> Optional[Interval]:
    """Smallest positive real root of the denominator, or None (R = +inf)."""
    den = phi.den
    if den.degree <= 0:
        return None
    roots = sturm_isolate(den, 0, cauchy_bound(den))
    return roots[0] if roots else None


def _tau_roots(char: Polynomial, R: Optional[Interval],
               den: Polynomial) -> tuple[list[Interval], Optional[Interval]]:
    """Isolating intervals of the characteristic roots in (0, R); R may come back refined."""
    if char.is_zero():
        return [], R
    if R is None:
        return sturm_isolate(char, 0, cauchy_bound(char)), None
    sq_char = squarefree_part(char)
    if sq_char.degree <= 0:
        return [], R
    # a root shared with the denominator can only be R itself
    common = poly_gcd(sq_char, squarefree_part(den))
    while R.lo != R.hi:
        n_char = count_roots(sq_char, R.lo, R.hi)
        n_common = count_roots(common, R.lo, R.hi) if common.degree > 0 else 0
        if n_char == n_common:
            break
        R = refine_root(den, R, R.width / 4)
    roots = sturm_isolate(char, 0, R.lo)
    if R.lo != R.hi and char(R.lo) == 0:
        roots.append(Interval.point(R.lo))
    return roots, R


def verify_hypotheses(phi: RationalFunction, check_order: int = 200) -> HypothesisReport:
    analytic = phi.analytic_at_zero()
    if analytic:
        coeffs = phi_series(phi, check_order).coeffs
    else:
        coeffs = ()
    phi0_nonzero = analytic and coeffs[0] != 0
    neg = next((k for k, c in enumerate(coeffs) if c < 0), None)
    nonneg = analytic and neg is None
    checked_to = (check_order if neg is None else neg - 1) if analytic else -1
    nonlinear = not (phi.den.degree == 0 and phi.num.degree <= 1)
    support = [k for k, c in enumerate(coeffs) if c != 0]
    g = 0
    for k in support:
        g = math.gcd(g, k)
    R = _radius(phi) if analytic else None
    roots: list[Interval] = []
    if analytic:
        roots, R = _tau_roots(characteristic_polynomial(phi), R, phi.den)
        if R is not None:
            R = refine_root(phi.den, R, Fraction(1, 10**15))
    return HypothesisReport(
        phi0_nonzero=phi0_nonzero,
        coeffs_nonneg=nonneg,
        coeffs_nonneg_checked_to=checked_to,
        nonlinear=nonlinear,
        radius_positive=analytic,
        tau_unique_in_0R=len(roots) == 1,
        aperiodic=g == 1,
        R_enclosure=R,
        tau_root_count=len(roots),
        support_gcd=g,
        tau_isolation=roots[0] if len(roots) == 1 else None,
    )


# ---------------------------------------------------------------------------
# Certified constants
# ---------------------------------------------------------------------------


def compute_profile(phi: RationalFunction, digits: int = 10,
                    check_order: int = 200) -> AsymptoticProfile:
    """Certified enclosures of tau, rho, gamma and c, each of width <= 10**-digits."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    report = verify_hypotheses(phi, check_order)
    if not report.ok:
        raise HypothesisError(report)
    char = characteristic_polynomial(phi)
    dchar = char.derivative()
    phi1 = phi.derivative()
    phi2 = phi1.derivative()
    target = Fraction(1, 10**digits)
    extra = 2
    tau = report.tau_isolation
    while True:
        tau = refine_root(char, tau, Fraction(1, 10**(digits + extra)))
        slope = dchar.eval_centered(tau) if tau.lo != tau.hi else Interval.point(dchar(tau.lo))
        if slope.contains_zero():
            raise ProfileError(f"characteristic root is not simple: derivative enclosure {slope}")
        phi_tau = phi.eval_interval(tau)
        phi2_tau = phi2.eval_interval(tau)
        if not phi2_tau.is_positive():
            raise ProfileError(f"phi'' at tau is not certifiably positive: {phi2_tau}")
        rho = tau / phi_tau
        e, sqrt = certified_constants(digits + extra + 2)
        gamma = 1 / (rho * e)
        c = sqrt(phi_tau / phi2_tau)
        if max(tau.width, rho.width, gamma.width, c.width) <= target:
            return AsymptoticProfile(tau=tau, rho=rho, gamma=gamma, c=c, report=report,
                                     digits=digits, phi_tau=phi_tau, phi2_tau=phi2_tau, e=e)
        extra += 4


# ---------------------------------------------------------------------------
# Exact coefficients
# ---------------------------------------------------------------------------


def lagrange_coefficients(phi: RationalFunction, n_max: int) -> list[Fraction]:
    """[z^n] C for n = 1..n_max via [z^n] C = [z^(n-1)] phi^n / n."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if not phi.analytic_at_zero():
        raise ZeroDivisionError("phi has a pole at 0")
    base = phi_series(phi, n_max - 1)
    out = []
    power = base
    for n in range(1, n_max + 1):
        out.append(power.coeffs[n - 1] / n)
        if n < n_max:
            power = series_mul(power, base)
    return out


def counts_from_series(s: TruncatedSeries | Sequence[Fraction]) -> list[int]:
    """t_n = n! [x^n] s for n = 1..order."""
    coeffs = s.coeffs if isinstance(s, TruncatedSeries) else tuple(s)
    out = []
    fact = 1
    for n in range(1, len(coeffs)):
        fact *= n
        v = coeffs[n] * fact
        if v.denominator != 1:
            raise CountIntegralityError(n, v)
        out.append(int(v))
    return out


def asymptotic_estimate(p: AsymptoticProfile, n: int) -> Interval:
    """Enclosure of c * n^(n-1) * gamma^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return p.c * Fraction(n) ** (n - 1) * p.gamma ** n


def convergence_report(counts: Sequence[int], p: AsymptoticProfile,
                       n_from: int, n_to: int) -> list[tuple[int, Interval]]:
    """(n, t_n / (c n^(n-1) gamma^n)) for n_from <= n <= n_to; counts[0] is t_1."""
    if n_from > n_to:
        return []
    if n_from < 1:
        raise ValueError("n_from must be >= 1")
    if len(counts) < n_to:
        raise InsufficientCountsError(f"need counts through n = {n_to}, have {len(counts)}")
    return [(n, Interval.point(counts[n - 1]) / asymptotic_estimate(p, n))
            for n in range(n_from, n_to + 1)]
