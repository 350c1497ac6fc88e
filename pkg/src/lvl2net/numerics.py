"""Exact rationals, polynomials over Q, Sturm root isolation and rational intervals.

Nothing in here touches floating point: every certified quantity is carried as a
pair of :class:`fractions.Fraction` bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction]


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def floor_dyadic(x: Fraction, bits: int) -> Fraction:
    """Largest k/2**bits that is <= x."""
    return Fraction(math.floor(x * (1 << bits)), 1 << bits)


def ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.ceil(x * (1 << bits)), 1 << bits)


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Number) -> "Interval":
        return cls(x, x)

    @classmethod
    def coerce(cls, x) -> "Interval":
        return x if isinstance(x, Interval) else cls.point(as_rational(x))

    @classmethod
    def from_decimal(cls, text: str) -> "Interval":
        """Half-ulp interval of a rounded decimal string, e.g. '4.67' -> [4.665, 4.675]."""
        value = Fraction(text)
        digits = len(text.split(".", 1)[1]) if "." in text else 0
        half_ulp = Fraction(1, 2 * 10**digits)
        return cls(value - half_ulp, value + half_ulp)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = as_rational(x)
        return self.lo <= x <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def __add__(self, other):
        other = Interval.coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        other = Interval.coerce(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return Interval.coerce(other) - self

    def __mul__(self, other):
        other = Interval.coerce(other)
        if self.lo == self.hi and other.lo == other.hi:
            p = self.lo * other.lo
            return Interval(p, p)
        products = (self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.contains_zero():
            raise ZeroDivisionError(f"interval {self} contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * Interval.coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return Interval.coerce(other) * self.reciprocal()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (self ** (-k)).reciprocal()
        if k == 0:
            return Interval(1, 1)
        a, b = self.lo ** k, self.hi ** k
        if k % 2 == 1 or self.lo >= 0:
            return Interval(min(a, b), max(a, b))
        if self.hi <= 0:
            return Interval(b, a)
        return Interval(Fraction(0), max(a, b))

    def round_out(self, bits: int) -> "Interval":
        """Widen to dyadic endpoints with denominator 2**bits (keeps Fractions small)."""
        return Interval(floor_dyadic(self.lo, bits), ceil_dyadic(self.hi, bits))

    def to_decimal(self, digits: int) -> tuple[str, str]:
        """Outward-rounded decimal strings for (lo, hi) with `digits` fractional digits."""
        return (decimal_floor(self.lo, digits), decimal_ceil(self.hi, digits))

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


def _format_scaled(k: int, digits: int) -> str:
    sign = "-" if k < 0 else ""
    k = abs(k)
    if digits == 0:
        return f"{sign}{k}"
    whole, frac = divmod(k, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def decimal_floor(x: Fraction, digits: int) -> str:
    return _format_scaled(math.floor(x * 10**digits), digits)


def decimal_ceil(x: Fraction, digits: int) -> str:
    return _format_scaled(math.ceil(x * 10**digits), digits)


def decimal_round(x: Fraction, digits: int) -> str:
    """Round half up to `digits` fractional digits."""
    return _format_scaled(math.floor(x * 10**digits + Fraction(1, 2)), digits)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """Univariate polynomial with Fraction coefficients, index = degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c: Number) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c: Number = 1) -> "Polynomial":
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[Number]) -> "Polynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-as_rational(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}" if mono else f"{abs(c)}"
            terms.append(("- " if c < 0 else "+ ") + body)
        out = " ".join(terms)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.leading
        for k in range(dq, -1, -1):
            q = rem[k + other.degree] / lead
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return Polynomial(quot), Polynomial(rem[: other.degree])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "Polynomial":
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __call__(self, x):
        if isinstance(x, Interval):
            return self.eval_interval(x)
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_interval(self, iv: Interval) -> Interval:
        """Enclosure of p over iv (Horner form; valid, possibly pessimistic)."""
        if iv.lo == iv.hi:
            return Interval.point(self(iv.lo))
        acc = Interval.point(0)
        for c in reversed(self.coeffs):
            acc = acc * iv + c
        return acc

    def eval_centered(self, iv: Interval) -> Interval:
        """Mean-value form p(m) + p'(iv)(iv - m): much tighter on narrow intervals."""
        if iv.lo == iv.hi:
            return Interval.point(self(iv.lo))
        m = iv.mid
        slope = self.derivative().eval_interval(iv)
        enclosure = Interval.point(self(m)) + slope * (iv - m)
        naive = self.eval_interval(iv)
        return Interval(max(enclosure.lo, naive.lo), min(enclosure.hi, naive.hi))

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lead = self.leading
        return Polynomial(c / lead for c in self.coeffs)

    def integer_primitive(self) -> "Polynomial":
        """Scale to integer coefficients with gcd 1 and positive leading coefficient."""
        if self.is_zero():
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return Polynomial(Fraction(c // g) for c in ints)

    def content_scale(self) -> Fraction:
        """The factor s with self == s * self.integer_primitive()."""
        prim = self.integer_primitive()
        return self.leading / prim.leading


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial([as_rational(x)])


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over Q (Euclid); gcd(0, 0) = 0."""
    while not b.is_zero():
        a, b = b, a % b
        b = b.monic() if not b.is_zero() else b
    return a.monic()


def squarefree_part(p: Polynomial) -> Polynomial:
    if p.is_zero():
        raise ValueError("zero polynomial has no squarefree part")
    if p.degree <= 0:
        return Polynomial([1])
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


# ---------------------------------------------------------------------------
# Sturm sequences
# ---------------------------------------------------------------------------


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        # Positive rescaling keeps the sign pattern and the Fractions small.
        seq.append(r.integer_primitive() if r.leading > 0 else -r.integer_primitive())
    return [q for q in seq if not q.is_zero()]


def sign_variations(seq: Sequence[Polynomial], x: Fraction) -> int:
    signs = [s for s in ((q(x) > 0) - (q(x) < 0) for q in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Polynomial, a: Number, b: Number, seq=None) -> int:
    """Number of distinct real roots of p in the half-open interval (a, b]."""
    seq = seq if seq is not None else sturm_sequence(squarefree_part(p))
    return sign_variations(seq, as_rational(a)) - sign_variations(seq, as_rational(b))


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def sturm_isolate(p: Polynomial, lo: Number, hi: Number) -> list[Interval]:
    """Isolating intervals for every distinct real root of p in the open interval (lo, hi).

    The returned intervals are pairwise disjoint, sorted, lie strictly inside
    (lo, hi) and each contains exactly one root; rational roots hit during
    bisection come back as point intervals.
    """
    if p.is_zero():
        raise ValueError("cannot isolate the roots of the zero polynomial")
    lo, hi = as_rational(lo), as_rational(hi)
    if not lo < hi:
        raise ValueError(f"need lo < hi, got ({lo}, {hi})")
    q = squarefree_part(p)
    if q.degree == 0:
        return []
    seq = sturm_sequence(q)

    def open_count(a, b):
        return count_roots(q, a, b, seq) - (1 if q(b) == 0 else 0)

    found: list[Interval] = []
    stack = [(lo, hi, open_count(lo, hi))]
    while stack:
        a, b, k = stack.pop()
        if k == 0:
            continue
        if k == 1 and q(a) != 0 and q(b) != 0:
            found.append(_shrink_inside(q, a, b))
            continue
        m = (a + b) / 2
        if q(m) == 0:
            found.append(Interval.point(m))
            stack.append((a, m, open_count(a, m)))
            stack.append((m, b, open_count(m, b)))
        else:
            left = open_count(a, m)
            stack.append((a, m, left))
            stack.append((m, b, k - left))
    return sorted(found, key=lambda iv: iv.lo)


def _shrink_inside(q: Polynomial, a: Fraction, b: Fraction) -> Interval:
    # Bisect until both endpoints are strictly inside (a, b), so that siblings
    # sharing an endpoint come out disjoint.
    lo, hi = a, b
    s_lo = _sign(q(lo))
    while lo == a or hi == b:
        m = (lo + hi) / 2
        s_m = _sign(q(m))
        if s_m == 0:
            return Interval.point(m)
        if s_m == s_lo:
            lo = m
        else:
            hi = m
    return Interval(lo, hi)


def refine_root(p: Polynomial, iv: Interval, target_width: Number) -> Interval:
    """Shrink an isolating interval of a simple root to width <= target_width.

    Each round tries an interval-Newton step and keeps it only when the result
    certifiably contracts; otherwise it bisects.
    """
    target_width = as_rational(target_width)
    if target_width <= 0:
        raise ValueError("target_width must be positive")
    if p.is_zero():
        raise ValueError("zero polynomial")
    q = squarefree_part(p)
    lo, hi = iv.lo, iv.hi
    if lo == hi:
        if q(lo) != 0:
            raise ValueError(f"point interval {lo} is not a root")
        return iv
    s_lo, s_hi = _sign(q(lo)), _sign(q(hi))
    if s_lo == 0:
        return Interval.point(lo)
    if s_hi == 0:
        return Interval.point(hi)
    if s_lo == s_hi:
        raise ValueError(f"no sign change of the polynomial on [{lo}, {hi}]")
    dq = q.derivative()
    while hi - lo > target_width:
        width = hi - lo
        m = (lo + hi) / 2
        s_m = _sign(q(m))
        if s_m == 0:
            return Interval.point(m)
        slope = dq.eval_interval(Interval(lo, hi))
        contracted = False
        if not slope.contains_zero():
            newton = Interval.point(m) - Interval.point(q(m)) / slope
            n_lo, n_hi = max(lo, newton.lo), min(hi, newton.hi)
            if n_lo <= n_hi and n_hi - n_lo < width / 2:
                bits = max(8, 2 * (-(width.numerator.bit_length() - width.denominator.bit_length())) + 8)
                n_lo, n_hi = floor_dyadic(n_lo, bits), ceil_dyadic(n_hi, bits)
                n_lo, n_hi = max(lo, n_lo), min(hi, n_hi)
                sa, sb = _sign(q(n_lo)), _sign(q(n_hi))
                if sa == 0:
                    return Interval.point(n_lo)
                if sb == 0:
                    return Interval.point(n_hi)
                if sa == s_lo and sb == s_hi and n_hi - n_lo < width / 2:
                    lo, hi = n_lo, n_hi
                    contracted = True
        if not contracted:
            if s_m == s_lo:
                lo = m
            else:
                hi = m
    return Interval(lo, hi)


# ---------------------------------------------------------------------------
# Transcendental constants
# ---------------------------------------------------------------------------


def euler_e(digits: int) -> Interval:
    """Enclosure of e of width <= 10**-digits from sum 1/k! plus the 2/(K+1)! tail bound."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    target = Fraction(1, 10**digits)
    partial = Fraction(0)
    term = Fraction(1)
    k = 0
    while True:
        partial += term
        k += 1
        term /= k
        # tail sum_{j>=k} 1/j! <= 2/k!
        tail = 2 * term
        if tail <= target:
            return Interval(partial, partial + tail)


def interval_sqrt(iv: Interval, digits: int) -> Interval:
    """Outward enclosure of sqrt over a positive interval.

    Rounding adds at most 10**-digits relative width on top of the image width.
    """
    if iv.lo <= 0:
        raise ValueError(f"sqrt needs a positive interval, got {iv}")
    # coarse positive lower bound for sqrt(lo)
    k = 0
    while math.isqrt(math.floor(iv.lo * 4**k)) == 0:
        k += 1
    coarse = Fraction(math.isqrt(math.floor(iv.lo * 4**k)), 2**k)
    # each endpoint moves by < 2**-bits <= 10**-digits * sqrt(lo) / 2
    bits = 1
    while Fraction(2**bits) * coarse < 2 * 10**digits:
        bits += 1
    s = 1 << bits
    lower = Fraction(math.isqrt(math.floor(iv.lo * s * s)), s)
    hi_scaled = math.ceil(iv.hi * s * s)
    r = math.isqrt(hi_scaled)
    if r * r < hi_scaled:
        r += 1
    return Interval(lower, Fraction(r, s))


def certified_constants(digits: int) -> tuple[Interval, Callable[[Interval], Interval]]:
    """Euler's number to 10**-digits and a sqrt with relative rounding <= 10**-digits."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    return euler_e(digits), lambda iv: interval_sqrt(Interval.coerce(iv), digits)
