"""Truncated power series over Q and a small expression language for functional equations.

A functional equation ``U = expr(X, U)`` is written with the module-level
symbols :data:`X` and :data:`U`::

    >>> from lvl2net.series import X, U, fixed_point_solve
    >>> fixed_point_solve(X + U**2, 4).coeffs
    (Fraction(0, 1), Fraction(1, 1), Fraction(1, 1), Fraction(2, 1), Fraction(5, 1))
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .numerics import as_rational


class SeriesError(ArithmeticError):
    pass


class NotInvertibleError(SeriesError):
    def __init__(self, message="not invertible as a power series", path=()):
        self.path = tuple(path)
        where = f" at {'/'.join(self.path)}" if self.path else ""
        super().__init__(message + where)


class ContractionError(SeriesError):
    def __init__(self, order: int, detail: str = ""):
        self.order = order
        msg = f"fixed-point iteration is not contracting at order {order}"
        super().__init__(msg + (f": {detail}" if detail else ""))


# ---------------------------------------------------------------------------
# Truncated series
# ---------------------------------------------------------------------------


def _common_denominator(cs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = math.lcm(*(c.denominator for c in cs)) if cs else 1
    return [c.numerator * (den // c.denominator) for c in cs], den


def _int_convolve(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * (n + 1)
    nz_b = [(j, y) for j, y in enumerate(b[: n + 1]) if y]
    for i, x in enumerate(a[: n + 1]):
        if not x:
            continue
        lim = n - i
        for j, y in nz_b:
            if j > lim:
                break
            out[i + j] += x * y
    return out


class TruncatedSeries:
    """c_0 + c_1 x + ... + c_N x^N with exact rational coefficients.

    Binary operations truncate to the smaller of the two orders.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = tuple(as_rational(c) for c in coeffs)
        if not cs:
            raise ValueError("a truncated series needs at least one coefficient")
        self.coeffs: tuple[Fraction, ...] = cs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls([0] * (order + 1))

    @classmethod
    def constant(cls, c, order: int) -> "TruncatedSeries":
        return cls([c] + [0] * order)

    @classmethod
    def variable(cls, order: int) -> "TruncatedSeries":
        """The series x at the given order."""
        if order == 0:
            return cls([0])
        return cls([0, 1] + [0] * (order - 1))

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"TruncatedSeries([{', '.join(str(c) for c in self.coeffs)}])"

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1])

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(as_rational(other), self.order)

    def __neg__(self):
        return TruncatedSeries(-c for c in self.coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return TruncatedSeries(self.coeffs[k] + other.coeffs[k] for k in range(n + 1))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "TruncatedSeries":
        c = as_rational(c)
        return TruncatedSeries(c * a for a in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        return series_mul(self, other)

    __rmul__ = __mul__

    def reciprocal(self) -> "TruncatedSeries":
        return series_reciprocal(self)

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(1 / as_rational(other))
        n = min(self.order, other.order)
        return series_mul(self.truncate(n), series_reciprocal(other.truncate(n)))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return series_reciprocal(self) ** (-k)
        result = TruncatedSeries.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                result = series_mul(result, base)
            k >>= 1
            if k:
                base = series_mul(base, base)
        return result

    def derivative(self) -> "TruncatedSeries":
        """d/dx; the result has order N-1 (order 0 stays a zero constant)."""
        if self.order == 0:
            return TruncatedSeries([0])
        return TruncatedSeries(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def to_json(self) -> str:
        return json.dumps([f"{c.numerator}/{c.denominator}" for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> "TruncatedSeries":
        return cls(Fraction(s) for s in json.loads(text))


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at min(a.order, b.order)."""
    n = min(a.order, b.order)
    ai, da = _common_denominator(a.coeffs[: n + 1])
    bi, db = _common_denominator(b.coeffs[: n + 1])
    den = da * db
    return TruncatedSeries(Fraction(c, den) for c in _int_convolve(ai, bi, n))


def series_reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    """1/a for a with nonzero constant term."""
    if a.coeffs[0] == 0:
        raise NotInvertibleError()
    ints, den = _common_denominator(a.coeffs)
    # a = A/den, 1/a = den * (1/A); with A_0 = c, [x^n](1/A) = B_n / c^(n+1)
    c = ints[0]
    n = a.order
    B = [1]
    cpow = [1]
    for k in range(1, n + 1):
        cpow.append(cpow[-1] * c)
    for m in range(1, n + 1):
        acc = 0
        for k in range(1, m + 1):
            if ints[k]:
                acc += ints[k] * B[m - k] * cpow[k - 1]
        B.append(-acc)
    out = []
    cp = c
    for m in range(n + 1):
        out.append(Fraction(B[m] * den, cp))
        cp *= c
    return TruncatedSeries(out)


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


class SeriesExpr:
    """Expression tree over X, U, rational constants, + - * / and integer powers."""

    def __add__(self, other):
        return Add(self, _expr(other))

    def __radd__(self, other):
        return Add(_expr(other), self)

    def __sub__(self, other):
        return Sub(self, _expr(other))

    def __rsub__(self, other):
        return Sub(_expr(other), self)

    def __mul__(self, other):
        return Mul(self, _expr(other))

    def __rmul__(self, other):
        return Mul(_expr(other), self)

    def __truediv__(self, other):
        return Div(self, _expr(other))

    def __rtruediv__(self, other):
        return Div(_expr(other), self)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return Pow(self, k)

    def __neg__(self):
        return Sub(Const(Fraction(0)), self)

    def __str__(self):
        return self.prefix()

    def children(self) -> tuple["SeriesExpr", ...]:
        return ()

    def prefix(self) -> str:
        raise NotImplementedError

    def mentions_x(self) -> bool:
        return any(c.mentions_x() for c in self.children())

    def mentions_u(self) -> bool:
        return any(c.mentions_u() for c in self.children())


@dataclass(frozen=True, eq=True)
class _Var(SeriesExpr):
    name: str

    def prefix(self):
        return self.name

    def mentions_x(self):
        return self.name == "X"

    def mentions_u(self):
        return self.name == "U"


@dataclass(frozen=True, eq=True)
class Const(SeriesExpr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_rational(self.value))

    def prefix(self):
        return str(self.value)


@dataclass(frozen=True, eq=True)
class _Binary(SeriesExpr):
    left: SeriesExpr
    right: SeriesExpr
    op = "?"

    def children(self):
        return (self.left, self.right)

    def prefix(self):
        return f"({self.op} {self.left.prefix()} {self.right.prefix()})"


class Add(_Binary):
    op = "+"


class Sub(_Binary):
    op = "-"


class Mul(_Binary):
    op = "*"


class Div(_Binary):
    op = "/"


@dataclass(frozen=True, eq=True)
class Pow(SeriesExpr):
    base: SeriesExpr
    exponent: int

    def children(self):
        return (self.base,)

    def prefix(self):
        return f"(^ {self.base.prefix()} {self.exponent})"


X = _Var("X")
U = _Var("U")


def _expr(x) -> SeriesExpr:
    if isinstance(x, SeriesExpr):
        return x
    return Const(as_rational(x))


def parse_prefix(text: str) -> SeriesExpr:
    """Inverse of ``SeriesExpr.prefix``."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            op = tokens[pos]
            pos += 1
            if op == "^":
                base = take()
                k = int(tokens[pos])
                pos += 1
                node = Pow(base, k)
            else:
                a, b = take(), take()
                node = {"+": Add, "-": Sub, "*": Mul, "/": Div}[op](a, b)
            if tokens[pos] != ")":
                raise ValueError(f"expected ')' at token {pos}")
            pos += 1
            return node
        if tok == "X":
            return X
        if tok == "U":
            return U
        return Const(Fraction(tok))

    node = take()
    if pos != len(tokens):
        raise ValueError("trailing tokens in expression")
    return node


_CHILD_NAMES = {Pow: ("base",)}


def _child_names(node) -> tuple[str, ...]:
    return _CHILD_NAMES.get(type(node), ("left", "right"))


def eval_expr(expr: SeriesExpr, x_series: TruncatedSeries,
              u_series: TruncatedSeries) -> TruncatedSeries:
    """Evaluate the tree with X := x_series, U := u_series at their common order."""
    order = min(x_series.order, u_series.order)
    xs, us = x_series.truncate(order), u_series.truncate(order)
    memo: dict[int, TruncatedSeries] = {}

    def go(node: SeriesExpr, path: tuple[str, ...]) -> TruncatedSeries:
        key = id(node)
        if key in memo:
            return memo[key]
        if node is X or node == X:
            out = xs
        elif node is U or node == U:
            out = us
        elif isinstance(node, Const):
            out = TruncatedSeries.constant(node.value, order)
        elif isinstance(node, Pow):
            base = go(node.base, path + ("base",))
            try:
                out = base ** node.exponent
            except NotInvertibleError:
                raise NotInvertibleError(path=path) from None
        elif isinstance(node, _Binary):
            a = go(node.left, path + ("left",))
            b = go(node.right, path + ("right",))
            if isinstance(node, Add):
                out = a + b
            elif isinstance(node, Sub):
                out = a - b
            elif isinstance(node, Mul):
                out = series_mul(a, b)
            else:
                if b.coeffs[0] == 0:
                    raise NotInvertibleError(path=path + ("right",))
                out = series_mul(a, series_reciprocal(b))
        else:
            raise TypeError(f"unknown expression node {node!r}")
        memo[key] = out
        return out

    return go(expr, ())


def eval_with_derivative(expr: SeriesExpr, x_series: TruncatedSeries,
                         u_series: TruncatedSeries) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Value and partial derivative with respect to U (forward mode)."""
    order = min(x_series.order, u_series.order)
    xs, us = x_series.truncate(order), u_series.truncate(order)
    zero = TruncatedSeries.zero(order)
    one = TruncatedSeries.constant(1, order)
    memo: dict[int, tuple[TruncatedSeries, TruncatedSeries]] = {}

    def go(node, path):
        key = id(node)
        if key in memo:
            return memo[key]
        if node == X:
            out = (xs, zero)
        elif node == U:
            out = (us, one)
        elif isinstance(node, Const):
            out = (TruncatedSeries.constant(node.value, order), zero)
        elif isinstance(node, Pow):
            v, d = go(node.base, path + ("base",))
            k = node.exponent
            if k == 0:
                out = (one, zero)
            else:
                try:
                    out = (v ** k, (v ** (k - 1) * d).scale(k))
                except NotInvertibleError:
                    raise NotInvertibleError(path=path) from None
        else:
            (a, da), (b, db) = go(node.left, path + ("left",)), go(node.right, path + ("right",))
            if isinstance(node, Add):
                out = (a + b, da + db)
            elif isinstance(node, Sub):
                out = (a - b, da - db)
            elif isinstance(node, Mul):
                out = (series_mul(a, b), series_mul(da, b) + series_mul(a, db))
            else:
                if b.coeffs[0] == 0:
                    raise NotInvertibleError(path=path + ("right",))
                rb = series_reciprocal(b)
                q = series_mul(a, rb)
                out = (q, series_mul(da - series_mul(q, db), rb))
        memo[key] = out
        return out

    return go(expr, ())


def _first_difference(a: TruncatedSeries, b: TruncatedSeries) -> int | None:
    for k, (p, q) in enumerate(zip(a.coeffs, b.coeffs)):
        if p != q:
            return k
    return None


def fixed_point_solve(expr: SeriesExpr, order: int, method: str = "newton") -> TruncatedSeries:
    """The unique S with S = expr(X, S) through x^order.

    ``method="iterate"`` is plain substitution from the zero series, gaining one
    coefficient per round. ``method="newton"`` (default) runs the same fixed
    point through Newton steps, doubling the number of settled coefficients
    per round. Both check that settled coefficients never move again and
    finish with a residual check.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    if method == "iterate":
        sol = _solve_iterate(expr, order)
    elif method == "newton":
        sol = _solve_newton(expr, order)
    else:
        raise ValueError(f"unknown method {method!r}")
    residual = eval_expr(expr, TruncatedSeries.variable(order), sol) - sol
    bad = residual.valuation()
    if bad is not None:
        raise ContractionError(bad, "residual does not vanish")
    return sol


def _solve_iterate(expr, order):
    s = TruncatedSeries.zero(order)
    settled = -1  # coefficients 0..settled are final
    x = TruncatedSeries.variable(order)
    for _ in range(order + 2):
        new = eval_expr(expr, x, s)
        k = _first_difference(new, s)
        if k is None:
            return new
        if k <= settled:
            raise ContractionError(k, "a settled coefficient changed")
        settled += 1
        s = new
    raise ContractionError(_first_difference(eval_expr(expr, x, s), s) or 0,
                           "did not stabilise")


def _solve_newton(expr, order):
    s = TruncatedSeries.zero(order)
    x = TruncatedSeries.variable(order)
    _, d0 = eval_with_derivative(expr, x.truncate(0), s.truncate(0))
    if d0.coeffs[0] != 0:
        value0 = eval_expr(expr, x, s)
        raise ContractionError(value0.valuation() or 0,
                               f"d expr/dU has constant term {d0.coeffs[0]}")
    settled = -1
    work = 0
    while True:
        xs, cur = x.truncate(work), s.truncate(work)
        value, deriv = eval_with_derivative(expr, xs, cur)
        if deriv.coeffs[0] != 0:
            raise ContractionError(settled + 1, f"d expr/dU has constant term {deriv.coeffs[0]}")
        step = series_mul(value - cur, series_reciprocal(1 - deriv))
        new = cur + step
        k = _first_difference(new, cur)
        if k is not None and k <= settled:
            raise ContractionError(k, "a settled coefficient changed")
        padded = TruncatedSeries(new.coeffs + s.coeffs[work + 1:])
        if work == order and k is None:
            return padded
        settled = work
        s = padded
        work = min(order, 2 * work + 1)
