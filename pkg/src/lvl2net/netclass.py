"""Network classes: the level-2 tree-child functional equation, phi(z), and reference constants."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .numerics import Interval, Polynomial, as_rational, poly_gcd
from .series import (Add, Const, Div, Mul, Pow, SeriesExpr, Sub, TruncatedSeries,
                     U, X, _Binary, series_mul, series_reciprocal)


class EquationShapeError(ValueError):
    pass


class RationalFunction:
    """num/den over Q, kept reduced.

    Normal form: gcd(num, den) is constant, all coefficients are integers with
    joint gcd 1, and den(0) > 0 (leading coefficient of den > 0 if den(0) = 0).
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Polynomial) else Polynomial([as_rational(num)])
        if den is None:
            den = Polynomial([1])
        elif not isinstance(den, Polynomial):
            den = Polynomial([as_rational(den)])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Polynomial(), Polynomial([1])
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        scale = math.lcm(*(c.denominator for c in num.coeffs + den.coeffs))
        ints = [int(c * scale) for c in num.coeffs + den.coeffs]
        content = math.gcd(*ints)
        anchor = den[0] if den[0] != 0 else den.leading
        factor = Fraction(scale, content) * (1 if anchor > 0 else -1)
        self.num = Polynomial(c * factor for c in num.coeffs)
        self.den = Polynomial(c * factor for c in den.coeffs)

    @classmethod
    def variable(cls) -> "RationalFunction":
        return cls(Polynomial([0, 1]))

    def __repr__(self):
        return f"RationalFunction(({self.num}) / ({self.den}))"

    def __str__(self):
        return f"({self.num}) / ({self.den})"

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def _coerce(self, other):
        return other if isinstance(other, RationalFunction) else RationalFunction(other)

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(1) / (self ** (-k))
        return RationalFunction(self.num ** k, self.den ** k)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def derivative(self) -> "RationalFunction":
        p, q = self.num, self.den
        return RationalFunction(p.derivative() * q - p * q.derivative(), q * q)

    def __call__(self, z):
        if isinstance(z, Interval):
            return self.eval_interval(z)
        d = self.den(z)
        if d == 0:
            raise ZeroDivisionError(f"pole at {z}")
        return self.num(z) / d

    def eval_interval(self, iv: Interval) -> Interval:
        return self.num.eval_centered(iv) / self.den.eval_centered(iv)

    def analytic_at_zero(self) -> bool:
        return self.den[0] != 0

    def same_up_to_constant(self, num: Polynomial, den: Polynomial) -> bool:
        """True if num/den equals self with both polynomials scaled by one common constant."""
        other = RationalFunction(num, den)
        if other != self:
            return False
        k = num.leading / self.num.leading
        return num == self.num * k and den == self.den * k


def tree_child_equation() -> SeriesExpr:
    """Right-hand side of the level-2 tree-child functional equation T = X + F(T)."""
    q = 1 / (1 - U)
    q2 = q ** 2
    bracket = q2 - 1
    half, three_halves, quarter = Fraction(1, 2), Fraction(3, 2), Fraction(1, 4)
    return (X
            + half * U ** 2
            + half * bracket * U
            + three_halves * q2 * (U / (1 - U)) * bracket * U
            + q ** 4 * bracket * U ** 2
            + quarter * q2 * bracket ** 2 * U ** 2)


def catalan_equation() -> SeriesExpr:
    """T = X + T^2, the binary-tree control case (phi = 1/(1-z))."""
    return X + U ** 2


def _top_level_summands(expr: SeriesExpr) -> list[SeriesExpr]:
    if isinstance(expr, Add):
        return _top_level_summands(expr.left) + _top_level_summands(expr.right)
    return [expr]


def split_equation(eq: SeriesExpr) -> SeriesExpr | None:
    """Return F for eq = X + F(U); None when F is empty. Raises on any other shape."""
    summands = _top_level_summands(eq)
    where = [i for i, s in enumerate(summands) if s == X]
    if len(where) != 1:
        raise EquationShapeError("X must appear exactly once as a top-level summand")
    rest = summands[:where[0]] + summands[where[0] + 1:]
    for s in rest:
        if s.mentions_x():
            raise EquationShapeError(f"X appears inside {s.prefix()}")
    if not rest:
        return None
    f = rest[0]
    for s in rest[1:]:
        f = Add(f, s)
    return f


def expr_to_rational_function(expr: SeriesExpr) -> RationalFunction:
    """Evaluate an X-free expression with U := z over Q(z)."""
    z = RationalFunction.variable()
    memo: dict[int, RationalFunction] = {}

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if node == U:
            out = z
        elif node == X:
            raise EquationShapeError("X inside F")
        elif isinstance(node, Const):
            out = RationalFunction(node.value)
        elif isinstance(node, Pow):
            out = go(node.base) ** node.exponent
        elif isinstance(node, _Binary):
            a, b = go(node.left), go(node.right)
            if isinstance(node, Add):
                out = a + b
            elif isinstance(node, Sub):
                out = a - b
            elif isinstance(node, Mul):
                out = a * b
            else:
                out = a / b
        else:
            raise TypeError(f"unknown node {node!r}")
        memo[key] = out
        return out

    return go(expr)


def derive_phi(eq: SeriesExpr) -> RationalFunction:
    """phi(z) = z / (z - F(z)) for T = X + F(T), so that T = x * phi(T)."""
    f = split_equation(eq)
    z = RationalFunction.variable()
    f_rf = RationalFunction(0) if f is None else expr_to_rational_function(f)
    denom = z - f_rf
    if denom.is_zero():
        raise EquationShapeError("z - F(z) vanishes identically")
    return z / denom


def phi_series(phi: RationalFunction, order: int) -> TruncatedSeries:
    """Taylor expansion of phi at 0 through z^order."""
    if not phi.analytic_at_zero():
        raise ZeroDivisionError("phi has a pole at 0")
    num = TruncatedSeries([phi.num[k] for k in range(order + 1)])
    den = TruncatedSeries([phi.den[k] for k in range(order + 1)])
    return series_mul(num, series_reciprocal(den))


# ---------------------------------------------------------------------------
# Class registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NetworkClassSpec:
    name: str
    level: int
    tree_child: bool = False
    galled: bool = False
    outer_planar: bool = False
    equation: Optional[SeriesExpr] = None
    # decimal strings: comparison targets only, never parsed into floats
    reference_c: Optional[str] = None
    reference_gamma: Optional[str] = None
    description: str = ""

    @property
    def has_equation(self) -> bool:
        return self.equation is not None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "level": self.level,
            "tree_child": self.tree_child,
            "galled": self.galled,
            "outer_planar": self.outer_planar,
            "equation": self.equation.prefix() if self.equation is not None else None,
            "reference_c": self.reference_c,
            "reference_gamma": self.reference_gamma,
            "description": self.description,
        }


_TABLE = [
    # (suffix, tree_child, galled, arbitrary (c, gamma), outer planar (c, gamma))
    ("general", False, False, ("0.02931010", "15.4332995"), ("0.03486095", "12.9230111")),
    ("tree-child", True, False, ("0.06674185", "4.67104907"), ("0.07450612", "4.33252428")),
    ("galled", False, True, ("0.05885954", "6.42241234"), ("0.06965278", "5.39994365")),
    ("gtc", True, True, ("0.07888067", "3.98275804"), ("0.08586449", "3.83201916")),
]


def _build_registry() -> dict[str, NetworkClassSpec]:
    out: dict[str, NetworkClassSpec] = {}
    for suffix, tc, galled, arb, outer in _TABLE:
        name = f"level2-{suffix}"
        out[name] = NetworkClassSpec(
            name=name, level=2, tree_child=tc, galled=galled, outer_planar=False,
            equation=tree_child_equation() if suffix == "tree-child" else None,
            reference_c=arb[0], reference_gamma=arb[1],
            description=f"level-2 {suffix} networks (arbitrary / planar / upward planar)",
        )
        oname = f"{name}-outerplanar"
        out[oname] = NetworkClassSpec(
            name=oname, level=2, tree_child=tc, galled=galled, outer_planar=True,
            reference_c=outer[0], reference_gamma=outer[1],
            description=f"level-2 {suffix} networks (terminal planar = outer planar)",
        )
    out["trees"] = NetworkClassSpec(name="trees", level=0, description="binary phylogenetic trees")
    out["level1"] = NetworkClassSpec(name="level1", level=1, description="level-1 networks")
    out["catalan"] = NetworkClassSpec(
        name="catalan", level=0, equation=catalan_equation(),
        description="control equation T = x + T^2 (no network class)",
    )
    return out


REGISTRY: dict[str, NetworkClassSpec] = _build_registry()


def reference_table() -> list[NetworkClassSpec]:
    """The eight reference cells: four arbitrary-planarity classes, then their outer-planar versions."""
    names = [f"level2-{s}" for s, *_ in _TABLE] + [f"level2-{s}-outerplanar" for s, *_ in _TABLE]
    return [REGISTRY[n] for n in names]


def lookup(name: str) -> NetworkClassSpec:
    try:
        return REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(REGISTRY))
        raise KeyError(f"unknown class {name!r}; known classes: {known}") from None


def registry_json() -> str:
    return json.dumps([REGISTRY[k].to_dict() for k in sorted(REGISTRY)], indent=2)
