"""Tame symbols on P^1, cycles on Neron polygons and the winding map.

A cycle on an n-gon is a tuple of rational functions, one per component,
whose zeros and poles sit at the node preimages and cancel across each
node.  Its winding number is the common integer ``w`` with
``div f_i = w([p_i+] - [p_i-])``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from ellfib.algebra.factor import rational_roots
from ellfib.algebra.fields import QQ, FracField, Poly, PolyRing, RationalFunction, tower
from ellfib.algebra.places import Place, leading_term, valuation_at
from ellfib.expr import parse_expression, render_expression

INF = "inf"
Point = Union[Fraction, str]

U_RING = PolyRing(QQ, "u")
U_FIELD = FracField(U_RING)


class ChowError(ValueError):
    pass


class IrrationalDivisorError(ChowError):
    pass


class SupportError(ChowError):
    """A component function has a zero or pole away from the marked points."""


def as_function(f, field=U_FIELD) -> RationalFunction:
    if isinstance(f, str):
        f = parse_expression(f, [field.var])
    return field(f)


def _place(p: Point, field=U_FIELD) -> Place:
    if p == INF:
        return Place.infinite()
    return Place.linear(field.ring, Fraction(p))


def order_at(f, p: Point) -> int:
    return valuation_at(as_function(f), _place(p))


def tame_symbol(f, g, p: Point) -> Fraction:
    """``(-1)^(v(f) v(g)) * (f^v(g) / g^v(f))(p)`` computed from leading coefficients."""
    f, g = as_function(f), as_function(g)
    if not f or not g:
        raise ChowError("tame symbol of a zero function")
    place = _place(p, f.field)
    vf, cf = leading_term(f, place)
    vg, cg = leading_term(g, place)
    value = cf ** vg / cg ** vf
    if not value:
        raise AssertionError("indeterminate tame symbol")
    return -value if (vf * vg) % 2 else value


def _rational_support(p: Poly) -> set[Fraction]:
    if p.degree() <= 0:
        return set()
    roots = rational_roots(p)
    rest = p.monic()
    for r in roots:
        lin = p.ring.gen - r
        while rest.degree() > 0 and not rest % lin:
            rest = rest.exact_div(lin)
    if rest.degree() > 0:
        raise IrrationalDivisorError(f"irrational zero or pole: factor {render_expression(rest)}")
    return roots


def divisor_support(*fs) -> list[Point]:
    """Sorted finite points of the divisors of ``fs``, followed by infinity."""
    pts: set[Fraction] = set()
    for f in fs:
        f = as_function(f)
        pts |= _rational_support(f.num) | _rational_support(f.den)
    return sorted(pts) + [INF]


def tame_symbols(f, g) -> list[tuple[Point, Fraction]]:
    return [(p, tame_symbol(f, g, p)) for p in divisor_support(f, g)]


def weil_reciprocity_check(f, g) -> bool:
    """Product of all tame symbols of ``{f, g}`` on P^1 equals 1."""
    prod = Fraction(1)
    for _, s in tame_symbols(f, g):
        prod *= s
    return prod == 1


# ---------------------------------------------------------------------------
# Neron polygons
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NeronPolygon:
    """``n`` projective lines glued cyclically: ``p_i+`` on line ``i`` meets ``p_(i+1)-``."""

    n: int
    marked: tuple[tuple[Point, Point], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ChowError("a polygon needs at least one component")
        marked = self.marked or tuple((Fraction(-1), Fraction(1)) for _ in range(self.n))
        marked = tuple(tuple(p if p == INF else Fraction(p) for p in pair) for pair in marked)
        if len(marked) != self.n:
            raise ChowError("one pair of marked points per component")
        for lo, hi in marked:
            if lo == hi:
                raise ChowError("marked points on a component must be distinct")
        object.__setattr__(self, "marked", marked)

    def p_minus(self, i: int) -> Point:
        return self.marked[i][0]

    def p_plus(self, i: int) -> Point:
        return self.marked[i][1]


@dataclass(frozen=True)
class PolygonCycle:
    polygon: NeronPolygon
    functions: tuple[RationalFunction, ...]

    def __post_init__(self):
        fs = tuple(as_function(f) for f in self.functions)
        if len(fs) != self.polygon.n:
            raise ChowError("one function per component")
        if any(not f for f in fs):
            raise ChowError("component functions must be nonzero")
        object.__setattr__(self, "functions", fs)
        P = self.polygon
        for i, f in enumerate(fs):
            allowed = {P.p_minus(i), P.p_plus(i)}
            for p in divisor_support(f):
                if p not in allowed and order_at(f, p) != 0:
                    raise SupportError(f"component {i + 1}: divisor not supported on marked points (at {p})")
        for i in range(P.n):
            j = (i + 1) % P.n
            if order_at(fs[i], P.p_plus(i)) + order_at(fs[j], P.p_minus(j)) != 0:
                raise ChowError(f"orders do not cancel at the node joining components {i + 1} and {j + 1}")

    def __mul__(self, other: "PolygonCycle") -> "PolygonCycle":
        if self.polygon != other.polygon:
            raise ChowError("cycles live on different polygons")
        return PolygonCycle(self.polygon, tuple(f * g for f, g in zip(self.functions, other.functions)))

    def __pow__(self, k: int) -> "PolygonCycle":
        return PolygonCycle(self.polygon, tuple(f ** k for f in self.functions))

    def to_json(self) -> dict:
        return {
            "n": self.polygon.n,
            "variable": U_FIELD.var,
            "marked_points": [[_point_str(p) for p in pair] for pair in self.polygon.marked],
            "functions": [render_expression(f) for f in self.functions],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PolygonCycle":
        var = data.get("variable", "u")
        if var != U_FIELD.var:
            raise ChowError(f"component functions must use the variable {U_FIELD.var!r}")
        marked = tuple(tuple(p if p == INF else Fraction(p) for p in pair) for pair in data["marked_points"])
        poly = NeronPolygon(int(data["n"]), marked)
        return cls(poly, tuple(as_function(s) for s in data["functions"]))


def _point_str(p: Point) -> str:
    return INF if p == INF else str(p)


def constant_cycle(polygon: NeronPolygon, values: Sequence) -> PolygonCycle:
    return PolygonCycle(polygon, tuple(U_FIELD(Fraction(v)) for v in values))


def winding_number(z: PolygonCycle) -> int:
    P = z.polygon
    ws = {order_at(f, P.p_plus(i)) for i, f in enumerate(z.functions)}
    if len(ws) != 1:
        raise AssertionError("cocycle condition violated")
    return ws.pop()


# ---------------------------------------------------------------------------
# the local cycle on y^2 = x^3 + x^2 + c(s)
# ---------------------------------------------------------------------------

_SX = tower(["s", "x"])  # QQ(s)(x)
_S = _SX.base  # QQ(s)
_S_PLACE = Place.linear(_S.ring, 0)


def _gauss_order(f: RationalFunction) -> int | float:
    """Order in ``s`` of an element of QQ(s)(x), via the Gauss valuation."""
    if not f:
        return math.inf
    vn = min(valuation_at(c, _S_PLACE) for c in f.num.coeffs if c)
    vd = min(valuation_at(c, _S_PLACE) for c in f.den.coeffs if c)
    return vn - vd


@dataclass(frozen=True)
class SurfaceFunction:
    """``p0 + y p1`` with ``p0, p1`` in QQ(s)(x), on the surface ``y^2 = x^3 + x^2 + c(s)``."""

    p0: RationalFunction
    p1: RationalFunction

    def order_along_fiber(self) -> int | float:
        """Order along ``s = 0``; 1 and y stay independent on the nodal fiber, so it is the minimum."""
        return min(_gauss_order(self.p0), _gauss_order(self.p1))

    def leading_restriction(self) -> RationalFunction:
        """``(s^-v F)|_{s=0}`` pulled back along ``x = u^2 - 1``, ``y = u(u^2 - 1)``."""
        v = self.order_along_fiber()
        if v == math.inf:
            raise ChowError("zero function")
        scale = _SX(_S.gen) ** (-v)
        u = U_FIELD.gen
        x_u, y_u = u * u - 1, u * (u * u - 1)

        def restrict(p: RationalFunction) -> RationalFunction:
            p = p * scale
            num = p.num.map_coefficients(lambda c: _at_zero(c), PolyRing(QQ, "x"))
            den = p.den.map_coefficients(lambda c: _at_zero(c), PolyRing(QQ, "x"))
            if not den:
                raise AssertionError("denominator vanishes on the fiber")
            return num(x_u) / den(x_u)

        out = restrict(self.p0) + y_u * restrict(self.p1)
        if not out:
            raise AssertionError("leading part vanishes on the fiber")
        return out


def _at_zero(c) -> Fraction:
    v, lead = leading_term(c, _S_PLACE)
    if v < 0:
        raise AssertionError("coefficient has a pole along the fiber")
    return lead if v == 0 else Fraction(0)


def _fiber_symbol(F: tuple[SurfaceFunction, SurfaceFunction], G: tuple[SurfaceFunction, SurfaceFunction]):
    """Tame symbol along ``s = 0`` of ``{F, G}`` with ``F``, ``G`` given as numerator/denominator pairs."""
    vF = F[0].order_along_fiber() - F[1].order_along_fiber()
    vG = G[0].order_along_fiber() - G[1].order_along_fiber()
    lF = F[0].leading_restriction() / F[1].leading_restriction()
    lG = G[0].leading_restriction() / G[1].leading_restriction()
    value = lF ** vG / lG ** vF
    return (-value if (vF * vG) % 2 else value), vF, vG


@dataclass(frozen=True)
class LocalCycle:
    """Boundary of ``{(y - x)/(y + x), -c/x^3}`` on the nodal fiber at ``s = 0``.

    The correction ``f^*(lambda)`` that makes the cycle vertical to the zero
    section is a unit pulled back from the base; it does not change the
    winding number and is kept symbolic.
    """

    c: Poly
    cycle: PolygonCycle
    order_f: int
    order_g: int
    symbol_pair: tuple[str, str] = ("(y - x)/(y + x)", "-c/x^3")
    correction: str = "f^*(lambda), lambda not determined"

    @property
    def winding(self) -> int:
        return winding_number(self.cycle)

    def to_json(self) -> dict:
        return {
            "c": render_expression(self.c),
            "ord_s_c": valuation_at(self.c, _S_PLACE),
            "symbol": list(self.symbol_pair),
            "order_along_fiber": [self.order_f, self.order_g],
            "cycle": self.cycle.to_json(),
            "winding": self.winding,
            "correction": self.correction,
        }


def construct_local_cycle(c) -> LocalCycle:
    """Explicit cycle with nonzero winding on the fiber ``s = 0`` of ``y^2 = x^3 + x^2 + c(s)``.

    The fiber is the nodal cubic ``y^2 = x^3 + x^2``, normalized by
    ``x = u^2 - 1``, ``y = u(u^2 - 1)``; the node has preimages ``u = -1``
    (p-) and ``u = 1`` (p+).
    """
    if isinstance(c, str):
        c = parse_expression(c, ["s"])
    c = _S.ring(c)
    if not c:
        raise ChowError("c must be nonzero")
    if c.constant_coefficient():
        raise ChowError("c must vanish at s = 0")
    x = _SX.gen
    zero = _SX.zero
    one = _SX.one
    y_minus_x = SurfaceFunction(-x, one)
    y_plus_x = SurfaceFunction(x, one)
    minus_c = SurfaceFunction(_SX(-_S(c)), zero)
    x_cubed = SurfaceFunction(x ** 3, zero)
    symbol, vF, vG = _fiber_symbol((y_minus_x, y_plus_x), (minus_c, x_cubed))
    cycle = PolygonCycle(NeronPolygon(1), (symbol,))
    return LocalCycle(c, cycle, vF, vG)
