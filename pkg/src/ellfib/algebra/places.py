"""Places of the projective line over QQ or QQ(a) and valuations at them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ellfib.algebra.fields import Poly, RationalFunction, poly_sort_key


class PlaceError(ValueError):
    pass


@dataclass(frozen=True)
class Place:
    """A closed point of P^1: a monic squarefree ``pi(t)`` or the point at infinity.

    Linear places are irreducible automatically; higher-degree ones are only
    usable once ``asserted_irreducible`` is set.
    """

    pi: Poly | None = None
    asserted_irreducible: bool = False
    _key: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.pi is None:
            object.__setattr__(self, "asserted_irreducible", True)
            object.__setattr__(self, "_key", (1,))
            return
        if self.pi.degree() < 1:
            raise PlaceError("a finite place needs a nonconstant polynomial")
        if self.pi.lc() != self.pi.base.one:
            object.__setattr__(self, "pi", self.pi.monic())
        if self.pi.degree() == 1:
            object.__setattr__(self, "asserted_irreducible", True)
        object.__setattr__(self, "_key", (0,) + poly_sort_key(self.pi))

    @classmethod
    def infinite(cls) -> "Place":
        return cls(None)

    @classmethod
    def linear(cls, ring, r) -> "Place":
        return cls(ring.gen - r)

    @property
    def is_infinite(self) -> bool:
        return self.pi is None

    @property
    def is_linear(self) -> bool:
        return self.pi is not None and self.pi.degree() == 1

    @property
    def degree(self) -> int:
        return 1 if self.pi is None else self.pi.degree()

    def root(self):
        """The point ``r`` of a linear place ``t - r``."""
        if not self.is_linear:
            raise PlaceError("only linear places have a rational root")
        return -self.pi.constant_coefficient()

    def sort_key(self) -> tuple:
        return self._key

    def label(self, var: str = "t") -> str:
        if self.pi is None:
            return "inf"
        if self.is_linear:
            from ellfib.expr import render_expression

            return f"{var}={render_expression(self.root())}"
        from ellfib.expr import render_expression

        return render_expression(self.pi)

    def __str__(self) -> str:
        return self.label(self.pi.var if self.pi is not None else "t")


def _poly_order(p: Poly, pi: Poly) -> tuple[int, Poly]:
    k = 0
    while p.degree() >= pi.degree():
        q, r = divmod(p, pi)
        if r:
            break
        p = q
        k += 1
    return k, p


def _split(f) -> tuple[Poly, Poly]:
    if isinstance(f, Poly):
        return f, f.ring.one
    if isinstance(f, RationalFunction):
        return f.num, f.den
    raise TypeError(f"expected a polynomial or rational function, got {f!r}")


def valuation_at(f, place: Place) -> int | float:
    """Order of vanishing of ``f`` at ``place``; ``math.inf`` for ``f = 0``."""
    num, den = _split(f)
    if not num:
        return math.inf
    if place.is_infinite:
        return den.degree() - num.degree()
    if not place.asserted_irreducible:
        raise PlaceError(f"place {place.pi} has unverified irreducibility")
    return _poly_order(num, place.pi)[0] - _poly_order(den, place.pi)[0]


def multiplicity(f, pi: Poly) -> int:
    """Largest ``k`` with ``pi**k`` dividing the numerator of ``f`` minus that of the denominator.

    Unlike :func:`valuation_at` this needs no irreducibility assertion; for a
    reducible ``pi`` it is the minimum over its irreducible factors.
    """
    num, den = _split(f)
    if not num:
        return math.inf
    return _poly_order(num, pi)[0] - _poly_order(den, pi)[0]


def leading_term(f, place: Place):
    """``(v, c)`` with ``f = c * pi**v + higher order`` at a linear or infinite place.

    At infinity the uniformizer is ``1/t``.
    """
    num, den = _split(f)
    if not num:
        return math.inf, num.base.zero
    if place.is_infinite:
        return den.degree() - num.degree(), num.lc() / den.lc()
    if not place.is_linear:
        raise PlaceError("leading terms are only available at linear places")
    kn, n1 = _poly_order(num, place.pi)
    kd, d1 = _poly_order(den, place.pi)
    r = place.root()
    return kn - kd, n1(r) / d1(r)


def reduce_at(f, place: Place):
    """Value of ``f`` in the residue field of a linear or infinite place; ``f`` must be regular there."""
    v, c = leading_term(f, place)
    if v < 0:
        raise PlaceError("function has a pole at the place")
    if v == 0:
        return c
    num, _ = _split(f)
    return num.base.zero
