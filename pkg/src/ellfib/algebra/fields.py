"""Exact coefficient fields and univariate polynomial towers.

Three kinds of parent objects are provided:

* ``QQ`` -- the rationals, with elements represented as :class:`fractions.Fraction`;
* :class:`PolyRing` -- dense univariate polynomials ``K[v]`` over a field ``K``;
* :class:`FracField` -- the fraction field ``K(v)`` of such a ring.

Because a ``FracField`` is itself a field, towers such as ``QQ(a)(t)[x]`` are
built by nesting.  All elements are immutable and hashable.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Sequence


class CoercionError(TypeError):
    """Raised when a value cannot be interpreted in the requested parent."""


class RationalField:
    """The field of rational numbers."""

    depth = 0
    variables: tuple[str, ...] = ()
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x: Any) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int) and not isinstance(x, bool):
            return Fraction(x)
        if isinstance(x, Poly) and x.degree() <= 0:
            return self(x.constant_coefficient())
        if isinstance(x, RationalFunction) and x.num.degree() <= 0 and x.den.degree() == 0:
            return self(x.num.constant_coefficient())
        raise CoercionError(f"cannot coerce {x!r} to QQ")

    def contains(self, x: Any) -> bool:
        return isinstance(x, Fraction)

    def __repr__(self) -> str:
        return "QQ"

    def __reduce__(self):
        return "QQ"


QQ = RationalField()


@lru_cache(maxsize=None)
def PolyRing(base, var: str) -> "_PolyRing":
    """Return the (cached) polynomial ring ``base[var]``."""
    if var in base.variables:
        raise ValueError(f"variable {var!r} already used in {base!r}")
    return _PolyRing(base, var)


@lru_cache(maxsize=None)
def FracField(ring: "_PolyRing") -> "_FracField":
    """Return the (cached) fraction field of a polynomial ring."""
    return _FracField(ring)


def tower(variables: Sequence[str]) -> "_FracField | RationalField":
    """Build ``QQ(v0)(v1)...(vk)`` for the listed variables, innermost last."""
    field: Any = QQ
    for v in variables:
        field = FracField(PolyRing(field, v))
    return field


class _PolyRing:
    is_field = False

    def __init__(self, base, var: str):
        self.base = base
        self.var = var
        self.depth = base.depth + 1
        self.variables = base.variables + (var,)
        self.zero = Poly(self, ())
        self.one = Poly(self, (base.one,))
        self.gen = Poly(self, (base.zero, base.one))

    def __repr__(self) -> str:
        return f"{self.base!r}[{self.var}]"

    def __call__(self, x: Any) -> "Poly":
        if isinstance(x, Poly) and x.ring is self:
            return x
        if isinstance(x, RationalFunction) and x.field.ring is self:
            if x.den.is_one():
                return x.num
            raise CoercionError(f"{x} is not a polynomial")
        return self.constant(self.base(x))

    def contains(self, x: Any) -> bool:
        return isinstance(x, Poly) and x.ring is self

    def constant(self, c) -> "Poly":
        return Poly(self, (c,))

    def from_coefficients(self, coeffs: Iterable[Any]) -> "Poly":
        """Build a polynomial from coefficients listed in increasing degree."""
        return Poly(self, tuple(self.base(c) for c in coeffs))

    def monomial(self, c, k: int) -> "Poly":
        c = self.base(c)
        return Poly(self, (self.base.zero,) * k + (c,))

    @property
    def fraction_field(self) -> "_FracField":
        return FracField(self)


class _FracField:
    is_field = True

    def __init__(self, ring: _PolyRing):
        self.ring = ring
        self.base = ring.base
        self.var = ring.var
        self.depth = ring.depth
        self.variables = ring.variables
        self.zero = RationalFunction(self, ring.zero, ring.one, _reduced=True)
        self.one = RationalFunction(self, ring.one, ring.one, _reduced=True)
        self.gen = RationalFunction(self, ring.gen, ring.one, _reduced=True)

    def __repr__(self) -> str:
        return f"{self.base!r}({self.var})"

    def __call__(self, x: Any) -> "RationalFunction":
        if isinstance(x, RationalFunction) and x.field is self:
            return x
        p = self.ring(x)
        return RationalFunction(self, p, self.ring.one, _reduced=True)

    def contains(self, x: Any) -> bool:
        return isinstance(x, RationalFunction) and x.field is self


def _trim(coeffs: tuple) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return coeffs[:n] if n != len(coeffs) else coeffs


class Poly:
    """Dense univariate polynomial; ``coeffs[i]`` multiplies ``var**i``."""

    __slots__ = ("ring", "coeffs", "_hash")

    def __init__(self, ring: _PolyRing, coeffs: tuple):
        self.ring = ring
        self.coeffs = _trim(tuple(coeffs))
        self._hash = None

    # -- basic queries -------------------------------------------------
    @property
    def var(self) -> str:
        return self.ring.var

    @property
    def base(self):
        return self.ring.base

    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == self.base.one

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.base.zero

    def constant_coefficient(self):
        return self.coeffs[0] if self.coeffs else self.base.zero

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.base.zero

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        if lc == self.base.one:
            return self
        inv = self.base.one / lc
        return Poly(self.ring, tuple(c * inv for c in self.coeffs))

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Poly | None":
        try:
            return self.ring(other)
        except CoercionError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(self.ring, tuple(out))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, tuple(-c for c in self.coeffs))

    def __pos__(self) -> "Poly":
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return self.ring.zero
        if len(b) == 1:
            c = b[0]
            return Poly(self.ring, tuple(x * c for x in a))
        if len(a) == 1:
            c = a[0]
            return Poly(self.ring, tuple(c * x for x in b))
        out = [self.base.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly(self.ring, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("polynomial division by zero")
        ring = self.ring
        if o.degree() == 0:
            inv = self.base.one / o.coeffs[0]
            return Poly(ring, tuple(c * inv for c in self.coeffs)), ring.zero
        rem = list(self.coeffs)
        db = o.degree()
        lc_inv = self.base.one / o.coeffs[-1]
        if len(rem) <= db:
            return ring.zero, self
        quot = [self.base.zero] * (len(rem) - db)
        bc = o.coeffs
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            q = c * lc_inv
            quot[k - db] = q
            for j in range(db + 1):
                rem[k - db + j] = rem[k - db + j] - q * bc[j]
        return Poly(ring, tuple(quot)), Poly(ring, tuple(rem[:db]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        """Divide, raising ``ArithmeticError`` if the remainder is nonzero."""
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __truediv__(self, other):
        return frac_of(self).__truediv__(other)

    def __rtruediv__(self, other):
        frac = self.ring.fraction_field
        try:
            o = frac(other)
        except CoercionError:
            return NotImplemented
        return o / frac(self)

    # -- comparison ----------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly) and other.ring is self.ring:
            return self.coeffs == other.coeffs
        if isinstance(other, RationalFunction):
            return other == self
        try:
            o = self.ring(other)
        except (CoercionError, TypeError):
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            if len(self.coeffs) <= 1:
                self._hash = hash(self.constant_coefficient())
            else:
                self._hash = hash((self.ring.var, self.coeffs))
        return self._hash

    # -- calculus and evaluation ----------------------------------------
    def derivative(self) -> "Poly":
        return Poly(self.ring, tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def __call__(self, value):
        """Evaluate by Horner's rule; the result lives wherever ``value`` does."""
        acc: Any = self.base.zero
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def map_coefficients(self, fn, ring: _PolyRing) -> "Poly":
        return Poly(ring, tuple(ring.base(fn(c)) for c in self.coeffs))

    def shift(self, r) -> "Poly":
        """Return ``p(v + r)`` (Taylor shift)."""
        r = self.base(r)
        coeffs = list(self.coeffs)
        n = len(coeffs)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                coeffs[j] = coeffs[j] + r * coeffs[j + 1]
        return Poly(self.ring, tuple(coeffs))

    def reverse(self, degree: int | None = None) -> "Poly":
        """Return ``v**d * p(1/v)`` for ``d = degree`` (default: deg p)."""
        d = self.degree() if degree is None else degree
        if d < self.degree():
            raise ValueError("reversal degree below polynomial degree")
        padded = self.coeffs + (self.base.zero,) * (d + 1 - len(self.coeffs))
        return Poly(self.ring, tuple(reversed(padded)))

    def __repr__(self) -> str:
        from ellfib.expr import render_expression

        return f"Poly({render_expression(self)!r} over {self.ring!r})"

    def __str__(self) -> str:
        from ellfib.expr import render_expression

        return render_expression(self)


def frac_of(p: Poly) -> "RationalFunction":
    return p.ring.fraction_field(p)


class RationalFunction:
    """Reduced fraction ``num/den`` with ``den`` monic."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: _FracField, num: Poly, den: Poly, _reduced: bool = False):
        self.field = field
        self._hash = None
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if not num:
                num, den = field.ring.zero, field.ring.one
            elif den.degree() == 0:
                c = den.coeffs[0]
                if c != field.base.one:
                    inv = field.base.one / c
                    num = Poly(num.ring, tuple(x * inv for x in num.coeffs))
                den = field.ring.one
            elif num.degree() == 0:
                lc = den.coeffs[-1]
                if lc != field.base.one:
                    inv = field.base.one / lc
                    num = Poly(num.ring, tuple(x * inv for x in num.coeffs))
                    den = Poly(den.ring, tuple(x * inv for x in den.coeffs))
            else:
                from ellfib.algebra.factor import poly_gcd

                g = poly_gcd(num, den)
                if g.degree() > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                lc = den.coeffs[-1]
                if lc != field.base.one:
                    inv = field.base.one / lc
                    num = Poly(num.ring, tuple(x * inv for x in num.coeffs))
                    den = Poly(den.ring, tuple(x * inv for x in den.coeffs))
        self.num = num
        self.den = den

    @property
    def var(self) -> str:
        return self.field.var

    @property
    def base(self):
        return self.field.base

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def _coerce(self, other) -> "RationalFunction | None":
        try:
            return self.field(other)
        except CoercionError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return RationalFunction(self.field, self.num + o.num, self.den, _reduced=True)
        if self.den == o.den:
            return RationalFunction(self.field, self.num + o.num, self.den)
        return RationalFunction(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.field, -self.num, self.den, _reduced=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return RationalFunction(self.field, self.num * o.num, self.den, _reduced=True)
        # cross-cancel to keep gcds small
        from ellfib.algebra.factor import poly_gcd

        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        if not n1 or not n2:
            return self.field.zero
        g1 = poly_gcd(n1, d2)
        if g1.degree() > 0:
            n1, d2 = n1.exact_div(g1), d2.exact_div(g1)
        g2 = poly_gcd(n2, d1)
        if g2.degree() > 0:
            n2, d1 = n2.exact_div(g2), d1.exact_div(g2)
        num, den = n1 * n2, d1 * d2
        lc = den.lc()
        if lc != self.field.base.one:
            inv = self.field.base.one / lc
            num, den = num * inv, den * inv
        return RationalFunction(self.field, num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        inv = self.field.base.one / self.num.lc()
        return RationalFunction(self.field, self.den * inv, self.num * inv, _reduced=True)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by zero rational function")
        if o.num.degree() == 0 and o.den.is_one():
            inv = self.field.base.one / o.num.coeffs[0]
            return RationalFunction(self.field, self.num * inv, self.den, _reduced=True)
        return self * RationalFunction(self.field, o.den, o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise ValueError("exponent must be an integer")
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.field, self.num ** k, self.den ** k, _reduced=True)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction) and other.field is self.field:
            return self.num.coeffs == other.num.coeffs and self.den.coeffs == other.den.coeffs
        try:
            o = self.field(other)
        except (CoercionError, TypeError):
            return NotImplemented
        return self.num.coeffs == o.num.coeffs and self.den.coeffs == o.den.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.num) if self.den.is_one() else hash((self.num, self.den))
        return self._hash

    def __call__(self, value):
        d = self.den(value)
        if not d:
            raise ZeroDivisionError("pole at evaluation point")
        return self.num(value) / d

    def map_coefficients(self, fn, field: _FracField) -> "RationalFunction":
        num = self.num.map_coefficients(fn, field.ring)
        den = self.den.map_coefficients(fn, field.ring)
        return RationalFunction(field, num, den)

    def derivative(self) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(self.field, n.derivative() * d - n * d.derivative(), d * d)

    def __repr__(self) -> str:
        from ellfib.expr import render_expression

        return f"RationalFunction({render_expression(self)!r} over {self.field!r})"

    def __str__(self) -> str:
        from ellfib.expr import render_expression

        return render_expression(self)


def sort_key(x) -> tuple:
    """Total order on field elements used for canonical output ordering."""
    if isinstance(x, Fraction):
        return (0, x)
    if isinstance(x, Poly):
        return (1, x.degree(), tuple(sort_key(c) for c in reversed(x.coeffs)))
    if isinstance(x, RationalFunction):
        return (2, sort_key(x.num), sort_key(x.den))
    raise TypeError(f"no sort key for {x!r}")


def poly_sort_key(p: Poly) -> tuple:
    """Order by degree, then lexicographically on descending coefficients."""
    return (p.degree(), tuple(sort_key(c) for c in reversed(p.coeffs)))
