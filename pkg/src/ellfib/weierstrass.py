"""Weierstrass models over F(t), their invariants, and quartic conversion."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ellfib.algebra.fields import FracField, Poly, PolyRing, RationalFunction, _FracField


class ModelError(ValueError):
    pass


class DegenerateModelError(ModelError):
    """The discriminant vanishes identically."""

    def __init__(self, message: str = "degenerate discriminant"):
        super().__init__(message)


@dataclass(frozen=True)
class WeierstrassModel:
    """``y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`` over a function field ``F(t)``."""

    field: _FracField
    a1: RationalFunction
    a2: RationalFunction
    a3: RationalFunction
    a4: RationalFunction
    a6: RationalFunction

    @classmethod
    def build(cls, field, a1=0, a2=0, a3=0, a4=0, a6=0) -> "WeierstrassModel":
        return cls(field, field(a1), field(a2), field(a3), field(a4), field(a6))

    @property
    def coefficients(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def var(self) -> str:
        return self.field.var

    @property
    def base_field(self):
        """The constant field F (QQ or QQ(a))."""
        return self.field.base

    def invariants(self) -> "InvariantSet":
        return compute_invariants(self)

    def is_short(self) -> bool:
        return not self.a1 and not self.a2 and not self.a3

    def short_form(self) -> "WeierstrassModel":
        """Complete the square and the cube: ``y^2 = x^3 - c4/48 x - c6/864``."""
        if self.is_short():
            return self
        inv = compute_invariants(self)
        return WeierstrassModel.build(self.field, a4=-inv.c4 / 48, a6=-inv.c6 / 864)

    def map_coefficients(self, fn, field) -> "WeierstrassModel":
        return WeierstrassModel(field, *(c.map_coefficients(fn, field) for c in self.coefficients))

    def as_dict(self) -> dict[str, str]:
        from ellfib.expr import render_expression

        names = ("a1", "a2", "a3", "a4", "a6")
        return {n: render_expression(c) for n, c in zip(names, self.coefficients)}


@dataclass(frozen=True)
class InvariantSet:
    b2: RationalFunction
    b4: RationalFunction
    b6: RationalFunction
    b8: RationalFunction
    c4: RationalFunction
    c6: RationalFunction
    discriminant: RationalFunction

    @property
    def j(self) -> RationalFunction | None:
        if not self.discriminant:
            return None
        return self.c4 ** 3 / self.discriminant

    @property
    def is_degenerate(self) -> bool:
        return not self.discriminant


def compute_invariants(W: WeierstrassModel) -> InvariantSet:
    a1, a2, a3, a4, a6 = W.coefficients
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return InvariantSet(b2, b4, b6, b8, c4, c6, disc)


def admissible_transform(W: WeierstrassModel, u, r=0, s=0, t_shift=0) -> WeierstrassModel:
    """Substitute ``x = u^2 x' + r``, ``y = u^3 y' + s u^2 x' + t_shift``."""
    K = W.field
    u, r, s, t = K(u), K(r), K(s), K(t_shift)
    if not u:
        raise ModelError("admissible transform needs u != 0")
    a1, a2, a3, a4, a6 = W.coefficients
    n1 = a1 + 2 * s
    n2 = a2 - s * a1 + 3 * r - s * s
    n3 = a3 + r * a1 + 2 * t
    n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1
    if u == K.one:
        return WeierstrassModel(K, n1, n2, n3, n4, n6)
    u2 = u * u
    u3 = u2 * u
    u4 = u2 * u2
    u6 = u3 * u3
    return WeierstrassModel(K, n1 / u, n2 / u2, n3 / u3, n4 / u4, n6 / u6)


def localize_at_infinity(W: WeierstrassModel, var: str = "tau") -> WeierstrassModel:
    """Rewrite a model with polynomial coefficients in the coordinate ``tau = 1/t``.

    The result is ``a_i' = tau^(i d) a_i(1/tau)`` with the least ``d`` keeping
    every coefficient polynomial.
    """
    K = W.field
    weights = (1, 2, 3, 4, 6)
    d = 0
    for w, c in zip(weights, W.coefficients):
        if not c.is_polynomial():
            raise ModelError("localize_at_infinity needs polynomial coefficients")
        if c:
            d = max(d, -(-c.num.degree() // w))
    ring = PolyRing(K.base, var)
    L = FracField(ring)
    out = []
    for w, c in zip(weights, W.coefficients):
        p = c.num
        if not p:
            out.append(L.zero)
            continue
        rev = p.reverse()  # tau^deg p * p(1/tau)
        shifted = Poly(ring, (K.base.zero,) * (w * d - p.degree()) + rev.coeffs)
        out.append(L(shifted))
    return WeierstrassModel(L, *out)


# ---------------------------------------------------------------------------
# quartics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuarticModel:
    """``v^2 = q(u)`` with ``deg q = 4`` over a field ``K``, optionally with a point ``(u0, v0)``."""

    q: Poly
    marked_point: tuple | None = None

    def __post_init__(self):
        if self.q.degree() != 4:
            raise ModelError(f"quartic model needs degree 4, got {self.q.degree()}")
        if self.marked_point is not None:
            K = self.q.base
            u0, v0 = (K(c) for c in self.marked_point)
            if v0 * v0 != self.q(u0):
                raise ModelError("marked point does not lie on the quartic")
            object.__setattr__(self, "marked_point", (u0, v0))

    @property
    def field(self):
        return self.q.base

    def coefficients(self) -> tuple:
        """``(a, b, c, d, e)`` for ``a u^4 + b u^3 + c u^2 + d u + e``."""
        return tuple(self.q[i] for i in (4, 3, 2, 1, 0))


def quartic_invariants(Q: QuarticModel) -> tuple:
    """Classical invariants ``(I, J)`` of the binary quartic."""
    a, b, c, d, e = Q.coefficients()
    I = 12 * a * e - 3 * b * d + c * c
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c * c * c
    return I, J


def _find_root(q: Poly):
    from ellfib.algebra.factor import linear_factors_over_parameter, rational_roots
    from ellfib.algebra.fields import QQ

    K = q.base
    if K is QQ:
        roots = sorted(rational_roots(q))
        return roots[0] if roots else None
    if isinstance(K, _FracField) and K.base is QQ:
        try:
            fac = linear_factors_over_parameter(q)
        except ValueError:
            return None
        roots = fac.roots()
        return roots[0] if roots else None
    # coefficients constant over a deeper tower: look for rational roots
    try:
        qq = q.map_coefficients(lambda c: QQ(c), PolyRing(QQ, q.var))
    except TypeError:
        return None
    roots = sorted(rational_roots(qq))
    return K(roots[0]) if roots else None


class JacobianMismatch(AssertionError):
    pass


def quartic_to_weierstrass(Q: QuarticModel, field=None) -> WeierstrassModel:
    """Weierstrass model of ``v^2 = q(u)`` obtained by moving a point to ``u = 0``.

    With a root ``u0`` of ``q`` the substitution ``u = u0 + 1/z`` gives a cubic;
    with a non-Weierstrass point ``(u0, v0)`` the classical formulas for a quartic
    with square constant term are used.  The j-invariant of the result is checked
    against ``6912 I^3 / (4 I^3 - J^2)``.
    """
    K = Q.field
    if field is None:
        if not isinstance(K, _FracField):
            raise ModelError("quartic coefficients must lie in a function field F(t)")
        field = K
    if Q.marked_point is not None:
        u0, v0 = Q.marked_point
    else:
        u0 = _find_root(Q.q)
        if u0 is None:
            raise ModelError("quartic has no marked point and no root over the base field")
        v0 = K.zero
    shifted = Q.q.shift(u0)
    e = [shifted[i] for i in range(5)]  # q(u0 + w) = sum e[i] w^i
    if not v0:
        # v^2 = e1 w + ... + e4 w^4, w = 1/z:  (v z^2)^2 = e1 z^3 + e2 z^2 + e3 z + e4
        W = WeierstrassModel.build(field, a2=e[2], a4=e[1] * e[3], a6=e[1] * e[1] * e[4])
    else:
        # w = 1/z: (v z^2)^2 = e0 z^4 + e1 z^3 + e2 z^2 + e3 z + e4 with e0 = v0^2
        a, b, c, d, q = e[4], e[3], e[2], e[1], v0
        A1 = d / q
        A2 = c - d * d / (4 * q * q)
        A3 = 2 * q * b
        A4 = -4 * q * q * a
        W = WeierstrassModel.build(field, a1=A1, a2=A2, a3=A3, a4=A4, a6=A2 * A4)
    inv = compute_invariants(W)
    if not inv.discriminant:
        raise DegenerateModelError()
    I, J = quartic_invariants(Q)
    I, J = field(I), field(J)
    denom = 4 * I * I * I - J * J
    if not denom:
        raise DegenerateModelError("singular quartic (4 I^3 - J^2 = 0)")
    if inv.c4 ** 3 * denom != 6912 * I * I * I * inv.discriminant:
        raise JacobianMismatch("j-invariant disagrees with the I, J Jacobian")
    return W
