"""GCDs, squarefree decomposition and root finding for univariate polynomials."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ellfib.algebra.fields import (
    QQ,
    FracField,
    Poly,
    PolyRing,
    RationalFunction,
    _FracField,
    poly_sort_key,
)


class Answer(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


def _check_same_ring(p: Poly, q: Poly) -> None:
    if p.ring is not q.ring:
        raise ValueError(f"polynomials live in different rings: {p.ring!r} vs {q.ring!r}")


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm; ``gcd(0, 0) = 0``."""
    _check_same_ring(p, q)
    if p.degree() < q.degree():
        p, q = q, p
    if not q:
        return p.monic()
    if q.degree() == 0:
        return p.ring.one
    p, q = p.monic(), q.monic()
    while q:
        _, r = divmod(p, q)
        p, q = q, r.monic()
        if q.degree() == 0 and q:
            return p.ring.one
    return p.monic()


def poly_lcm(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return p.ring.zero
    return (p * q).exact_div(poly_gcd(p, q)).monic()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: ``p = lc(p) * prod(f**m)`` with monic, squarefree, coprime ``f``.

    Factors are returned sorted by degree, then by coefficient sequence.
    """
    if not p:
        raise ValueError("squarefree decomposition of the zero polynomial")
    out: list[tuple[Poly, int]] = []
    if p.degree() == 0:
        return out
    f = p.monic()
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - b.derivative()
    i = 1
    while b.degree() > 0:
        g = poly_gcd(b, d)
        if g.degree() > 0:
            out.append((g, i))
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - b.derivative()
        i += 1
    out.sort(key=lambda fm: poly_sort_key(fm[0]))
    return out


def squarefree_part(p: Poly) -> Poly:
    if not p:
        raise ValueError("squarefree part of the zero polynomial")
    if p.degree() <= 0:
        return p.ring.one
    return p.monic().exact_div(poly_gcd(p, p.derivative()))


# ---------------------------------------------------------------------------
# rational roots
# ---------------------------------------------------------------------------


def integer_model(p: Poly) -> list[int]:
    """Primitive integer coefficients (increasing degree) of a polynomial over QQ."""
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    if g > 1:
        ints = [c // g for c in ints]
    if ints and ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _horner_mod(coeffs: Sequence[int], x: int, m: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % m
    return acc


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def _rational_reconstruction(r: int, m: int, num_bound: int, den_bound: int) -> Fraction | None:
    r0, r1 = m, r % m
    t0, t1 = 0, 1
    while r1 > num_bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > den_bound:
        return None
    if t1 < 0:
        r1, t1 = -r1, -t1
    if math.gcd(r1, t1) != 1:
        return None
    return Fraction(r1, t1)


def rational_roots(p: Poly) -> set[Fraction]:
    """All roots of ``p`` in QQ.

    Simple roots modulo a small prime are Hensel-lifted past the bound given by
    the rational-root theorem (numerator | constant term, denominator | leading
    coefficient) and recovered by rational reconstruction; every candidate is
    confirmed by exact evaluation.
    """
    if p.base is not QQ:
        raise ValueError("rational_roots requires a polynomial over QQ")
    if not p:
        raise ValueError("rational roots of the zero polynomial")
    if p.degree() <= 0:
        return set()
    f = integer_model(squarefree_part(p))
    roots: set[Fraction] = set()
    if f[0] == 0:
        roots.add(Fraction(0))
        f = f[1:]
    if len(f) == 2:
        roots.add(Fraction(-f[0], f[1]))
        return roots
    if len(f) < 2:
        return roots
    lead, const = abs(f[-1]), abs(f[0])
    df = [i * c for i, c in enumerate(f)][1:]
    bound = 2 * const * lead + 1
    ell = 2
    while True:
        ell += 1
        if not _is_prime(ell) or f[-1] % ell == 0:
            continue
        residues = [x for x in range(ell) if _horner_mod(f, x, ell) == 0]
        if any(_horner_mod(df, x, ell) == 0 for x in residues):
            continue
        break
    for rho in residues:
        mod = ell
        x = rho
        while mod < bound:
            mod = mod * mod
            fx = _horner_mod(f, x, mod)
            dfx = _horner_mod(df, x, mod)
            x = (x - fx * pow(dfx, -1, mod)) % mod
        cand = _rational_reconstruction(x, mod, const, lead)
        if cand is None:
            continue
        if p(cand) == 0:
            roots.add(cand)
    return roots


def rational_roots_bruteforce(p: Poly) -> set[Fraction]:
    """Rational-root theorem by divisor enumeration; slow, used as an oracle."""
    f = integer_model(squarefree_part(p))
    roots: set[Fraction] = set()
    if f and f[0] == 0:
        roots.add(Fraction(0))
        while f and f[0] == 0:
            f = f[1:]
    if len(f) < 2:
        return roots

    def divisors(n: int) -> list[int]:
        n = abs(n)
        small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
        return sorted(set(small + [n // d for d in small]))

    for num in divisors(f[0]):
        for den in divisors(f[-1]):
            for sign in (1, -1):
                c = Fraction(sign * num, den)
                if p(c) == 0:
                    roots.add(c)
    return roots


# ---------------------------------------------------------------------------
# roots over QQ(a)
# ---------------------------------------------------------------------------

DEFAULT_SAMPLE_POINTS = (2, 3, 5, 7, -2, -3, 11, 13, -5, 17, 19, -7, 23, 29, 31)


def _lagrange(xs: Sequence[Fraction], ys: Sequence[Fraction], ring) -> Poly:
    result = ring.zero
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        term = ring.constant(yi)
        for j, xj in enumerate(xs):
            if j != i:
                term = term * (ring.gen - xj) * (Fraction(1) / (xi - xj))
        result = result + term
    return result


def specialize_element(c, a0: Fraction) -> Fraction:
    """Evaluate an element of QQ(a) (or QQ) at ``a = a0``."""
    if isinstance(c, Fraction):
        return c
    return c(a0)


def specialize_poly(p: Poly, a0: Fraction) -> Poly:
    """Map a polynomial over QQ(a) to one over QQ by ``a -> a0``."""
    return p.map_coefficients(lambda c: specialize_element(c, a0), PolyRing(QQ, p.var))


def _parameter_field(p: Poly) -> _FracField:
    base = p.base
    if not (isinstance(base, _FracField) and base.base is QQ):
        raise ValueError("expected a polynomial with coefficients in QQ(a)")
    return base


def _bad_point(p: Poly, a0: Fraction) -> bool:
    for c in p.coeffs:
        if not c.den(a0):
            return True
    return not p.lc().num(a0)


@dataclass(frozen=True)
class LinearFactorization:
    """``p = content * prod((t - r)**m) * residual`` with ``residual`` monic."""

    factors: tuple[tuple[Poly, int], ...]
    residual: Poly
    content: object

    def roots(self) -> list:
        return [-f.constant_coefficient() for f, _ in self.factors]


def linear_factors_over_parameter(
    p: Poly,
    excluded: Iterable[Fraction] = (),
    max_degree: int = 4,
    sample_points: Sequence[int] = DEFAULT_SAMPLE_POINTS,
) -> LinearFactorization:
    """Find the factors ``t - r(a)`` of ``p`` with ``r`` a polynomial in ``a``.

    Roots are sampled at specializations of ``a``; a candidate ``r`` of degree
    ``d`` is interpolated through ``d + 1`` samples, screened against the
    remaining samples, and accepted only if it is an exact root over QQ(a).
    """
    if not p:
        raise ValueError("linear factors of the zero polynomial")
    field = _parameter_field(p)
    aring = field.ring
    excluded = {Fraction(e) for e in excluded}
    points: list[Fraction] = []
    root_sets: list[set[Fraction]] = []
    for a0 in sample_points:
        a0 = Fraction(a0)
        if a0 in excluded or _bad_point(p, a0):
            continue
        points.append(a0)
        root_sets.append(rational_roots(specialize_poly(p, a0)))
        if len(points) == max_degree + 3:
            break
    if len(points) < max_degree + 1:
        raise ValueError("not enough admissible specialization points")

    found: list = []
    seen: set = set()
    for d in range(max_degree + 1):
        fit = points[: d + 1]
        for ys in itertools.product(*(sorted(s) for s in root_sets[: d + 1])):
            r = _lagrange(fit, ys, aring)
            if r.degree() < d and d > 0:
                continue  # already tried at lower degree
            if any(r(a0) not in s for a0, s in zip(points, root_sets)):
                continue
            root = field(r)
            if root in seen:
                continue
            seen.add(root)
            if not p(root):
                found.append(root)

    tring = p.ring
    rest = p
    factors: list[tuple[Poly, int]] = []
    for root in found:
        lin = tring.gen - root
        m = 0
        while rest.degree() > 0:
            q, rem = divmod(rest, lin)
            if rem:
                break
            rest = q
            m += 1
        if m:
            factors.append((lin, m))
    factors.sort(key=lambda fm: poly_sort_key(fm[0]))
    content = rest.lc()
    return LinearFactorization(tuple(factors), rest.monic(), content)


# ---------------------------------------------------------------------------
# squares
# ---------------------------------------------------------------------------


def _is_square_int(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def is_square_in_field(beta, geometric: bool = False) -> Answer:
    """Decide whether ``beta`` is a square in QQ or QQ(a).

    With ``geometric=True`` the constants are extended to their algebraic
    closure, so only the shape of ``beta`` as a function of ``a`` matters.
    """
    if isinstance(beta, int):
        beta = Fraction(beta)
    if isinstance(beta, Fraction):
        if beta == 0:
            raise ValueError("is_square_in_field of zero")
        if geometric:
            return Answer.YES
        if beta > 0 and _is_square_int(beta.numerator) and _is_square_int(beta.denominator):
            return Answer.YES
        return Answer.NO
    if isinstance(beta, Poly):
        beta = beta.ring.fraction_field(beta)
    if isinstance(beta, RationalFunction) and beta.base is QQ:
        if not beta:
            raise ValueError("is_square_in_field of zero")
        prod = beta.num * beta.den
        for _, m in squarefree_decomposition(prod):
            if m % 2:
                return Answer.NO
        return is_square_in_field(prod.lc(), geometric)
    return Answer.UNKNOWN
