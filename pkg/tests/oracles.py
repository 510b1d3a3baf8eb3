"""Independent reference computations used to freeze expected values.

None of these call the production classification or elimination code;
they use textbook routes (Neron's (v(A), v(B)) table, cofactor expansion,
brute-force root search) so a shared bug cannot hide.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from ellfib.algebra.fields import QQ, PolyRing


# -- valuations of polynomials over QQ, done by hand ------------------------


def poly_valuation_at_root(coeffs: list[Fraction], r: Fraction) -> int | float:
    """Order of vanishing at ``t = r`` of sum coeffs[i] t^i, by repeated synthetic division."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        return math.inf
    k = 0
    while True:
        # synthetic division by (t - r)
        n = len(coeffs) - 1
        q = [Fraction(0)] * n
        acc = Fraction(0)
        for i in range(n, -1, -1):
            acc = acc * r + coeffs[i]
            if i > 0:
                q[i - 1] = acc
        if acc != 0 or n == 0:
            return k
        coeffs = q
        k += 1


def rf_valuation(f, r) -> int | float:
    """Valuation of a rational function over QQ at ``t = r`` (``r = None`` for infinity)."""
    num = list(f.num.coeffs)
    den = list(f.den.coeffs)
    if not any(num):
        return math.inf
    if r is None:
        return (len(den) - 1) - (len(num) - 1)
    return poly_valuation_at_root(num, Fraction(r)) - poly_valuation_at_root(den, Fraction(r))


# -- Kodaira type from the short model y^2 = x^3 + A x + B -------------------


def _short_AB(W):
    a1, a2, a3, a4, a6 = W.coefficients
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    return -27 * c4, -54 * c6


def _scaling(vA, vB) -> int:
    return min(math.floor(v / w) for v, w in ((vA, 4), (vB, 6)) if v != math.inf)


def oracle_kodaira(W, r) -> tuple[str, int]:
    """Kodaira symbol and v(disc_min) at ``t = r`` using Neron's (v(A), v(B)) table."""
    A, B = _short_AB(W)
    vA, vB = rf_valuation(A, r), rf_valuation(B, r)
    vD = rf_valuation(4 * A * A * A + 27 * B * B, r)
    k = _scaling(vA, vB)
    vA, vB, vD = vA - 4 * k, vB - 6 * k, vD - 12 * k
    if vD == 0:
        return "I0", 0
    if vA == 0 and vB == 0:
        return f"I{vD}", vD
    if vB == 1:
        return "II", vD
    if vA == 1:
        return "III", vD
    if vB == 2:
        return "IV", vD
    if vA == 2 and vB == 3:
        return ("I0*" if vD == 6 else f"I{vD - 6}*"), vD
    if (vA >= 3 and vB == 3) or (vA == 2 and vB >= 4):
        return "I0*", vD
    if vB == 4:
        return "IV*", vD
    if vA == 3:
        return "III*", vD
    if vB == 5:
        return "II*", vD
    raise AssertionError(f"not minimal: {(vA, vB, vD)}")


def _residue(f, r, shift) -> Fraction:
    """Value at ``t = r`` of ``f / (t - r)^shift``; zero if ``f`` vanishes to higher order."""
    v = rf_valuation(f, r)
    if v > shift:
        return Fraction(0)
    assert v == shift
    n, d = list(f.num.coeffs), list(f.den.coeffs)
    for _ in range(poly_valuation_at_root(n, Fraction(r))):
        n = _div_lin(n, r)
    for _ in range(poly_valuation_at_root(d, Fraction(r))):
        d = _div_lin(d, r)
    return _ev(n, r) / _ev(d, r)


def oracle_split_over_QQ(W, r) -> bool:
    """Split test at a finite multiplicative place ``t = r``: the node ``x0`` of the
    reduced ``x^3 + a x + b`` has tangents ``y = +-sqrt(3 x0) (x - x0)``."""
    A, B = _short_AB(W)
    k = _scaling(rf_valuation(A, r), rf_valuation(B, r))
    a = _residue(A, r, 4 * k)
    b = _residue(B, r, 6 * k)
    x0 = Fraction(-3) * b / (2 * a)
    beta = 3 * x0
    return beta > 0 and _is_sq(beta)


def _div_lin(c, r):
    n = len(c) - 1
    q = [Fraction(0)] * n
    acc = Fraction(0)
    for i in range(n, 0, -1):
        acc = acc * r + c[i]
        q[i - 1] = acc
    return q


def _ev(c, r):
    return sum(ci * Fraction(r) ** i for i, ci in enumerate(c))


def _is_sq(q: Fraction) -> bool:
    return math.isqrt(q.numerator) ** 2 == q.numerator and math.isqrt(q.denominator) ** 2 == q.denominator


# -- linear algebra -----------------------------------------------------------


def laplace_det(m) -> Fraction:
    """Cofactor expansion along the first row."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(m[0][0])
    total = Fraction(0)
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * Fraction(m[0][j]) * laplace_det(minor)
    return total


def permutation_det(m) -> Fraction:
    """Leibniz formula; only for tiny matrices."""
    n = len(m)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = Fraction(1)
        for i in range(n):
            prod *= m[i][perm[i]]
        total += (-1) ** inv * prod
    return total


def cramer_solve(m, b) -> list[Fraction]:
    d = laplace_det(m)
    out = []
    for j in range(len(m)):
        mj = [row[:j] + [bi] + row[j + 1 :] for row, bi in zip(m, b)]
        out.append(laplace_det(mj) / d)
    return out


# -- misc ---------------------------------------------------------------------


def poly_from_roots(roots, lead=1, var="t"):
    R = PolyRing(QQ, var)
    p = R.constant(Fraction(lead))
    for r in roots:
        p = p * (R.gen - Fraction(r))
    return p


# -- first steps of Tate's algorithm -------------------------------------------


def _frac_sqrt(q: Fraction) -> Fraction | None:
    if q < 0 or not _is_sq(q):
        return None
    return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))


def tate_steps(W, r) -> str:
    """'good', 'multiplicative' or 'additive' for a model with polynomial coefficients at ``t = r``.

    Step 1: the reduced discriminant is a unit -> good.  Step 2: move the
    singular point of the reduced curve to the origin; the reduction is a
    node (multiplicative) iff the new b2 is a unit.
    """
    r = Fraction(r)
    a1, a2, a3, a4, a6 = (_ev(list(c.num.coeffs), r) / _ev(list(c.den.coeffs), r) for c in W.coefficients)
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if disc != 0:
        return "good"
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6; the singular x is a root of f and f'
    f = lambda x: 4 * x**3 + b2 * x * x + 2 * b4 * x + b6
    # f'(x) = 12 x^2 + 2 b2 x + 2 b4
    disc2 = 4 * b2 * b2 - 96 * b4
    s = _frac_sqrt(disc2)
    assert s is not None, "double root of a rational cubic must be rational"
    cands = [(-2 * b2 + s) / 24, (-2 * b2 - s) / 24]
    x0 = next(x for x in cands if f(x) == 0)
    new_b2 = b2 + 12 * x0
    return "multiplicative" if new_b2 != 0 else "additive"


# -- random lattices ------------------------------------------------------------

KODAIRA_TAGS = [f"I{n}" for n in range(2, 13)] + [f"I{n}*" for n in range(0, 5)] + ["IV*", "III*", "II*", "III", "IV"]


def ruled_chain(k: int):
    """Two (-1)-lines joined through a chain of ``k`` (-2)-curves; all multiplicities 1."""
    from ellfib.lattice import IntersectionLattice

    n = k + 2
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = -2
        if i + 1 < n:
            gram[i][i + 1] = gram[i + 1][i] = 1
    gram[0][0] = gram[-1][-1] = -1
    return IntersectionLattice(gram, [1] * n)


def random_valid_lattice(rng):
    """A relabeled Kodaira or ruled-chain lattice with distinct (touched, normalized) indices, 1-based."""
    from ellfib.lattice import kodaira_gram

    if rng.random() < 0.75:
        L = kodaira_gram(rng.choice(KODAIRA_TAGS))
    else:
        L = ruled_chain(rng.randint(0, 6))
    perm = list(range(L.size))
    rng.shuffle(perm)
    L = L.relabel(perm)
    touched, normalized = rng.sample(range(1, L.size + 1), 2)
    return L, touched, normalized


# -- Weierstrass and quartic invariants from the textbook formulas ----------------


def oracle_invariants(a1, a2, a3, a4, a6):
    """(c4, c6, disc) straight from the b-quantities; works in any ring."""
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return c4, c6, disc


def oracle_quartic_IJ(a, b, c, d, e):
    """Invariants of a u^4 + b u^3 + c u^2 + d u + e."""
    I = 12 * a * e - 3 * b * d + c * c
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c * c * c
    return I, J


# -- tame symbols on P^1 ---------------------------------------------------------


def oracle_tame(f, g, p):
    """``(-1)^(ab) f^b / g^a`` at ``p`` (a rational or ``"inf"``), clearing ``u - p`` by hand."""

    def order(h):
        if p == "inf":
            return h.den.degree() - h.num.degree()
        return poly_valuation_at_root(list(h.num.coeffs), p) - poly_valuation_at_root(list(h.den.coeffs), p)

    a, b = order(f), order(g)
    h = f**b / g**a
    if p == "inf":
        value = h.num.lc() / h.den.lc()
    else:
        n, d = list(h.num.coeffs), list(h.den.coeffs)
        assert poly_valuation_at_root(n, p) == poly_valuation_at_root(d, p) == 0
        value = _ev(n, p) / _ev(d, p)
    return -value if (a * b) % 2 else value


# -- definiteness by LDL^T --------------------------------------------------------


def ldl_positive_definite(m) -> bool:
    """Symmetric Gaussian elimination without pivoting; PD iff every pivot is positive."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return True
