"""Kodaira classification of singular fibers in residue characteristic 0.

At each place the minimal model is reached by rescaling until
``v(c4) < 4`` or ``v(c6) < 6``; the fiber type is then read from the
triple ``(v(c4), v(c6), v(disc))``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from ellfib.algebra.factor import (
    Answer,
    is_square_in_field,
    linear_factors_over_parameter,
    poly_gcd,
    rational_roots,
    squarefree_decomposition,
)
from ellfib.algebra.fields import QQ, Poly, PolyRing, _FracField
from ellfib.algebra.places import Place, PlaceError, multiplicity, reduce_at, valuation_at
from ellfib.weierstrass import (
    DegenerateModelError,
    InvariantSet,
    WeierstrassModel,
    admissible_transform,
    compute_invariants,
)


class Split(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"
    NOT_APPLICABLE = "NotApplicable"


class Constants(str, enum.Enum):
    """Constant field over which splitting of multiplicative fibers is decided."""

    GEOMETRIC = "algebraic closure"  # the answer over C
    BASE = "base field"  # QQ or QQ(a) as given


class ClassificationError(ValueError):
    pass


class UnresolvedPlacesError(ClassificationError):
    pass


# tag -> (components, euler number); I_n and I_n* are handled by formula
_ADDITIVE = {
    "II": (1, 2),
    "III": (2, 3),
    "IV": (3, 4),
    "IV*": (7, 8),
    "III*": (8, 9),
    "II*": (9, 10),
}


def fiber_data(tag: str) -> tuple[int, int]:
    """``(m_v, e_v)`` for a Kodaira symbol such as ``"I3"``, ``"I0*"`` or ``"III*"``."""
    if tag in _ADDITIVE:
        return _ADDITIVE[tag]
    if tag.startswith("I") and tag.endswith("*") and tag[1:-1].isdigit():
        n = int(tag[1:-1])
        return n + 5, n + 6
    if tag.startswith("I") and tag[1:].isdigit():
        n = int(tag[1:])
        return (1, 0) if n == 0 else (n, n)
    raise ValueError(f"unknown Kodaira symbol {tag!r}")


def kodaira_symbol(vc4, vc6, vd) -> str:
    """Fiber type from the valuations of ``c4``, ``c6`` and ``disc`` of a minimal model."""
    if vd == 0:
        return "I0"
    if vc4 == 0:
        return f"I{vd}"
    if vc4 == 2 and vc6 == 3 and vd > 6:
        return f"I{vd - 6}*"
    table = {2: "II", 3: "III", 4: "IV", 6: "I0*", 8: "IV*", 9: "III*", 10: "II*"}
    if vd in table:
        return table[vd]
    raise ClassificationError(f"inconsistent valuations v(c4)={vc4}, v(c6)={vc6}, v(disc)={vd}")


@dataclass(frozen=True)
class KodairaFiber:
    type_tag: str
    components: int
    euler: int
    split: Split
    delta_valuation: int
    place: Place
    c4_valuation: int | float = 0
    c6_valuation: int | float = 0
    split_over_base: Split = Split.NOT_APPLICABLE

    def __post_init__(self):
        m, e = fiber_data(self.type_tag)
        if (m, e) != (self.components, self.euler):
            raise AssertionError(f"{self.type_tag}: (m, e) = {(self.components, self.euler)}")
        if (self.split is Split.NOT_APPLICABLE) == self.is_multiplicative:
            raise AssertionError(f"{self.type_tag}: split flag {self.split} inconsistent")

    @property
    def is_multiplicative(self) -> bool:
        tag = self.type_tag
        return tag[:1] == "I" and tag[1:].isdigit() and tag != "I0"

    @property
    def n(self) -> int | None:
        """Index ``n`` of ``I_n`` or ``I_n*``."""
        tag = self.type_tag.rstrip("*")
        if tag.startswith("I") and tag[1:].isdigit():
            return int(tag[1:])
        return None


@dataclass(frozen=True)
class UnresolvedPlace:
    """A nonlinear factor of the discriminant whose irreducibility is not established."""

    pi: Poly
    delta_valuation: int


@dataclass(frozen=True)
class FiberConfiguration:
    fibers: tuple[KodairaFiber, ...]
    unresolved: tuple[UnresolvedPlace, ...]
    model: WeierstrassModel
    base_field: object = field(default=None)
    constants: Constants = Constants.GEOMETRIC

    def fiber_at(self, place: Place) -> KodairaFiber | None:
        for f in self.fibers:
            if f.place == place:
                return f
        return None

    def delta_degree(self) -> int:
        return sum(f.delta_valuation * f.place.degree for f in self.fibers)


def _valuations(inv: InvariantSet, place: Place) -> tuple:
    return (
        valuation_at(inv.c4, place),
        valuation_at(inv.c6, place),
        valuation_at(inv.discriminant, place),
    )


def _scaling_exponent(vc4, vc6) -> int:
    candidates = []
    if vc4 != math.inf:
        candidates.append(math.floor(vc4 / 4))
    if vc6 != math.inf:
        candidates.append(math.floor(vc6 / 6))
    return min(candidates)


def _uniformizer(W: WeierstrassModel, place: Place):
    K = W.field
    if place.is_infinite:
        return K.one / K.gen
    return K(place.pi)


def minimal_model_at(W: WeierstrassModel, place: Place) -> tuple[WeierstrassModel, int]:
    """Minimal model at ``place`` and the exponent ``k`` of the rescaling ``u = pi^k``.

    ``W`` is returned unchanged if it is already integral and minimal there;
    otherwise the short model ``y^2 = x^3 - c4/48 x - c6/864`` is rescaled.
    """
    inv = compute_invariants(W)
    if not inv.discriminant:
        raise DegenerateModelError()
    vc4, vc6, _ = _valuations(inv, place)
    k = _scaling_exponent(vc4, vc6)
    if k == 0 and all(valuation_at(c, place) >= 0 for c in W.coefficients):
        return W, 0
    short = W.short_form()
    if k == 0:
        return short, 0
    return admissible_transform(short, _uniformizer(W, place) ** k), k


def _reduced_tangent_beta(W: WeierstrassModel, place: Place):
    """Slope-square ``beta`` of the tangent cone ``Y^2 - beta X^2`` at the node."""
    inv = compute_invariants(W)
    b2, b4, b6 = (reduce_at(b, place) for b in (inv.b2, inv.b4, inv.b6))
    base = W.field.base
    ring = PolyRing(base, "X")
    g = ring.from_coefficients([b6 / 4, b4 / 2, b2 / 4, 1])
    h = poly_gcd(g, g.derivative())
    if h.degree() != 1:
        raise ClassificationError("reduced curve has no node")
    x0 = -h.constant_coefficient()
    return 3 * x0 + b2 / 4


def split_test(W_min: WeierstrassModel, place: Place, constants: Constants = Constants.GEOMETRIC) -> Split:
    """Split/non-split decision for a multiplicative fiber of a model minimal at ``place``.

    Geometric splitting only asks whether ``beta`` is a square up to a constant;
    over the base field the constant must itself be a rational square.
    """
    inv = compute_invariants(W_min)
    vc4, _, vd = _valuations(inv, place)
    if not (vc4 == 0 and vd > 0):
        raise ClassificationError("split test needs a multiplicative fiber")
    base = W_min.field.base
    if not place.is_infinite and not place.is_linear:
        return Split.UNKNOWN
    if not (base is QQ or (isinstance(base, _FracField) and base.base is QQ)):
        return Split.UNKNOWN
    beta = _reduced_tangent_beta(W_min, place)
    answer = is_square_in_field(beta, geometric=constants is Constants.GEOMETRIC)
    return {Answer.YES: Split.YES, Answer.NO: Split.NO}.get(answer, Split.UNKNOWN)


def classify_fiber(W: WeierstrassModel, place: Place, constants: Constants = Constants.GEOMETRIC) -> KodairaFiber:
    inv = compute_invariants(W)
    if not inv.discriminant:
        raise DegenerateModelError()
    if not place.asserted_irreducible:
        raise PlaceError(f"place {place.pi} has unverified irreducibility")
    vc4, vc6, vd = _valuations(inv, place)
    k = _scaling_exponent(vc4, vc6)
    vc4m = vc4 - 4 * k
    vc6m = vc6 - 6 * k
    vdm = vd - 12 * k
    tag = kodaira_symbol(vc4m, vc6m, vdm)
    m, e = fiber_data(tag)
    split = split_base = Split.NOT_APPLICABLE
    if vc4m == 0 and vdm > 0:
        W_min, _ = minimal_model_at(W, place)
        split_base = split_test(W_min, place, Constants.BASE)
        if constants is Constants.BASE or split_base is Split.YES:
            split = split_base
        else:
            split = split_test(W_min, place, constants)
    return KodairaFiber(tag, m, e, split, vdm, place, vc4m, vc6m, split_base)


def _linear_places(p: Poly) -> tuple[list[Place], Poly]:
    """Linear places dividing ``p`` and the monic cofactor carrying no linear factor found."""
    base = p.base
    ring = p.ring
    if p.degree() <= 0:
        return [], ring.one
    if base is QQ:
        roots = sorted(rational_roots(p))
        rest = p.monic()
        places = []
        for r in roots:
            lin = ring.gen - r
            places.append(Place(lin))
            while rest.degree() > 0:
                q, rem = divmod(rest, lin)
                if rem:
                    break
                rest = q
        return places, rest.monic()
    if isinstance(base, _FracField) and base.base is QQ:
        fac = linear_factors_over_parameter(p)
        return [Place(f) for f, _ in fac.factors], fac.residual
    raise ClassificationError(f"unsupported constant field {base!r}")


def fiber_configuration(
    W: WeierstrassModel, asserted_irreducible=(), constants: Constants = Constants.GEOMETRIC
) -> FiberConfiguration:
    """Classify every place where the minimal discriminant has positive valuation.

    Nonlinear factors listed in ``asserted_irreducible`` are classified as
    places; any other nonlinear factor is reported as unresolved.
    """
    inv = compute_invariants(W)
    if not inv.discriminant:
        raise DegenerateModelError()
    sources = [inv.discriminant.num, inv.discriminant.den, inv.c4.den, inv.c6.den]
    places: dict[Place, None] = {}
    residual = W.field.ring.one
    for p in sources:
        found, rest = _linear_places(p)
        for pl in found:
            places.setdefault(pl, None)
        if rest.degree() > 0:
            residual = residual * rest
    asserted = [W.field.ring(x).monic() for x in asserted_irreducible]
    unresolved: list[UnresolvedPlace] = []
    if residual.degree() > 0:
        for f, _ in squarefree_decomposition(residual):
            rest = f
            for g in asserted:
                if g.degree() > 0 and not rest % g:
                    places.setdefault(Place(g, asserted_irreducible=True), None)
                    rest = rest.exact_div(g)
            if rest.degree() > 0:
                v = multiplicity(inv.discriminant, rest)
                unresolved.append(UnresolvedPlace(rest.monic(), v))
    places.setdefault(Place.infinite(), None)
    fibers = []
    for pl in sorted(places, key=Place.sort_key):
        fib = classify_fiber(W, pl, constants)
        if fib.type_tag != "I0":
            fibers.append(fib)
    return FiberConfiguration(tuple(fibers), tuple(unresolved), W, W.field.base, constants)


def euler_number(cfg: FiberConfiguration) -> int:
    if cfg.unresolved:
        raise UnresolvedPlacesError("configuration has unresolved places")
    return sum(f.euler * f.place.degree for f in cfg.fibers)


def shioda_tate_rank(cfg: FiberConfiguration, has_section: bool = True) -> int:
    """Rank of the lattice spanned by the zero section, a fiber and fiber components."""
    if cfg.unresolved:
        raise UnresolvedPlacesError("configuration has unresolved places")
    if not has_section:
        raise ValueError("the fibral rank formula assumes a section")
    return 2 + sum((f.components - 1) * f.place.degree for f in cfg.fibers)
