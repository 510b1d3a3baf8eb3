"""One-parameter families over the a-line: specialization and degenerations.

A family is a Weierstrass model over QQ(a)(t).  Specializing ``a = a0``
gives a model over QQ(t); generic places ``t - r(a)`` go to ``t - r(a0)``
and may collide, which is where fibers degenerate.
"""

from __future__ import annotations

import enum
import functools
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from ellfib.algebra.factor import poly_gcd, poly_lcm, rational_roots, specialize_element
from ellfib.algebra.fields import QQ, RationalFunction, _FracField, tower
from ellfib.algebra.places import Place
from ellfib.expr import parse_expression
from ellfib.schema import ModelDocument, parse_model_document
from ellfib.tate import (
    ClassificationError,
    Constants,
    FiberConfiguration,
    KodairaFiber,
    Split,
    fiber_configuration,
    shioda_tate_rank,
)
from ellfib.weierstrass import DegenerateModelError, QuarticModel, WeierstrassModel, compute_invariants


class FamilyError(ValueError):
    pass


class ExcludedParameterError(FamilyError):
    pass


class UnknownPlaceError(FamilyError):
    pass


def _bad_parameters(rfs, contents=()) -> set[Fraction]:
    """Rational ``a`` where a coefficient denominator vanishes, or where one of ``contents`` vanishes identically."""
    bad: set[Fraction] = set()
    dens = None
    for f in rfs:
        for p in (f.num, f.den):
            for c in p.coeffs:
                dens = c.den if dens is None else poly_lcm(dens, c.den)
    if dens is not None and dens.degree() > 0:
        bad |= rational_roots(dens)
    for f in contents:
        g = None
        for c in f.num.coeffs:
            if c:
                g = c.num if g is None else poly_gcd(g, c.num)
        if g is not None and g.degree() > 0:
            bad |= rational_roots(g)
    return bad


@dataclass(frozen=True)
class EllipticFamily:
    model: WeierstrassModel
    excluded: frozenset = frozenset()
    provenance: QuarticModel | None = None
    declared_excluded: frozenset = frozenset()

    @classmethod
    def create(cls, model: WeierstrassModel, excluded=(), provenance: QuarticModel | None = None):
        """Build a family, adding the parameters where the model or its source quartic break."""
        base = model.base_field
        if not (isinstance(base, _FracField) and base.base is QQ):
            raise FamilyError("a family needs coefficients in QQ(a)(t)")
        inv = compute_invariants(model)
        if not inv.discriminant:
            raise DegenerateModelError()
        declared = frozenset(Fraction(x) for x in excluded)
        contents = [inv.discriminant]
        sources = list(model.coefficients)
        if provenance is not None:
            sources += [c for c in provenance.q.coeffs]
            contents.append(provenance.q.lc())
        auto = _bad_parameters(sources, contents)
        return cls(model, frozenset(auto | declared), provenance, declared)

    @classmethod
    def from_document(cls, doc: ModelDocument) -> "EllipticFamily":
        if doc.parameter is None:
            raise FamilyError("family input needs a 'parameter'")
        return cls.create(doc.model, doc.excluded, doc.quartic)

    @property
    def parameter(self) -> str:
        return self.model.base_field.var

    @property
    def variable(self) -> str:
        return self.model.var

    def check_parameter(self, a0) -> Fraction:
        a0 = Fraction(a0)
        if a0 in self.excluded:
            raise ExcludedParameterError(f"{self.parameter} = {a0} is an excluded parameter")
        return a0


def specialize(fam: EllipticFamily, a0) -> WeierstrassModel:
    a0 = fam.check_parameter(a0)
    K = tower([fam.variable])
    W = fam.model.map_coefficients(lambda c: specialize_element(c, a0), K)
    if not compute_invariants(W).discriminant:
        raise ExcludedParameterError(f"discriminant vanishes identically at {fam.parameter} = {a0}")
    return W


@functools.lru_cache(maxsize=64)
def generic_configuration(fam: EllipticFamily, constants: Constants = Constants.GEOMETRIC, asserted_irreducible=()):
    return fiber_configuration(fam.model, asserted_irreducible, constants)


def special_configuration(fam: EllipticFamily, a0, constants: Constants = Constants.GEOMETRIC) -> FiberConfiguration:
    return fiber_configuration(specialize(fam, a0), (), constants)


@dataclass(frozen=True)
class SpecializationMap:
    a0: Fraction
    groups: tuple[tuple[Place, tuple[Place, ...]], ...]

    def image(self, generic: Place) -> Place:
        for special, gens in self.groups:
            if generic in gens:
                return special
        raise UnknownPlaceError(f"{generic} is not a generic place of the family")

    @property
    def collisions(self) -> tuple[tuple[Place, tuple[Place, ...]], ...]:
        return tuple(g for g in self.groups if len(g[1]) > 1)


def _special_place(generic: Place, a0: Fraction, ring) -> Place:
    if generic.is_infinite:
        return Place.infinite()
    if not generic.is_linear:
        raise ClassificationError(f"cannot specialize the nonlinear place {generic}")
    return Place.linear(ring, specialize_element(generic.root(), a0))


def match_places(fam: EllipticFamily, a0, generic: FiberConfiguration | None = None) -> SpecializationMap:
    a0 = fam.check_parameter(a0)
    generic = generic or generic_configuration(fam)
    ring = tower([fam.variable]).ring
    groups: dict[Place, list[Place]] = {}
    for f in generic.fibers:
        groups.setdefault(_special_place(f.place, a0, ring), []).append(f.place)
    ordered = sorted(groups.items(), key=lambda kv: kv[0].sort_key())
    return SpecializationMap(a0, tuple((sp, tuple(gs)) for sp, gs in ordered))


@dataclass(frozen=True)
class DegenerationMatch:
    special_place: Place
    generic_places: tuple[Place, ...]
    generic_types: tuple[str, ...]
    special_type: str
    strict: bool
    delta_conserved: bool


@dataclass(frozen=True)
class DegenerationReport:
    a0: Fraction
    matches: tuple[DegenerationMatch, ...]
    generic: FiberConfiguration
    special: FiberConfiguration

    @property
    def strict_degenerations(self) -> tuple[DegenerationMatch, ...]:
        return tuple(m for m in self.matches if m.strict)

    def match_at(self, special_place: Place) -> DegenerationMatch:
        for m in self.matches:
            if m.special_place == special_place:
                return m
        raise UnknownPlaceError(f"no special place {special_place}")


def _is_strict(gens: list[KodairaFiber], special: KodairaFiber | None) -> bool:
    if special is None or not special.is_multiplicative or not gens:
        return False
    if not all(g.is_multiplicative for g in gens):
        return False
    if not any(g.split is Split.YES for g in gens):
        return False
    return special.n > max(g.n for g in gens)


def detect_degenerations(fam: EllipticFamily, a0, constants: Constants = Constants.GEOMETRIC) -> DegenerationReport:
    a0 = fam.check_parameter(a0)
    generic = generic_configuration(fam, constants)
    special = special_configuration(fam, a0, constants)
    smap = match_places(fam, a0, generic)
    by_special = {sp: list(gs) for sp, gs in smap.groups}
    for f in special.fibers:
        by_special.setdefault(f.place, [])
    matches = []
    for sp in sorted(by_special, key=Place.sort_key):
        gens = [generic.fiber_at(p) for p in by_special[sp]]
        sfib = special.fiber_at(sp)
        stype = sfib.type_tag if sfib else "I0"
        conserved = sum(g.delta_valuation for g in gens) == (sfib.delta_valuation if sfib else 0)
        if not conserved:
            warnings.warn(f"discriminant valuation not conserved at {sp} for a = {a0}", stacklevel=2)
        matches.append(
            DegenerationMatch(sp, tuple(by_special[sp]), tuple(g.type_tag for g in gens), stype, _is_strict(gens, sfib), conserved)
        )
    return DegenerationReport(a0, tuple(matches), generic, special)


# ---------------------------------------------------------------------------
# hypothesis checker
# ---------------------------------------------------------------------------


class Verdict(str, enum.Enum):
    INDECOMPOSABLE = "IndecomposableCycleExists"
    FAILS = "Fails"
    CONDITIONAL = "ConditionalOnNS"


@dataclass(frozen=True)
class ConditionResult:
    passed: bool
    value: int | None
    detail: str


@dataclass(frozen=True)
class TheoremVerdict:
    generic_place: Place
    a0: Fraction
    condition1: ConditionResult
    condition2: ConditionResult
    nf_rank: int
    ns_rank: int | None
    ns_caveat: str
    verdict: Verdict
    split: Split
    special_place: Place | None = None
    obstructions: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.verdict is Verdict.INDECOMPOSABLE:
            ok = self.condition1.passed and self.condition2.passed and self.ns_rank == self.nf_rank
            if not ok:
                raise AssertionError("inconsistent verdict")


def parse_place(text: str, fam_or_field) -> Place:
    """``inf``, ``t=r`` or a polynomial such as ``t - a^2``."""
    K = fam_or_field.model.field if isinstance(fam_or_field, EllipticFamily) else fam_or_field
    text = text.strip()
    if text.lower() in ("inf", "infinity", "oo"):
        return Place.infinite()
    variables = K.variables
    if "=" in text:
        lhs, rhs = text.split("=", 1)
        if lhs.strip() != K.var:
            raise FamilyError(f"place must be written as {K.var}=<value>")
        r = parse_expression(rhs, variables[:-1]) if len(variables) > 1 else parse_expression(rhs, [])
        return Place.linear(K.ring, K.base(r))
    p = parse_expression(text, variables)
    if isinstance(p, RationalFunction) or isinstance(p, Fraction):
        raise FamilyError("a place is a nonconstant polynomial in " + K.var)
    if p.degree() < 1:
        raise FamilyError("a place is a nonconstant polynomial in " + K.var)
    return Place(K.ring(p))


def check_theorem_hypotheses(
    fam: EllipticFamily,
    generic_place: Place | str,
    a0,
    external_ns_rank: int | None = None,
    constants: Constants = Constants.GEOMETRIC,
) -> TheoremVerdict:
    """Check the two fiber conditions and the NF = NS hypothesis at one place."""
    if isinstance(generic_place, str):
        generic_place = parse_place(generic_place, fam)
    a0 = fam.check_parameter(a0)
    report = detect_degenerations(fam, a0, constants)
    gen = report.generic.fiber_at(generic_place)
    if gen is None:
        raise UnknownPlaceError(f"{generic_place} is not a singular place of the generic fiber configuration")
    nf = shioda_tate_rank(report.generic)
    if external_ns_rank is not None and external_ns_rank < nf:
        raise FamilyError(f"NS rank {external_ns_rank} is below the NF rank {nf}")
    obstructions = []

    n = gen.n if gen.is_multiplicative else None
    if not gen.is_multiplicative:
        c1 = ConditionResult(False, None, f"generic fiber is {gen.type_tag}, not multiplicative")
    elif gen.split is Split.YES:
        c1 = ConditionResult(True, n, f"split multiplicative I{n}")
    elif gen.split is Split.UNKNOWN:
        c1 = ConditionResult(False, n, f"I{n}, splitting undetermined")
        obstructions.append("splitting of the generic fiber could not be decided")
    else:
        c1 = ConditionResult(False, n, f"I{n} is non-split")

    sp = report.special.fiber_at(_special_place(generic_place, a0, tower([fam.variable]).ring))
    special_place = sp.place if sp else None
    if sp is None or not sp.is_multiplicative:
        stype = sp.type_tag if sp else "I0"
        c2 = ConditionResult(False, None, f"special fiber is {stype}, not multiplicative")
    else:
        m = sp.n
        if n is not None and m > n:
            c2 = ConditionResult(True, m, f"I{n} degenerates to I{m}")
        else:
            c2 = ConditionResult(False, m, f"special fiber I{m} does not exceed the generic index")

    if external_ns_rank is None:
        caveat = f"NS rank not supplied; NF rank is {nf}. The conclusion needs NF = NS."
    elif external_ns_rank == nf:
        caveat = f"NS rank {external_ns_rank} equals NF rank {nf}."
    else:
        caveat = f"NS rank {external_ns_rank} exceeds NF rank {nf}; the hypothesis NF = NS fails."

    if not (c1.passed and c2.passed):
        verdict = Verdict.FAILS
    elif external_ns_rank is None:
        verdict = Verdict.CONDITIONAL
    elif external_ns_rank == nf:
        verdict = Verdict.INDECOMPOSABLE
    else:
        verdict = Verdict.FAILS
        obstructions.append("NS rank differs from NF rank")
    return TheoremVerdict(
        generic_place, a0, c1, c2, nf, external_ns_rank, caveat, verdict, gen.split, special_place, tuple(obstructions)
    )


def kummer_document() -> ModelDocument:
    text = resources.files("ellfib.data").joinpath("kummer_family.json").read_text()
    return parse_model_document(json.loads(text))


def kummer_family() -> EllipticFamily:
    """``y^2 = t(x-1)(x-t)(x-a)(ax-t)`` with the rational point ``(1, 0)``."""
    return EllipticFamily.from_document(kummer_document())
