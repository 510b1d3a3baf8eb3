"""JSON input documents: models, families and places.

Model document::

    {"schema": "1",
     "model": {"a1": "0", "a2": "...", "a3": "0", "a4": "...", "a6": "..."}
              | {"quartic": "...", "point": ["u0", "v0"]},
     "variable": "t", "parameter": "a", "quartic_variable": "x",
     "excluded": ["0", "1"], "ns_rank": 19, "assert_irreducible": ["t^2 + 1"]}

Only ``model`` is required.  ``parameter`` switches the constant field from
QQ to QQ(parameter).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ellfib.algebra.fields import PolyRing, RationalFunction, tower
from ellfib.expr import parse_expression
from ellfib.weierstrass import QuarticModel, WeierstrassModel, quartic_to_weierstrass

SCHEMA_VERSION = "1"
_COEFFS = ("a1", "a2", "a3", "a4", "a6")
_KNOWN_KEYS = {
    "schema",
    "description",
    "model",
    "variable",
    "parameter",
    "quartic_variable",
    "excluded",
    "ns_rank",
    "assert_irreducible",
}


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class ModelDocument:
    model: WeierstrassModel
    variables: tuple[str, ...]
    quartic: QuarticModel | None = None
    excluded: tuple[Fraction, ...] = ()
    ns_rank: int | None = None
    assert_irreducible: tuple = field(default=())

    @property
    def parameter(self) -> str | None:
        return self.variables[0] if len(self.variables) == 2 else None


def _str_field(data: dict, key: str, default: str) -> str:
    value = data.get(key, default)
    if not isinstance(value, str) or not value.isidentifier():
        raise SchemaError(f"{key!r} must be an identifier")
    return value


def parse_model_document(data) -> ModelDocument:
    if not isinstance(data, dict):
        raise SchemaError("input must be a JSON object")
    version = data.get("schema", SCHEMA_VERSION)
    if str(version) != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {version!r}")
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise SchemaError(f"unknown keys: {', '.join(sorted(unknown))}")
    if "model" not in data or not isinstance(data["model"], dict):
        raise SchemaError("'model' object is required")
    var = _str_field(data, "variable", "t")
    param = data.get("parameter")
    if param is not None:
        param = _str_field(data, "parameter", "a")
    variables = (param, var) if param else (var,)
    if len(set(variables)) != len(variables):
        raise SchemaError("parameter and variable must differ")
    K = tower(variables)
    body = data["model"]
    quartic = None
    if "quartic" in body:
        if set(body) - {"quartic", "point"}:
            raise SchemaError("quartic model takes only 'quartic' and 'point'")
        qvar = _str_field(data, "quartic_variable", "x")
        if qvar in variables:
            raise SchemaError("quartic variable clashes with another variable")
        q = parse_expression(_expect_str(body["quartic"], "quartic"), variables + (qvar,))
        if isinstance(q, RationalFunction):
            raise SchemaError("quartic must be polynomial in " + qvar)
        q = PolyRing(K, qvar)(q)
        point = body.get("point")
        if point is not None:
            if not (isinstance(point, list) and len(point) == 2):
                raise SchemaError("'point' must be a pair of expressions")
            point = tuple(K(parse_expression(_expect_str(p, "point"), variables)) for p in point)
        quartic = QuarticModel(q, point)
        model = quartic_to_weierstrass(quartic, K)
    else:
        unknown = set(body) - set(_COEFFS)
        if unknown:
            raise SchemaError(f"unknown model keys: {', '.join(sorted(unknown))}")
        coeffs = {k: K(parse_expression(_expect_str(body.get(k, "0"), k), variables)) for k in _COEFFS}
        model = WeierstrassModel(K, *(coeffs[k] for k in _COEFFS))
    excluded = tuple(_rational(x) for x in data.get("excluded", []))
    ns_rank = data.get("ns_rank")
    if ns_rank is not None and (not isinstance(ns_rank, int) or isinstance(ns_rank, bool) or ns_rank < 0):
        raise SchemaError("'ns_rank' must be a nonnegative integer")
    asserted = tuple(
        K.ring(parse_expression(_expect_str(p, "assert_irreducible"), variables))
        for p in data.get("assert_irreducible", [])
    )
    return ModelDocument(model, variables, quartic, excluded, ns_rank, asserted)


def _expect_str(value, key: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{key!r} entries must be expression strings")
    return value


def _rational(x) -> Fraction:
    try:
        return Fraction(str(x))
    except ValueError:
        raise SchemaError(f"not a rational number: {x!r}") from None


def parse_rational(text: str) -> Fraction:
    """Rational literal or expression without variables, e.g. ``-1`` or ``3/2``."""
    value = parse_expression(text, [])
    return Fraction(value)


def load_json(path_or_text: str):
    """Read JSON from a file path, or parse it directly when it looks inline."""
    text = path_or_text
    if not path_or_text.lstrip().startswith("{"):
        text = Path(path_or_text).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
