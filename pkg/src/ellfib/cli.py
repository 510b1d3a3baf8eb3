"""Command-line interface.

Exit codes: 0 on success, 1 on domain errors (degenerate model, excluded
parameter, failed lattice checks), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from ellfib import chow, family, lattice, tate
from ellfib.expr import ExpressionError, render_expression
from ellfib.schema import SCHEMA_VERSION, SchemaError, load_json, parse_model_document, parse_rational
from ellfib.weierstrass import ModelError


class InputError(Exception):
    """Raised for anything that should exit with status 2."""


DOMAIN_ERRORS = (
    ModelError,
    tate.ClassificationError,
    family.FamilyError,
    lattice.LatticeError,
    chow.ChowError,
)


# ---------------------------------------------------------------------------
# report builders (plain dicts, rendered as JSON or text)
# ---------------------------------------------------------------------------


def _q(x) -> str:
    return str(Fraction(x))


def _fiber_row(f: tate.KodairaFiber, var: str) -> dict:
    return {
        "place": f.place.label(var),
        "polynomial": "inf" if f.place.is_infinite else render_expression(f.place.pi),
        "type": f.type_tag,
        "m_v": f.components,
        "e_v": f.euler,
        "v_disc": f.delta_valuation,
        "split": f.split.value,
        "split_over_base": f.split_over_base.value,
    }


def configuration_report(cfg: tate.FiberConfiguration) -> dict:
    var = cfg.model.var
    out = {
        "constants": cfg.constants.value,
        "fibers": [_fiber_row(f, var) for f in cfg.fibers],
        "unresolved": [
            {"polynomial": render_expression(u.pi), "v_disc": u.delta_valuation} for u in cfg.unresolved
        ],
    }
    if cfg.unresolved:
        out["euler_number"] = None
        out["nf_rank"] = None
    else:
        out["euler_number"] = tate.euler_number(cfg)
        out["nf_rank"] = tate.shioda_tate_rank(cfg)
    return out


def model_report(W) -> dict:
    inv = W.invariants()
    return {
        "coefficients": W.as_dict(),
        "c4": render_expression(inv.c4),
        "c6": render_expression(inv.c6),
        "discriminant": render_expression(inv.discriminant),
        "j": render_expression(inv.j),
    }


def model_document(W, variables) -> dict:
    """A model input document reproducing ``W`` (feeds back into ``analyze``)."""
    doc = {"schema": SCHEMA_VERSION, "model": W.as_dict(), "variable": variables[-1]}
    if len(variables) == 2:
        doc["parameter"] = variables[0]
    return doc


def cmd_analyze(args) -> dict:
    doc = _document(args.input)
    constants = tate.Constants(args.constants)
    W = doc.model
    cfg = tate.fiber_configuration(W, doc.assert_irreducible, constants)
    return {
        "command": "analyze",
        "variables": list(doc.variables),
        "model": model_report(W),
        "model_document": model_document(W, doc.variables),
        "configuration": configuration_report(cfg),
    }


def _family(path: str) -> tuple[family.EllipticFamily, object]:
    doc = _document(path)
    if doc.parameter is None:
        raise InputError("family input needs a 'parameter'")
    return family.EllipticFamily.from_document(doc), doc


def _degeneration_report(rep: family.DegenerationReport, var: str) -> dict:
    return {
        "matches": [
            {
                "special_place": m.special_place.label(var),
                "generic_places": [p.label(var) for p in m.generic_places],
                "generic_types": list(m.generic_types),
                "special_type": m.special_type,
                "strict": m.strict,
                "disc_valuation_conserved": m.delta_conserved,
            }
            for m in rep.matches
        ],
        "strict_degenerations": [m.special_place.label(var) for m in rep.strict_degenerations],
    }


def family_report(fam: family.EllipticFamily, a0=None, constants=tate.Constants.GEOMETRIC) -> dict:
    var = fam.variable
    out = {
        "parameter": fam.parameter,
        "variable": var,
        "excluded": [_q(x) for x in sorted(fam.excluded)],
        "model": fam.model.as_dict(),
        "generic": configuration_report(family.generic_configuration(fam, constants)),
    }
    if a0 is not None:
        rep = family.detect_degenerations(fam, a0, constants)
        out["specialization"] = {
            "at": _q(a0),
            "model": rep.special.model.as_dict(),
            "configuration": configuration_report(rep.special),
            "degenerations": _degeneration_report(rep, var),
        }
    return out


def cmd_family(args) -> dict:
    fam, _ = _family(args.input)
    a0 = _rational_arg(args.specialize) if args.specialize is not None else None
    return {"command": "family", **family_report(fam, a0, tate.Constants(args.constants))}


def verdict_report(v: family.TheoremVerdict, var: str) -> dict:
    def cond(c: family.ConditionResult, key: str) -> dict:
        return {"passed": c.passed, key: c.value, "detail": c.detail}

    return {
        "generic_place": v.generic_place.label(var),
        "at": _q(v.a0),
        "special_place": v.special_place.label(var) if v.special_place else None,
        "condition1": {**cond(v.condition1, "n"), "split": v.split.value},
        "condition2": cond(v.condition2, "m"),
        "nf_rank": v.nf_rank,
        "ns_rank": v.ns_rank,
        "ns_caveat": v.ns_caveat,
        "obstructions": list(v.obstructions),
        "verdict": v.verdict.value,
    }


def cmd_theorem(args) -> dict:
    fam, doc = _family(args.input)
    place = _wrap_input(family.parse_place, args.place, fam)
    a0 = _rational_arg(args.at)
    ns = args.ns_rank if args.ns_rank is not None else doc.ns_rank
    v = family.check_theorem_hypotheses(fam, place, a0, ns, tate.Constants(args.constants))
    return {"command": "theorem", **verdict_report(v, fam.variable)}


def lattice_report(L: lattice.IntersectionLattice, t1=None, t2=None) -> dict:
    rep = lattice.verify_zariski(L)
    out = {
        **L.to_json(),
        "fiber_product": list(L.fiber_product()),
        "zariski": {
            "negative_semidefinite": rep.negative_semidefinite,
            "radical_is_fiber": rep.radical_is_fiber,
            "deletions_negative_definite": rep.deletions_negative_definite,
            "passed": rep.passed,
            "failures": list(rep.failures),
        },
    }
    if t1 is not None:
        sol = lattice.solve_boundary_system(L, t1, t2)
        out["boundary"] = {
            "touched": t1,
            "normalized": sol.normalized,
            "a": [_q(x) for x in sol.a],
            "det_A": _q(sol.det_A),
            "det_A11": _q(sol.det_A11),
            "signs": sol.sign_pattern,
            "residual": [_q(x) for x in lattice.residual(L, sol)],
            "certificate": sol.certificate,
        }
        if L.r[t1 - 1] == 1 and L.r[sol.normalized - 1] == 1:
            div = lattice.boundary_divisor(L, t1, sol.normalized)
            out["boundary"]["non_torsion"] = div.non_torsion
            out["boundary"]["symbolic_terms"] = list(div.symbolic_terms)
    return out


def cmd_lattice(args) -> dict:
    if sum(x is not None for x in (args.type, args.input)) + bool(args.demo) != 1:
        raise InputError("give exactly one of --type, --demo or a lattice file")
    if args.type:
        L = lattice.kodaira_gram(args.type)
    elif args.demo:
        L = lattice.demo_lattice()
    else:
        data = _wrap_input(load_json, args.input)
        L = _wrap_input(lattice.IntersectionLattice.from_json, data)
    t1 = t2 = None
    if args.solve:
        t1 = args.t1 if args.t1 is not None else 1
        t2 = args.t2
    return {"command": "lattice", **lattice_report(L, t1, t2)}


def cmd_cycle(args) -> dict:
    local = chow.construct_local_cycle(_wrap_input(chow.parse_expression, args.c, ["s"]))
    return {"command": "cycle", **local.to_json()}


def kummer_report() -> dict:
    fam = family.kummer_family()
    doc = family.kummer_document()
    var = fam.variable
    generic = family.generic_configuration(fam)
    rep = family.detect_degenerations(fam, -1)
    verdict = family.check_theorem_hypotheses(fam, "t-1", -1, doc.ns_rank)
    control = family.check_theorem_hypotheses(fam, "t-a", -1, doc.ns_rank)
    demo = lattice.demo_lattice()
    return {
        "command": "demo",
        "name": "kummer",
        "quartic": render_expression(fam.provenance.q),
        "point": [render_expression(c) for c in fam.provenance.marked_point],
        "excluded": [_q(x) for x in sorted(fam.excluded)],
        "model": fam.model.as_dict(),
        "generic": configuration_report(generic),
        "special": {"at": "-1", "configuration": configuration_report(rep.special)},
        "degenerations": _degeneration_report(rep, var),
        "theorem": verdict_report(verdict, var),
        "theorem_control": verdict_report(control, var),
        "boundary_lattice": lattice_report(demo, 1, 2),
        "local_cycle": chow.construct_local_cycle("s^2").to_json(),
    }


def cmd_demo(args) -> dict:
    return kummer_report()


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------


def _table(rows: list[dict], title: str) -> list[str]:
    cols = ("place", "type", "m_v", "e_v", "split")
    cells = [[str(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) if cells else len(c) for i, c in enumerate(cols)]
    line = lambda vals: " | ".join(v.ljust(w) for v, w in zip(vals, widths)).rstrip()
    out = [title, line(cols), "-+-".join("-" * w for w in widths)]
    out += [line(row) for row in cells]
    return out


def _config_text(cfg: dict, title: str) -> list[str]:
    lines = _table(cfg["fibers"], title)
    for u in cfg["unresolved"]:
        lines.append(f"unresolved: {u['polynomial']} (v(disc) = {u['v_disc']})")
    lines.append(f"euler number: {cfg['euler_number']}   NF rank: {cfg['nf_rank']}")
    return lines


def _verdict_text(v: dict) -> list[str]:
    c1, c2 = v["condition1"], v["condition2"]
    return [
        f"place {v['generic_place']} at a = {v['at']} (special place {v['special_place']})",
        f"  condition 1: {'pass' if c1['passed'] else 'fail'} ({c1['detail']}; split {c1['split']})",
        f"  condition 2: {'pass' if c2['passed'] else 'fail'} ({c2['detail']})",
        f"  {v['ns_caveat']}",
        *(f"  obstruction: {o}" for o in v["obstructions"]),
        f"  verdict: {v['verdict']}",
    ]


def _degen_text(d: dict) -> list[str]:
    out = ["degenerations:"]
    for m in d["matches"]:
        src = ", ".join(f"{p} {t}" for p, t in zip(m["generic_places"], m["generic_types"])) or "(none)"
        flag = "  strict" if m["strict"] else ""
        out.append(f"  {m['special_place']}: {src} -> {m['special_type']}{flag}")
    return out


def _lattice_text(d: dict) -> list[str]:
    out = ["gram:"]
    out += ["  " + " ".join(f"{x:>3}" for x in row) for row in d["gram"]]
    out.append("r: " + " ".join(str(x) for x in d["r"]))
    z = d["zariski"]
    out.append(f"zariski: {'pass' if z['passed'] else 'fail'}")
    out += [f"  {f}" for f in z["failures"]]
    if "boundary" in d:
        b = d["boundary"]
        out.append(f"a = ({', '.join(b['a'])})   det A = {b['det_A']}   det A11 = {b['det_A11']}")
        out.append(f"certificate: {str(b['certificate']).lower()}")
    return out


def render_text(report: dict) -> str:
    cmd = report["command"]
    lines: list[str] = []
    if cmd == "analyze":
        for k, v in report["model"]["coefficients"].items():
            lines.append(f"{k} = {v}")
        lines.append(f"disc = {report['model']['discriminant']}")
        lines += _config_text(report["configuration"], "singular fibers")
    elif cmd == "family":
        lines.append(f"excluded {report['parameter']}: {', '.join(report['excluded']) or '(none)'}")
        lines += _config_text(report["generic"], "generic fibers")
        if "specialization" in report:
            s = report["specialization"]
            lines += _config_text(s["configuration"], f"fibers at {report['parameter']} = {s['at']}")
            lines += _degen_text(s["degenerations"])
    elif cmd == "theorem":
        lines += _verdict_text(report)
    elif cmd == "lattice":
        lines += _lattice_text(report)
    elif cmd == "cycle":
        lines.append(f"c = {report['c']}   ord_s(c) = {report['ord_s_c']}")
        lines.append(f"component function: {report['cycle']['functions'][0]}")
        lines.append(f"winding number: {report['winding']}")
    elif cmd == "demo":
        lines.append(f"v^2 = {report['quartic']}, point ({', '.join(report['point'])})")
        lines += _config_text(report["generic"], "generic fibers")
        lines += _config_text(report["special"]["configuration"], "fibers at a = -1")
        lines += _degen_text(report["degenerations"])
        lines += _verdict_text(report["theorem"])
        lines += _verdict_text(report["theorem_control"])
        lines.append("boundary lattice of the degenerating component:")
        lines += _lattice_text(report["boundary_lattice"])
        lc = report["local_cycle"]
        lines.append(f"local cycle for c = {lc['c']}: winding {lc['winding']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------


def _wrap_input(fn, *args):
    try:
        return fn(*args)
    except (SchemaError, ExpressionError, OSError) as exc:
        raise InputError(str(exc)) from None
    except lattice.LatticeError as exc:
        raise InputError(str(exc)) from None
    except family.FamilyError as exc:
        if isinstance(exc, family.ExcludedParameterError):
            raise
        raise InputError(str(exc)) from None


def _document(path: str):
    data = _wrap_input(load_json, path)
    try:
        return parse_model_document(data)
    except (SchemaError, ExpressionError) as exc:
        raise InputError(str(exc)) from None


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(str(text))
    except (ExpressionError, TypeError, ValueError) as exc:
        raise InputError(f"not a rational number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    consts = argparse.ArgumentParser(add_help=False)
    consts.add_argument(
        "--constants",
        choices=[c.value for c in tate.Constants],
        default=tate.Constants.GEOMETRIC.value,
        help="constant field for the split test",
    )

    parser = argparse.ArgumentParser(prog="ellfib", description="Singular fibers and degenerations of elliptic surfaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common, consts], help="classify the singular fibers of a model")
    p.add_argument("input", help="model JSON file or inline JSON")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("family", parents=[common, consts], help="generic fibers of a family, optionally specialized")
    p.add_argument("input")
    p.add_argument("--specialize", metavar="A0")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("theorem", parents=[common, consts], help="check the degeneration hypotheses at a place")
    p.add_argument("input")
    p.add_argument("--place", required=True, help="e.g. 't-1', 't=a^2' or 'inf'")
    p.add_argument("--at", required=True, metavar="A0")
    p.add_argument("--ns-rank", type=int)
    p.set_defaults(func=cmd_theorem)

    p = sub.add_parser("lattice", parents=[common], help="component lattice checks and the boundary system")
    p.add_argument("input", nargs="?")
    p.add_argument("--type", help="Kodaira symbol such as I3, I1*, IV*")
    p.add_argument("--demo", action="store_true", help="use the shipped I2-to-I4 lattice")
    p.add_argument("--solve", action="store_true")
    p.add_argument("--t1", type=int)
    p.add_argument("--t2", type=int)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("cycle", parents=[common], help="local cycle on y^2 = x^3 + x^2 + c(s)")
    p.add_argument("--c", required=True, metavar="POLY", help="polynomial in s with c(0) = 0")
    p.set_defaults(func=cmd_cycle)

    p = sub.add_parser("demo", parents=[common], help="built-in worked examples")
    p.add_argument("name", choices=["kummer"])
    p.set_defaults(func=cmd_demo)
    return parser


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(kind: str, message: str, args, code: int) -> int:
    if args.format == "json":
        body = {"schema": SCHEMA_VERSION, "error": {"kind": kind, "message": message, "exit_code": code}}
        sys.stdout.write(json.dumps(body, indent=2) + "\n")
    else:
        print(f"error: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except InputError as exc:
        return _error("input", str(exc), args, 2)
    except DOMAIN_ERRORS as exc:
        return _error(type(exc).__name__, str(exc), args, 1)
    report = {"schema": SCHEMA_VERSION, **report}
    if args.format == "json":
        text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    else:
        text = render_text(report)
    _emit(text, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
