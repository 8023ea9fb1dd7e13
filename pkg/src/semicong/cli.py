"""Command-line front end.

    semicong semiring validate|enumerate|c-principal|bg-check ...
    semicong nat classify --pair A B ...
    semicong bx check --n 3 --degree-bound 10
    semicong order classify|quotient|related|integer-relation|k-ideal --field x^2-2@1 ...
    semicong flat cover|verify|search-n3 ...
    semicong acceptance SUITE SEED

Exit codes: 0 success, 2 invalid input, 3 budget exhausted, 1 failed
consistency check (including failed acceptance criteria or a failed audit).
Every subcommand accepts ``--problem FILE``: a JSON document whose keys
fill in the flags of the same name (dashes as underscores); flags given on
the command line win.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from typing import Any, Callable

import jsonschema

from . import __version__
from . import acceptance as acc
from . import audit
from . import congruence as cg
from . import flatness as fl
from . import positive as pm
from . import semiring as sr
from .algebraic import parse_field_spec
from .errors import ConsistencyError, InvalidInputError, ResourceError

EXIT_OK, EXIT_CONSISTENCY, EXIT_INVALID, EXIT_RESOURCE = 0, 1, 2, 3


class CommandFailed(Exception):
    """A command ran but its verdict is a failure (audit or acceptance); exit 1 after reporting."""


# ---------------------------------------------------------------------------
# problem files
# ---------------------------------------------------------------------------

_PAIR = {"type": "array", "items": {"type": ["string", "integer"]}, "minItems": 2, "maxItems": 2}
_STRINGS = {"type": "array", "items": {"type": "string"}}

SCHEMAS: dict[str, dict] = {
    "semiring": {
        "type": "object",
        "properties": {"semiring": {"type": "string"}, "semirings": _STRINGS, "random": {"type": "integer"},
                       "max_size": {"type": "integer", "minimum": 1}},
    },
    "semiring-table": {
        "type": "object",
        "required": ["add", "mul", "zero", "one"],
        "properties": {
            "size": {"type": "integer", "minimum": 1},
            "add": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
            "mul": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
            "zero": {"type": "integer", "minimum": 0},
            "one": {"type": "integer", "minimum": 0},
            "labels": _STRINGS,
            "name": {"type": "string"},
        },
    },
    "nat": {"type": "object", "properties": {"pair": {"type": "array", "items": _PAIR}, "bound": {"type": "integer"}}},
    "bx": {"type": "object", "properties": {"n": {"type": "integer", "minimum": 1},
                                           "degree_bound": {"type": "integer"},
                                           "extra": {"type": "array", "items": _PAIR},
                                           "query": _PAIR}},
    "order": {
        "type": "object",
        "properties": {"field": {"type": "string"}, "pair": {"type": "array", "items": _PAIR},
                       "ideal": {"type": "string"}, "j": {"enum": [0, 1]}, "query": _PAIR,
                       "a": {"type": "string"}, "u": {"type": "string"}},
    },
    "flat": {
        "type": "object",
        "properties": {
            "field": {"type": "string"}, "gamma": {"type": "string"},
            "target": {"type": "array", "items": {"type": "string"}},
            "start": {"type": "string"}, "samples": {"type": "integer", "minimum": 1},
        },
    },
    "flat-report": {
        "type": "object",
        "required": ["field", "gamma", "chain", "certificates"],
        "properties": {
            "field": {"type": "string"}, "gamma": {"type": "string"},
            "chain": {"type": "object", "required": ["start", "steps", "result"]},
            "certificates": {"type": "array", "items": {
                "type": "object", "required": ["target", "coefficients"],
                "properties": {"target": {"type": "array", "items": {"type": "integer"}},
                               "coefficients": {"type": "array", "items": {"type": "integer"}}}}},
        },
    },
}


def _read_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path} is not valid JSON: {exc}") from None


def validate_document(doc: Any, schema_name: str) -> None:
    try:
        jsonschema.validate(doc, SCHEMAS[schema_name])
    except jsonschema.ValidationError as exc:
        raise InvalidInputError(f"problem file does not match the {schema_name} schema: {exc.message}") from None


def _apply_problem(args: argparse.Namespace, schema_name: str) -> None:
    if not getattr(args, "problem", None):
        return
    doc = _read_json(args.problem)
    validate_document(doc, schema_name)
    for key, value in doc.items():
        if getattr(args, key, None) in (None, [], ()):
            setattr(args, key, value)


def load_semiring_checked(spec: str) -> sr.FiniteSemiring:
    if spec.endswith(".json"):
        doc = _read_json(spec)
        validate_document(doc, "semiring-table")
        return sr.FiniteSemiring.from_dict({"size": len(doc["add"]), **doc})
    return sr.load_semiring(spec)


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in str(text).replace(" ", "").split(",") if x != "")
    except ValueError:
        raise InvalidInputError(f"expected comma-separated integers, got {text!r}") from None


def _collection(text: str) -> list[tuple[int, ...]]:
    return [_ints(part) for part in text.split(";")]


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) in (None, [], ()):
            raise InvalidInputError(f"--{name.replace('_', '-')} is required")


def _order(args) -> pm.RealOrder:
    _need(args, "field")
    return pm.RealOrder.from_spec(args.field)


def _order_pairs(order: pm.RealOrder, raw) -> list:
    return [(order.parse(str(a)), order.parse(str(b))) for a, b in (raw or [])]


def _ideal(order: pm.RealOrder, text: str) -> pm.IdealLattice:
    gens = [order.parse(g) for g in str(text).split(";") if g.strip()]
    if not gens:
        raise InvalidInputError("an ideal needs at least one generator")
    return pm.ideal_from_generators(order, gens)


def _plot_path(args, name: str) -> str | None:
    if not getattr(args, "plot_dir", None):
        return None
    return os.path.join(args.plot_dir, name)


def _safe(label: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in label)


# ---------------------------------------------------------------------------
# commands: each returns (result payload, human-readable lines)
# ---------------------------------------------------------------------------

def cmd_semiring_validate(args):
    s = load_semiring_checked(args.semiring)
    bad = sr.validate_axioms(s)
    res = {"semiring": s.name, "size": s.size, "valid": not bad, "commutative": s.is_commutative(),
           "violations": [str(v) for v in bad[:20]], "violation_count": len(bad)}
    lines = [f"{s.name}: {'valid' if not bad else f'{len(bad)} axiom violations'} (size {s.size})"]
    lines += [f"  {v}" for v in bad[:10]]
    if (p := _plot_path(args, f"tables_{_safe(s.name)}.png")):
        from .plotting import plot_semiring_tables
        res["plots"] = [plot_semiring_tables(s, p)]
    return res, lines


def cmd_semiring_enumerate(args):
    s = load_semiring_checked(args.semiring)
    lat = cg.enumerate_congruences(s, max_size=args.max_size or 24)
    res = {"semiring": s.name, **lat.to_dict(), "covers": lat.cover_relations()}
    lines = [f"{s.name}: {len(lat)} congruences"]
    for e in lat:
        cls = " | ".join(",".join(s.label(a) for a in c) for c in e.partition.classes())
        gens = "; ".join(f"{s.label(a)}~{s.label(b)}" for a, b in e.generators) or "-"
        lines.append(f"  {cls:30s} generated by {gens}{'' if e.principal else '  (not principal)'}")
    if (p := _plot_path(args, f"lattice_{_safe(s.name)}.png")):
        from .plotting import plot_congruence_lattice, plot_semiring_tables
        res["plots"] = [plot_congruence_lattice(lat, p),
                        plot_semiring_tables(s, _plot_path(args, f"tables_{_safe(s.name)}.png"))]
    return res, lines


def cmd_semiring_c_principal(args):
    s = load_semiring_checked(args.semiring)
    v = cg.is_c_principal(s, max_size=args.max_size or 24)
    witness = None
    if v.witness is not None:
        witness = [[s.label(a) for a in c] for c in v.witness.classes()]
    res = {"semiring": s.name, "c_principal": v.principal, "congruences": len(v.lattice), "witness": witness}
    lines = [f"{s.name}: {'c-principal' if v.principal else 'not c-principal'} ({len(v.lattice)} congruences)"]
    if witness:
        lines.append("  witness (needs more than one generating pair): "
                     + " | ".join(",".join(c) for c in witness))
    if (p := _plot_path(args, f"lattice_{_safe(s.name)}.png")):
        from .plotting import plot_congruence_lattice
        res["plots"] = [plot_congruence_lattice(v.lattice, p)]
    return res, lines


def cmd_semiring_bg_check(args):
    names = list(args.semirings or []) or list(sr.CATALOG)
    reports = [cg.bg_check(load_semiring_checked(n)) for n in names]
    rng = random.Random(args.seed)
    for _ in range(args.random or 0):
        reports.append(cg.bg_check(sr.random_semiring(rng, args.max_size or 6)))
    bad = [r for r in reports if not r.consistent]
    res = {"checked": len(reports), "discrepancies": [r.to_dict() for r in bad],
           "reports": [r.to_dict() for r in reports]}
    lines = [f"{r.name:28s} ring={r.is_ring!s:5s} boolean quotient="
             f"{sorted(r.boolean_quotient) if r.boolean_quotient is not None else None}"
             f"{'' if r.consistent else '  DISCREPANCY'}" for r in reports]
    lines.append(f"{len(reports)} semirings, {len(bad)} discrepancies")
    if bad:
        raise ConsistencyError(f"{len(bad)} semirings contradict the ring / Boolean-quotient equivalence")
    return res, lines


def cmd_nat_classify(args):
    _need(args, "pair")
    pairs = [(_int(a), _int(b)) for a, b in args.pair]
    cls = cg.classify_nat_congruence(pairs, cross_check=not args.no_cross_check, bound=args.bound,
                                     budget=args.budget or 200_000)
    if cls is cg.TRIVIAL:
        return {"kind": "trivial"}, ["trivial congruence (only x ~ x)"]
    return ({"kind": "nontrivial", "n": cls.n, "k": cls.k},
            [f"x ~ y iff x = y, or x, y >= {cls.n} and x = y mod {cls.k}"])


def _int(x) -> int:
    try:
        return int(x)
    except (TypeError, ValueError):
        raise InvalidInputError(f"{x!r} is not an integer") from None


def _bool_poly(text) -> "sr.BoolPolynomial":
    exps = _ints(text)
    return sr.BoolPolynomial.of(*exps)


def cmd_bx_check(args):
    n = args.n or 3
    extra = [(_bool_poly(a), _bool_poly(b)) for a, b in (args.extra or [])]
    query = (_bool_poly(args.query[0]), _bool_poly(args.query[1])) if args.query else None
    rep = cg.check_bx_nonrelation(n, args.degree_bound or 10, budget=args.budget or 200_000,
                                  extra=extra, query=query)
    verdict = "related" if rep.related else "not related"
    return rep.to_dict(), [f"{rep.query[0]} vs {rep.query[1]}: {verdict} within degree <= {rep.degree_bound} "
                           f"({rep.merges} merges, {rep.classes} classes)", f"note: {rep.note}"]


def _class_lines(cls) -> list[str]:
    if cls is cg.TRIVIAL:
        return ["trivial congruence (only x ~ x)"]
    d = cls.to_dict()
    return [f"C_{cls.j}(I), I with HNF basis {d['hnf']} (index {d['determinant']})",
            f"quotient has {d['quotient_size']} elements",
            "canonical generators: " + ", ".join(f"{a} ~ {b}" for a, b in pm.canonical_generators(cls))]


def cmd_order_classify(args):
    order = _order(args)
    _need(args, "pair")
    pairs = _order_pairs(order, args.pair)
    cls = pm.classify_congruence(order, pairs, cross_check=not args.no_cross_check,
                                 coord_bound=args.coord_bound or 4, budget=args.budget or 20_000)
    if cls is cg.TRIVIAL:
        return {"kind": "trivial"}, _class_lines(cls)
    res = {**cls.to_dict(), "canonical_generators": [[str(a), str(b)] for a, b in pm.canonical_generators(cls)]}
    return res, _class_lines(cls)


def cmd_order_quotient(args):
    order = _order(args)
    _need(args, "ideal")
    cls = pm.PositiveCongruence(_ideal(order, args.ideal), int(args.j or 0))
    q = pm.quotient_semiring(order, cls, max_size=args.max_size or 400)
    bad = sr.validate_axioms(q)
    if bad:
        raise ConsistencyError(f"quotient table fails the semiring axioms: {bad[0]}")
    res = {"size": q.size, "det": cls.ideal.det, "j": cls.j, "table": q.to_dict(), "valid": True}
    lines = [f"S / C_{cls.j}(I): {q.size} elements (index of I = {cls.ideal.det})"]
    if q.size <= 12:
        lines.append("labels: " + " ".join(q.label(i) for i in range(q.size)))
    if (p := _plot_path(args, f"quotient_{_safe(args.ideal)}_j{cls.j}.png")):
        from .plotting import plot_semiring_tables
        res["plots"] = [plot_semiring_tables(q, p)]
    return res, lines


def cmd_order_related(args):
    order = _order(args)
    _need(args, "pair", "query")
    cls = pm.classify_congruence(order, _order_pairs(order, args.pair), cross_check=not args.no_cross_check)
    x, y = order.parse(str(args.query[0])), order.parse(str(args.query[1]))
    rel = pm.is_related(order, cls, x, y)
    return {"query": [str(x), str(y)], "related": rel}, [f"{x} ~ {y}: {rel}"]


def cmd_order_integer_relation(args):
    order = _order(args)
    _need(args, "a", "u")
    a, u = order.parse(str(args.a)), order.parse(str(args.u))
    rel = pm.derive_integer_relation(order, a, u)
    ok = pm.relation_identity_holds(u, rel)
    if not ok:
        raise ConsistencyError("integer relation fails its defining identity")
    d = rel.to_dict()
    return ({**d, "identity_verified": ok},
            [f"u f(u) = u g(u) + l with f = {d['f']}, g = {d['g']}, l = {rel.l} (verified)",
             f"hence {rel.m} ~ {rel.n}"])


def cmd_order_k_ideal(args):
    order = _order(args)
    _need(args, "ideal")
    ideal = _ideal(order, args.ideal)
    k = pm.k_ideal_of(ideal)
    back = pm.ring_ideal_of(k)
    small = pm.small_generators(ideal)
    res = {**ideal.to_dict(), "k_ideal_generators": [str(g) for g in k.generators],
           "round_trip": back == ideal,
           "small_generators": [str(g) for g in small] if small is not None else None}
    if back != ideal:
        raise ConsistencyError("k-ideal and ring ideal maps are not inverse on this input")
    return res, [f"ideal HNF {res['hnf']} (index {ideal.det}); k-ideal generated by "
                 + ", ".join(res["k_ideal_generators"]),
                 f"round trip ok; small generating set: {res['small_generators']}"]


def _gamma(args) -> fl.GammaForm:
    _need(args, "field", "gamma")
    return fl.GammaForm.parse(parse_field_spec(args.field), args.gamma)


def cmd_flat_cover(args):
    g = _gamma(args)
    targets = [_ints(t) for t in (args.target or [])]
    start = _collection(args.start) if args.start else None
    res = fl.cover(g, start, targets)
    chain_audit = audit.verify_chain(g, res.chain)
    cert_audits = [audit.verify_membership(g, res.chain.result, c) for c in res.certificates]
    ok = chain_audit.ok and all(cert_audits)
    out = {"field": args.field, "gamma": args.gamma, "chain": res.chain.to_dict(),
           "certificates": [c.to_dict() for c in res.certificates],
           "verification": {"chain": chain_audit.to_dict(), "certificates": [a.to_dict() for a in cert_audits],
                            "verified": ok}}
    lines = [f"chain of {len(res.chain)} elementary steps ({len(res.chain.runs)} runs)",
             "final collection: " + "; ".join(",".join(map(str, v)) for v in res.chain.result)]
    lines += [f"  {c.target} = " + " + ".join(f"{k}*v{i}" for i, k in enumerate(c.coefficients) if k) if any(c.target)
              else f"  {c.target} = 0" for c in res.certificates]
    lines.append(f"independent audit: {'passed' if ok else 'FAILED'}")
    if (p := _plot_path(args, "cover.png")) and g.n in (2, 3):
        from .plotting import plot_cover
        out["plots"] = [plot_cover(g, res.chain.start, res.chain.result, targets, p)]
    if not ok:
        raise ConsistencyError("constructed chain or certificate failed the independent audit")
    return out, lines


def cmd_flat_verify(args):
    if not args.problem:
        raise InvalidInputError("flat verify needs --problem REPORT.json (the JSON output of flat cover)")
    doc = _read_json(args.problem)
    if "result" in doc and "chain" not in doc:
        doc = doc["result"]
    validate_document(doc, "flat-report")
    g = fl.GammaForm.parse(parse_field_spec(doc["field"]), doc["gamma"])
    chain = fl.RefinementChain.from_dict(doc["chain"])
    chain_audit = audit.verify_chain(g, chain)
    certs = [fl.MembershipCertificate(tuple(c["target"]), tuple(c["coefficients"])) for c in doc["certificates"]]
    cert_audits = [audit.verify_membership(g, chain.result, c) for c in certs]
    ok = chain_audit.ok and all(cert_audits)
    res = {"chain": chain_audit.to_dict(), "certificates": [a.to_dict() for a in cert_audits], "verified": ok}
    lines = [f"chain: {chain_audit.reason} ({chain_audit.checked_steps} steps)"]
    lines += [f"certificate {i}: {a.reason}" for i, a in enumerate(cert_audits)]
    if not ok:
        raise CommandFailed(json.dumps(res, sort_keys=True), res, lines)
    return res, lines


def cmd_flat_search_n3(args):
    g = _gamma(args)
    outs = fl.search_span_without_refinement(g, random.Random(args.seed), samples=args.samples or 50,
                                             budget=args.budget or 20_000)
    counts: dict[str, int] = {}
    for o in outs:
        counts[o.verdict] = counts.get(o.verdict, 0) + 1
    candidates = [o.to_dict() for o in outs if o.verdict == "no-refinement"]
    res = {"samples": len(outs), "verdicts": counts, "candidates": candidates,
           "note": "experimental: span containment holds by construction; 'no-refinement' means an "
                   "exhaustive search over collections inside Sp_N(W) found no refinement chain"}
    lines = [f"{len(outs)} sampled pairs: {counts}"]
    lines += [f"  candidate V={c['V']} W={c['W']}" for c in candidates[:5]]
    return res, lines


def cmd_acceptance(args):
    if args.suite not in acc.SUITES:
        raise InvalidInputError(f"unknown suite {args.suite!r}; choose from {', '.join(acc.SUITES)}")
    printer = None if args.json else (lambda r: print(r.line(), flush=True))
    results = acc.run_suite(args.suite, args.seed_pos, printer)
    res = {"suite": args.suite, "seed": args.seed_pos, "criteria": [r.to_dict() for r in results],
           "passed": all(r.ok for r in results)}
    timing = {f"criterion_{r.number}": round(r.seconds, 3) for r in results}
    lines = [f"{sum(r.ok for r in results)}/{len(results)} criteria passed"]
    if not res["passed"]:
        raise CommandFailed("acceptance failures", res, lines, timing)
    return res, lines, timing


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None, help="closure merge / search budget")
    p.add_argument("--degree-bound", type=int, default=None)
    p.add_argument("--coord-bound", type=int, default=None)
    p.add_argument("--plot-dir", default=None, help="write figures (PNG) into this directory")
    p.add_argument("--problem", default=None, help="JSON problem file supplying the flags")


COMMANDS: dict[tuple[str, str], tuple[Callable, str]] = {}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semicong", description="Congruences on semirings: exact tools and audits.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    def add(group_parsers, group, name, fn, schema, help_text):
        p = group_parsers.add_parser(name, help=help_text)
        _common(p)
        COMMANDS[(group, name)] = (fn, schema)
        p.set_defaults(command=(group, name))
        return p

    g = groups.add_parser("semiring", help="finite semirings").add_subparsers(dest="cmd", required=True)
    for name, fn, text in (("validate", cmd_semiring_validate, "check the semiring axioms"),
                           ("enumerate", cmd_semiring_enumerate, "list every congruence"),
                           ("c-principal", cmd_semiring_c_principal, "is every congruence principal?")):
        p = add(g, "semiring", name, fn, "semiring", text)
        p.add_argument("semiring", nargs="?", help="catalog name (e.g. minmax:4) or table.json")
        p.add_argument("--max-size", type=int, default=None)
    p = add(g, "semiring", "bg-check", cmd_semiring_bg_check, "semiring",
            "ring iff no Boolean quotient, on the catalog or given semirings")
    p.add_argument("semirings", nargs="*")
    p.add_argument("--random", type=int, default=0, help="also check this many random semirings")
    p.add_argument("--max-size", type=int, default=None)

    g = groups.add_parser("nat", help="congruences on N").add_subparsers(dest="cmd", required=True)
    p = add(g, "nat", "classify", cmd_nat_classify, "nat", "closed form of a generated congruence")
    p.add_argument("--pair", nargs=2, action="append", metavar=("A", "B"))
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--no-cross-check", action="store_true")

    g = groups.add_parser("bx", help="the B[X] window check").add_subparsers(dest="cmd", required=True)
    p = add(g, "bx", "check", cmd_bx_check, "bx", "bounded closure of X^i+1 ~ X^j+1")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--extra", nargs=2, action="append", metavar=("P", "Q"),
                   help="extra generator, polynomials as comma-separated exponents, e.g. 0,4 0,5")
    p.add_argument("--query", nargs=2, metavar=("P", "Q"))

    g = groups.add_parser("order", help="real orders Z[theta] and their positive parts").add_subparsers(
        dest="cmd", required=True)
    for name, fn, text in (("classify", cmd_order_classify, "classify a generated congruence"),
                           ("quotient", cmd_order_quotient, "finite quotient table"),
                           ("related", cmd_order_related, "membership query"),
                           ("integer-relation", cmd_order_integer_relation, "integers m ~ n from a ~ a + u"),
                           ("k-ideal", cmd_order_k_ideal, "k-ideal of a ring ideal and back")):
        p = add(g, "order", name, fn, "order", text)
        p.add_argument("--field", help="defining polynomial and root index, e.g. x^2-2@1")
        p.add_argument("--pair", nargs=2, action="append", metavar=("X", "Y"),
                       help="elements as expressions in w (1+w) or coordinates (1,1)")
        p.add_argument("--ideal", help="generators separated by ';'")
        p.add_argument("--j", type=int, choices=(0, 1), default=None)
        p.add_argument("--query", nargs=2, metavar=("X", "Y"))
        p.add_argument("--a")
        p.add_argument("--u")
        p.add_argument("--max-size", type=int, default=None)
        p.add_argument("--no-cross-check", action="store_true")

    g = groups.add_parser("flat", help="nice collections and cone covers").add_subparsers(dest="cmd", required=True)
    for name, fn, text in (("cover", cmd_flat_cover, "refine until the targets are in the N-span"),
                           ("verify", cmd_flat_verify, "audit a saved cover report"),
                           ("search-n3", cmd_flat_search_n3, "experimental span-containment search")):
        p = add(g, "flat", name, fn, "flat", text)
        p.add_argument("--field")
        p.add_argument("--gamma", help="coordinates separated by ';', e.g. \"1;w\"")
        p.add_argument("--target", action="append", help="comma-separated integers; repeatable")
        p.add_argument("--start", help="starting collection, vectors separated by ';'")
        p.add_argument("--samples", type=int, default=None)

    p = groups.add_parser("acceptance", help="run an acceptance suite")
    _common(p)
    p.add_argument("suite", choices=sorted(acc.SUITES))
    p.add_argument("seed_pos", type=int, nargs="?", default=0, metavar="seed")
    p.set_defaults(command=("acceptance", ""))
    COMMANDS[("acceptance", "")] = (cmd_acceptance, "")
    return parser


def _digest(args: argparse.Namespace) -> str:
    skip = {"json", "plot_dir", "command", "group", "cmd"}
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return hashlib.sha256(json.dumps(inputs, sort_keys=True, default=str).encode()).hexdigest()


def _emit(args, payload, lines, timing, status: str) -> None:
    if args.json:
        command = " ".join(x for x in args.command if x)
        report = {"command": command, "inputs_digest": _digest(args), "status": status,
                  "result": payload, "timing": timing}
        print(json.dumps(report, sort_keys=True, indent=2, default=str))
    else:
        for line in lines:
            print(line)


_VALUE_FLAGS = {"--target", "--start", "--gamma", "--ideal", "--a", "--u"}


def _glue_negative_values(argv: list[str]) -> list[str]:
    """``--target -1,1`` would read as an option; rewrite it to ``--target=-1,1``."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1][:1] == "-" and argv[i + 1][1:2].isdigit():
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(list(sys.argv[1:] if argv is None else argv)))
    fn, schema = COMMANDS[args.command]
    t0 = time.perf_counter()
    try:
        if schema:
            _apply_problem(args, schema)
        if args.command[0] == "semiring" and args.command[1] != "bg-check":
            _need(args, "semiring")
        out = fn(args)
        payload, lines = out[0], out[1]
        timing = {"seconds": round(time.perf_counter() - t0, 3), **(out[2] if len(out) > 2 else {})}
        _emit(args, payload, lines, timing, "ok")
        return EXIT_OK
    except CommandFailed as exc:
        payload, lines = exc.args[1], exc.args[2]
        timing = {"seconds": round(time.perf_counter() - t0, 3), **(exc.args[3] if len(exc.args) > 3 else {})}
        _emit(args, payload, lines, timing, "failed")
        return EXIT_CONSISTENCY
    except InvalidInputError as exc:
        return _fail(args, "invalid-input", str(exc), EXIT_INVALID)
    except ResourceError as exc:
        return _fail(args, "resource-exhausted", str(exc), EXIT_RESOURCE)
    except ConsistencyError as exc:
        return _fail(args, "consistency-failure", str(exc), EXIT_CONSISTENCY)
    except Exception as exc:  # anything unexpected is an internal failure, not a crash
        return _fail(args, "internal-error", f"{type(exc).__name__}: {exc}", EXIT_CONSISTENCY)


def _fail(args, status: str, message: str, code: int) -> int:
    if args.json:
        print(json.dumps({"command": " ".join(x for x in args.command if x), "status": status,
                          "error": message, "inputs_digest": _digest(args)}, sort_keys=True, indent=2))
    print(f"error ({status}): {message}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
