"""The acceptance suites: eleven numbered criteria, each with its own time limit.

Every criterion builds its inputs from ``random.Random(seed)`` (offset per
criterion, so suites can be run separately and still agree with ``all``),
runs the implementation, and compares with an independent route where one
exists.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from . import audit, congruence as cg, derivation, flatness as fl, positive as pm, semiring as sr
from .algebraic import parse_field_spec
from .universe import NatUniverse, bounded_closure


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float
    limit: float
    detail: dict = field(default_factory=dict)

    @property
    def within_time(self) -> bool:
        return self.seconds < self.limit

    @property
    def ok(self) -> bool:
        return self.passed and self.within_time

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        extra = "" if self.within_time else f" (over the {self.limit:g} s limit)"
        return f"[{verdict}] criterion {self.number:2d}: {self.title} ({self.seconds:.2f} s){extra}"

    def to_dict(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.ok,
                "checks_passed": self.passed, "limit_seconds": self.limit, "detail": self.detail}


# ---------------------------------------------------------------------------
# the criteria
# ---------------------------------------------------------------------------

def _minmax_principality(rng):
    out = {}
    ok = True
    for b, expected in ((2, True), (3, True), (4, False), (5, False)):
        v = cg.is_c_principal(sr.make_minmax(b))
        out[f"minmax:{b}"] = v.principal
        ok &= v.principal == expected
    w = cg.is_c_principal(sr.make_minmax(4)).witness
    classes = sorted(sorted(c) for c in w.classes()) if w is not None else None
    out["witness_minmax:4"] = classes
    ok &= classes == [[0, 1], [2, 3]]
    return ok, out


def _set_partitions(n: int):
    if n == 0:
        yield []
        return
    for part in _set_partitions(n - 1):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [n - 1]] + part[i + 1:]
        yield part + [[n - 1]]


def _interval_partitions(b: int) -> set:
    out = set()
    for cuts in range(1 << (b - 1)):
        labels, cur = [], 0
        for a in range(b):
            labels.append(cur)
            if a < b - 1 and cuts >> a & 1:
                cur += 1
        out.add(tuple(labels))
    return out


def _lattice_counts(rng):
    out = {}
    ok = True
    for b in range(2, 6):
        s = sr.make_minmax(b)
        found = {p.labels for p in cg.enumerate_congruences(s).partitions()}
        brute = set()
        for part in _set_partitions(b):
            p = cg.CongruencePartition.from_classes(b, part)
            if cg.is_congruence(s, p):
                brute.add(p.labels)
        intervals = {cg.CongruencePartition.from_labels(lab).labels for lab in _interval_partitions(b)}
        out[f"minmax:{b}"] = {"enumerated": len(found), "brute_force": len(brute), "expected": 2 ** (b - 1)}
        ok &= len(found) == 2 ** (b - 1) and found == brute == intervals
    return ok, out


def _borger_grinberg(rng):
    bad = []
    rings = 0
    for name in sr.CATALOG:
        rep = cg.bg_check(sr.catalog_semiring(name))
        rings += rep.is_ring
        if not rep.consistent:
            bad.append(name)
    sizes = []
    for k in range(200):
        s = sr.random_semiring(rng, 6)
        if sr.validate_axioms(s):
            bad.append(f"random #{k} failed validation")
            continue
        sizes.append(s.size)
        rep = cg.bg_check(s)
        oracle = cg.boolean_quotient_exhaustive(s)
        if not rep.consistent or (rep.boolean_quotient is None) != (oracle is None):
            bad.append(f"random #{k}: {s.to_dict()}")
    return not bad, {"catalog": len(sr.CATALOG), "catalog_rings": rings, "random": len(sizes),
                     "max_random_size": max(sizes), "discrepancies": bad}


def _bx(rng):
    first = cg.check_bx_nonrelation(3, 10)
    second = cg.check_bx_nonrelation(3, 10, extra=[(cg.x_power_plus_one(4), cg.x_power_plus_one(5))])
    return (not first.related) and second.related, {"without": first.to_dict(), "with_extra": second.to_dict()}


ORDERS = ("x^2-2@1", "x^3-2@0")


def _random_pairs(rng, order, k, lo=0, hi=5):
    return [(order.element([rng.randint(lo, hi) for _ in range(order.degree)]),
             order.element([rng.randint(lo, hi) for _ in range(order.degree)])) for _ in range(k)]


def _classification(rng):
    out = {}
    ok = True
    for spec in ORDERS:
        order = pm.RealOrder.from_spec(spec)
        mismatches = []
        bounds = []
        for _ in range(100):
            pairs = _random_pairs(rng, order, rng.randint(1, 4))
            rep = pm.bounded_agreement(order, pairs)
            bounds.append(rep.bound)
            if not rep.agrees:
                mismatches.append({"pairs": [[str(a), str(b)] for a, b in pairs], **rep.to_dict()})
        out[spec] = {"sets": 100, "mismatches": mismatches, "largest_box": max(bounds)}
        ok &= not mismatches
    return ok, out


def _quotients(rng):
    order = pm.RealOrder.from_spec("x^2-2@1")
    out = {}
    ok = True
    for text in ("w", "2", "1+w", "3"):
        ideal = pm.ideal_from_generators(order, [order.parse(text)])
        for j in (0, 1):
            q = pm.quotient_semiring(order, pm.PositiveCongruence(ideal, j))
            valid = not sr.validate_axioms(q)
            out[f"({text}) j={j}"] = {"size": q.size, "det": ideal.det, "valid": valid}
            ok &= valid and q.size == abs(ideal.det) + j
    ok &= out["(w) j=1"]["size"] == 3
    return ok, out


def _integer_relation(rng):
    order = pm.RealOrder.from_spec("x^2-2@1")
    w = order.theta
    rel = pm.derive_integer_relation(order, w, w)
    ok = (rel.f, rel.g, rel.l, rel.m, rel.n) == ((0, 1), (), 2, 3, 5)
    out = {"sqrt2": rel.to_dict(), "random": []}
    for k in range(20):
        o = pm.RealOrder.from_spec(ORDERS[k % 2])
        u = a = o.zero
        while u.sign() <= 0:
            u = o.element([rng.randint(-3, 3) for _ in range(o.degree)])
        while a.sign() <= 0:
            a = o.element([rng.randint(-3, 3) for _ in range(o.degree)])
        r = pm.derive_integer_relation(o, a, u)
        good = pm.relation_identity_holds(u, r) and r.n - r.m == r.l > 0 and r.m >= 2
        out["random"].append({"order": o.spec(), "u": str(u), "ok": good})
        ok &= good
    return ok, out


def _power_chains(rng):
    checked = 0
    failures = []
    for _ in range(20):
        s = sr.catalog_semiring(rng.choice(sr.CATALOG))
        ar = derivation.finite_arithmetic(s)
        x, y = rng.randrange(s.size), rng.randrange(s.size)
        closure = cg.congruence_closure(s, [(x, s.add[x][y])])
        for n in range(1, 6):
            t = derivation.power_relation_chain(ar, x, y, n)
            good, why = derivation.verify_transcript(ar, t)
            a, b = t.conclusion()
            if not (good and closure.related(a, b)):
                failures.append(f"{s.name} x={x} y={y} n={n}: {why}")
            checked += 1
    for k in range(20):
        order = pm.RealOrder.from_spec(ORDERS[k % 2])
        ar = derivation.native_arithmetic(order.zero)
        x = order.element([rng.randint(0, 3) for _ in range(order.degree)])
        y = order.element([rng.randint(0, 3) for _ in range(order.degree)])
        cls = pm.classify_congruence(order, [(x, x + y)], cross_check=False)
        for n in range(1, 6):
            t = derivation.power_relation_chain(ar, x, y, n)
            good, why = derivation.verify_transcript(ar, t)
            a, b = t.conclusion()
            if not (good and pm.is_related(order, cls, a, b)):
                failures.append(f"{order.spec()} x={x} y={y} n={n}: {why}")
            checked += 1
    return not failures, {"transcripts": checked, "failures": failures}


def _flatness(rng):
    out = {}
    ok = True
    for spec, gamma in (("x^2-2@1", "1;w"), ("x^3-2@0", "1;w;w^2")):
        g = fl.GammaForm.parse(parse_field_spec(spec), gamma)
        failures = []
        steps = certs = collections = 0
        for _ in range(50):
            targets = [tuple(rng.randint(-5, 5) for _ in range(g.n)) for _ in range(rng.randint(1, 5))]
            targets = [t for t in targets if not any(t) or g.sign(t) > 0]
            res = fl.cover(g, None, targets)
            chain_ok = audit.verify_chain(g, res.chain)
            steps += chain_ok.checked_steps
            collections += chain_ok.checked_collections
            if not chain_ok:
                failures.append(chain_ok.reason)
            for c in res.certificates:
                certs += 1
                m = audit.verify_membership(g, res.chain.result, c)
                if not m:
                    failures.append(m.reason)
        out[f"n={g.n}"] = {"sets": 50, "certificates": certs, "elementary_steps": steps,
                           "collections_checked": collections, "failures": failures}
        ok &= not failures
    return ok, out


def _sqrt2_convergents(count: int) -> list[tuple[int, int]]:
    # p/q for sqrt 2 = [1; 2, 2, ...] via p_k = 2 p_{k-1} + p_{k-2}
    p, q = [1, 3], [1, 2]
    while len(p) < count:
        p.append(2 * p[-1] + p[-2])
        q.append(2 * q[-1] + q[-2])
    return list(zip(p, q))[:count]


def _continued_fractions(rng):
    g = fl.GammaForm.parse(parse_field_spec("x^2-2@1"), "1;w")
    res = fl.shrink_pair(g, (1, 0), (0, 1), "1/5")
    pair = [(1, 0), (0, 1)]
    trajectory = []
    for run in res.runs:
        i, j = run.step.i, run.step.j
        for _ in range(run.repeat):
            pair[i] = (pair[i][0] - pair[j][0], pair[i][1] - pair[j][1])
        trajectory.append(pair[i])
    conv = _sqrt2_convergents(4)
    expected = [(-conv[0][0], conv[0][1]), (conv[1][0], -conv[1][1]), (-conv[2][0], conv[2][1])]
    ok = trajectory == expected and tuple(res.pair) == ((3, -2), (-7, 5))
    delta = g.field.parse("1/5")
    ok &= all((g.value(v) - delta).sign() < 0 for v in res.pair)
    return ok, {"trajectory": trajectory, "convergent_vectors": expected, "final": [list(v) for v in res.pair]}


def _nat_classifier(rng):
    universe = NatUniverse(60)
    mismatches = []
    for _ in range(100):
        pairs = [(rng.randint(0, 12), rng.randint(0, 12)) for _ in range(rng.randint(1, 4))]
        cls = cg.classify_nat_congruence(pairs)
        part = bounded_closure(universe, pairs)
        for x, y in combinations(range(61), 2):
            predicted = False if cls is cg.TRIVIAL else cls.related(x, y)
            if part.related(x, y) != predicted:
                mismatches.append({"pairs": pairs, "at": [x, y]})
                break
    return not mismatches, {"sets": 100, "bound": 60, "mismatches": mismatches}


CRITERIA: dict[int, tuple[str, float, Callable]] = {
    1: ("minmax principality", 5, _minmax_principality),
    2: ("congruence-lattice counts of chains", 10, _lattice_counts),
    3: ("rings are exactly the semirings without a Boolean quotient", 30, _borger_grinberg),
    4: ("B[X] bounded closure at degree 10", 20, _bx),
    5: ("positive-model classification vs bounded closure", 60, _classification),
    6: ("quotient sizes and axioms", 5, _quotients),
    7: ("integer relation construction", 5, _integer_relation),
    8: ("power relation transcripts", 10, _power_chains),
    9: ("flatness covers with audited chains", 60, _flatness),
    10: ("continued-fraction trajectory", 1, _continued_fractions),
    11: ("N classifier vs bounded closure", 10, _nat_classifier),
}

SUITES = {
    "lattice": (1, 2, 11),
    "bg": (3,),
    "bx": (4,),
    "posmodel": (5, 6, 7, 8),
    "flatness": (9, 10),
    "all": tuple(range(1, 12)),
}


def run_criterion(number: int, seed: int) -> CriterionResult:
    title, limit, fn = CRITERIA[number]
    rng = random.Random(seed * 1000 + number)
    t0 = time.perf_counter()
    try:
        passed, detail = fn(rng)
    except Exception as exc:  # a crash is a failed criterion, reported with its message
        passed, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return CriterionResult(number, title, bool(passed), time.perf_counter() - t0, limit, detail)


def run_suite(name: str, seed: int, on_result: Callable[[CriterionResult], None] | None = None):
    if name not in SUITES:
        raise KeyError(name)
    results = []
    for k in SUITES[name]:
        r = run_criterion(k, seed)
        if on_result is not None:
            on_result(r)
        results.append(r)
    return results


