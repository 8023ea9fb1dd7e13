"""Independent replay checks for refinement chains and membership certificates.

Nothing here calls the construction code: dot products, determinants and
step semantics are recomputed from scratch (determinants by rational
Gaussian elimination rather than fraction-free elimination).

A run of r identical subtractions v_i <- v_i - v_j is checked as r
elementary steps without looping r times: before the run every gamma-value
is positive, v_j is untouched by the run, and the intermediate values of
v_i are val_i - k * val_j for k = 0..r, a decreasing sequence.  Step k is
legal iff val_i - (k-1) val_j > val_j, i.e. the value after step k is
positive, so all r steps are legal and every intermediate collection is
nice exactly when the value after the last step is positive.  Subtracting
one column from another never changes the determinant; it is recomputed
after each run anyway.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebraic import FieldElement


@dataclass
class AuditResult:
    ok: bool
    reason: str = "ok"
    checked_steps: int = 0
    checked_collections: int = 0
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "reason": self.reason, "checked_steps": self.checked_steps,
                "checked_collections": self.checked_collections}


def _dot(gamma: Sequence[FieldElement], v: Sequence[int]) -> FieldElement:
    total = gamma[0] * 0
    for x, g in zip(v, gamma):
        total = total + g * int(x)
    return total


def _det(rows: Sequence[Sequence[int]]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return d


def _coords(gamma) -> tuple:
    return tuple(getattr(gamma, "coords", gamma))


def _nice_problem(gamma, vs) -> str | None:
    n = len(gamma)
    if len(vs) != n or any(len(v) != n for v in vs):
        return "collection has the wrong shape"
    if abs(_det(vs)) != 1:
        return f"determinant {_det(vs)} is not +-1"
    for i, v in enumerate(vs):
        if _dot(gamma, v).sign() <= 0:
            return f"vector {i} has nonpositive gamma-value"
    return None


def verify_chain(gamma, chain) -> AuditResult:
    """Replay ``chain`` (anything with start/runs/result) from its start."""
    g = _coords(gamma)
    vs = [list(map(int, v)) for v in chain.start]
    problem = _nice_problem(g, vs)
    if problem:
        return AuditResult(False, f"start: {problem}")
    n = len(vs)
    steps = 0
    collections = 1
    for k, run in enumerate(chain.runs):
        step, r = run.step, int(run.repeat)
        name = type(step).__name__
        if r < 1:
            return AuditResult(False, f"run {k}: repeat count {r}", steps, collections)
        if name == "Subtract":
            i, j = step.i, step.j
            if not (0 <= i < n and 0 <= j < n) or i == j:
                return AuditResult(False, f"run {k} (step {steps}): bad indices {i}, {j}", steps, collections)
            new = [a - r * b for a, b in zip(vs[i], vs[j])]
            if _dot(g, new).sign() <= 0:
                # locate the first illegal elementary step for the diagnostic
                vi, vj = _dot(g, vs[i]), _dot(g, vs[j])
                first = 0
                while (vi - vj * (first + 1)).sign() > 0:
                    first += 1
                return AuditResult(False, f"step {steps + first} (Subtract {i} {j}) is illegal: "
                                          f"v_{i} . gamma is not larger than v_{j} . gamma", steps + first, collections)
            vs[i] = new
        elif name == "Permute":
            perm = list(step.perm)
            if sorted(perm) != list(range(n)):
                return AuditResult(False, f"run {k} (step {steps}): not a permutation", steps, collections)
            for _ in range(r):
                vs = [vs[p] for p in perm]
        else:
            return AuditResult(False, f"run {k}: unknown step {step!r}", steps, collections)
        steps += r
        collections += r
        problem = _nice_problem(g, vs)
        if problem:
            return AuditResult(False, f"after step {steps - 1}: {problem}", steps, collections)
    if [tuple(v) for v in vs] != [tuple(map(int, v)) for v in chain.result]:
        return AuditResult(False, "replay does not reproduce the stated result", steps, collections)
    return AuditResult(True, "ok", steps, collections)


def verify_membership(gamma, vectors: Sequence[Sequence[int]], cert) -> AuditResult:
    """Coefficients are nonnegative integers and sum_i c_i v_i equals the target."""
    coeffs = list(cert.coefficients)
    target = list(cert.target)
    if len(coeffs) != len(vectors):
        return AuditResult(False, "coefficient count differs from the collection size")
    for i, c in enumerate(coeffs):
        if not isinstance(c, int) or isinstance(c, bool) or c < 0:
            return AuditResult(False, f"coefficient {i} = {c!r} is not a nonnegative integer")
    total = [0] * len(target)
    for c, v in zip(coeffs, vectors):
        if len(v) != len(target):
            return AuditResult(False, "dimension mismatch")
        for k, x in enumerate(v):
            total[k] += c * int(x)
    if total != target:
        return AuditResult(False, f"combination gives {tuple(total)}, not {tuple(target)}")
    problem = _nice_problem(_coords(gamma), [list(v) for v in vectors])
    if problem:
        return AuditResult(False, f"collection is not nice: {problem}")
    return AuditResult(True)
