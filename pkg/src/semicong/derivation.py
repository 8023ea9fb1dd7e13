"""Explicit derivations of x^n ~ x^n + y^n from the single premise x ~ x + y.

Every elementary step translates an already established relation (a, b)
into (c*a + e, c*b + e) or (a*c + e, b*c + e), possibly with the sides
swapped.  Consecutive steps must chain: the right side of one step equals
the left side of the next as elements of the semiring, which is where the
bookkeeping identities x(x^k + y^k) + y^(k+1) = x^(k+1) + y^k(x + y) are
absorbed.  Each induction level k -> k+1 takes exactly three steps.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Any, Callable

from .errors import InvalidInputError
from .semiring import FiniteSemiring


@dataclass(frozen=True)
class Arithmetic:
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    eq: Callable[[Any, Any], bool]
    zero: Any
    show: Callable[[Any], str] = str

    def power(self, x, k: int):
        if k < 1:
            raise InvalidInputError("powers start at 1")
        out = x
        for _ in range(k - 1):
            out = self.mul(out, x)
        return out


def finite_arithmetic(s: FiniteSemiring) -> Arithmetic:
    return Arithmetic(lambda a, b: s.add[a][b], lambda a, b: s.mul[a][b], operator.eq, s.zero, s.label)


def native_arithmetic(zero) -> Arithmetic:
    """For element types with + and * (order elements, integers)."""
    return Arithmetic(operator.add, operator.mul, operator.eq, zero)


@dataclass(frozen=True)
class Step:
    lhs: Any
    rhs: Any
    uses: int          # exponent k of the relation x^k ~ x^k + y^k used (1 is the premise)
    multiplier: Any
    side: str          # "left": multiplier * relation, "right": relation * multiplier
    addend: Any
    reversed: bool


@dataclass(frozen=True)
class Level:
    power: int         # this level concludes x^power ~ x^power + y^power
    steps: tuple


@dataclass(frozen=True)
class Transcript:
    x: Any
    y: Any
    n: int
    premise: tuple
    levels: tuple

    @property
    def elementary_steps(self) -> int:
        return sum(len(lv.steps) for lv in self.levels)

    def conclusion(self):
        if not self.levels:
            return self.premise
        return self.levels[-1].steps[0].lhs, self.levels[-1].steps[-1].rhs

    def to_dict(self, show: Callable[[Any], str] = str) -> dict:
        return {
            "x": show(self.x), "y": show(self.y), "n": self.n,
            "premise": [show(self.premise[0]), show(self.premise[1])],
            "elementary_steps": self.elementary_steps,
            "levels": [{"power": lv.power, "steps": [
                {"lhs": show(s.lhs), "rhs": show(s.rhs), "uses_power": s.uses,
                 "multiplier": show(s.multiplier), "side": s.side, "addend": show(s.addend),
                 "reversed": s.reversed} for s in lv.steps]} for lv in self.levels],
        }


def _translate(ar: Arithmetic, pair, c, side, e, rev):
    a, b = (pair[1], pair[0]) if rev else pair
    if side == "left":
        a, b = ar.mul(c, a), ar.mul(c, b)
    else:
        a, b = ar.mul(a, c), ar.mul(b, c)
    return ar.add(e, a), ar.add(e, b)


def power_relation_chain(ar: Arithmetic, x, y, n: int) -> Transcript:
    """The three-steps-per-level induction, for n >= 1."""
    if n < 1:
        raise InvalidInputError("n must be at least 1")
    premise = (x, ar.add(x, y))
    facts = {1: premise}
    levels = []
    for k in range(1, n):
        xk, yk = ar.power(x, k), ar.power(y, k)
        moves = [
            (k, x, "left", ar.zero, False),                       # x^(k+1) ~ x(x^k + y^k)
            (1, yk, "right", ar.mul(x, xk), False),               # ... ~ x^(k+1) + (x + y)y^k
            (k, x, "left", ar.power(y, k + 1), True),             # ... ~ x^(k+1) + y^(k+1)
        ]
        steps = []
        for uses, c, side, e, rev in moves:
            lhs, rhs = _translate(ar, facts[uses], c, side, e, rev)
            steps.append(Step(lhs, rhs, uses, c, side, e, rev))
        facts[k + 1] = (steps[0].lhs, steps[-1].rhs)
        levels.append(Level(k + 1, tuple(steps)))
    return Transcript(x, y, n, premise, tuple(levels))


def verify_transcript(ar: Arithmetic, t: Transcript) -> tuple[bool, str]:
    """Replay a transcript from its premise; (ok, reason)."""
    x, y = t.x, t.y
    if not (ar.eq(t.premise[0], x) and ar.eq(t.premise[1], ar.add(x, y))):
        return False, "premise is not x ~ x + y"
    if len(t.levels) != t.n - 1:
        return False, f"expected {t.n - 1} levels, found {len(t.levels)}"
    established = {1: t.premise}
    for lv in t.levels:
        k = lv.power
        if k != len(established) + 1:
            return False, f"level for power {k} is out of order"
        if len(lv.steps) != 3:
            return False, f"level {k} has {len(lv.steps)} steps instead of 3"
        for i, s in enumerate(lv.steps):
            if s.uses not in established:
                return False, f"level {k} step {i} uses an unestablished relation"
            if s.side not in ("left", "right"):
                return False, f"level {k} step {i} has an unknown side"
            a, b = established[s.uses]
            if s.reversed:
                a, b = b, a
            mul = (lambda u: ar.mul(s.multiplier, u)) if s.side == "left" else (lambda u: ar.mul(u, s.multiplier))
            if not (ar.eq(s.lhs, ar.add(s.addend, mul(a))) and ar.eq(s.rhs, ar.add(s.addend, mul(b)))):
                return False, f"level {k} step {i} is not the stated translation"
            if i and not ar.eq(lv.steps[i - 1].rhs, s.lhs):
                return False, f"level {k} step {i} does not continue the previous step"
        xk = x
        yk = y
        for _ in range(k - 1):
            xk, yk = ar.mul(xk, x), ar.mul(yk, y)
        if not (ar.eq(lv.steps[0].lhs, xk) and ar.eq(lv.steps[-1].rhs, ar.add(xk, yk))):
            return False, f"level {k} does not conclude x^{k} ~ x^{k} + y^{k}"
        established[k] = (xk, ar.add(xk, yk))
    if t.elementary_steps != 3 * (t.n - 1):
        return False, "step count differs from 3(n-1)"
    return True, "ok"
