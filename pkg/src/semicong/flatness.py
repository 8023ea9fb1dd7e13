"""Unimodular "nice" collections and certified refinement chains.

Fix gamma = (g_1, ..., g_n) with positive, Q-linearly independent entries in
a real number field.  A collection v_1..v_n of integer vectors is nice when
its matrix is unimodular and every v_i . gamma is positive.  An elementary
refinement either permutes the collection or replaces v_i by v_i - v_j when
v_i . gamma > v_j . gamma.

``cover`` drives a nice collection through elementary refinements until
its N-span holds every given target of the cone {t : t . gamma > 0}, and
returns the chain plus one nonnegative certificate per target.

Indices are 0-based.  A subtraction of m copies is recorded as m elementary
steps.  Certificates are carried along every step: when v_i becomes
v_i - v_j, the old v_i equals new v_i + v_j, so the coefficient vector
updates by c_j += c_i, which keeps nonnegative vectors nonnegative.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import intmat
from .algebraic import FieldElement, NumberField, floor_ratio
from .errors import ConsistencyError, DependenceError, InvalidInputError, InvalidStepError, ResourceError

# Guard against runaway loops; the arguments guarantee termination well before.
MAX_RUNS = 1_000_000


# ---------------------------------------------------------------------------
# gamma
# ---------------------------------------------------------------------------

class GammaForm:
    """The linear form v -> v . gamma, evaluated exactly."""

    def __init__(self, coords: Sequence[FieldElement], check_independence: bool = True):
        coords = tuple(coords)
        if len(coords) < 2:
            raise InvalidInputError("gamma needs at least two coordinates")
        field = coords[0].field
        if any(c.field != field for c in coords):
            raise InvalidInputError("gamma coordinates must share one field")
        for i, c in enumerate(coords):
            if c.sign() <= 0:
                raise InvalidInputError(f"gamma coordinate {i} ({c}) is not positive")
        # Q-independence of the g_i is independence of their coordinate rows
        if check_independence and _rank([list(c.coords) for c in coords]) < len(coords):
            raise DependenceError("gamma coordinates are linearly dependent over Q")
        self.field: NumberField = field
        self.coords = coords
        self.n = len(coords)

    @classmethod
    def parse(cls, field: NumberField, text: str, check_independence: bool = True) -> "GammaForm":
        """Semicolon-separated field elements, e.g. ``"1;w"`` or ``"1;w;w^2"``."""
        return cls([field.parse(part) for part in text.split(";")], check_independence)

    def value(self, v: Sequence[int]) -> FieldElement:
        if len(v) != self.n:
            raise InvalidInputError(f"vector {tuple(v)} has length {len(v)}, gamma has {self.n}")
        acc = [Fraction(0)] * self.field.degree
        for x, g in zip(v, self.coords):
            if x:
                for k, c in enumerate(g.coords):
                    acc[k] += x * c
        return FieldElement(self.field, tuple(acc))

    def sign(self, v: Sequence[int]) -> int:
        s = self.value(v).sign()
        if s == 0 and any(v):
            raise DependenceError(f"nonzero vector {tuple(v)} has gamma-value 0; gamma is dependent over Q")
        return s

    def strict_sign(self, x: FieldElement, witness: Sequence[int] | None = None) -> int:
        s = x.sign()
        if s == 0 and (witness is None or any(witness)):
            raise DependenceError(f"a nonzero combination {tuple(witness) if witness else ''} has gamma-value 0")
        return s

    def to_list(self) -> list[str]:
        return [str(c) for c in self.coords]


def _rank(rows: list[list[Fraction]]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    for col in range(len(m[0]) if m else 0):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def gamma_value(g: GammaForm, v: Sequence[int]) -> FieldElement:
    return g.value(v)


def gamma_sign(g: GammaForm, v: Sequence[int]) -> int:
    return g.sign(v)


# ---------------------------------------------------------------------------
# steps, chains, certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subtract:
    i: int
    j: int

    def to_dict(self) -> dict:
        return {"op": "subtract", "i": self.i, "j": self.j}


@dataclass(frozen=True)
class Permute:
    perm: tuple  # new[k] = old[perm[k]]

    def to_dict(self) -> dict:
        return {"op": "permute", "perm": list(self.perm)}


def step_from_dict(d: dict):
    op = d.get("op")
    if op == "subtract":
        return Subtract(int(d["i"]), int(d["j"]))
    if op == "permute":
        return Permute(tuple(int(x) for x in d["perm"]))
    raise InvalidInputError(f"unknown step {d!r}")


@dataclass(frozen=True)
class Run:
    """``repeat`` consecutive copies of one elementary step."""
    step: object
    repeat: int = 1

    def to_dict(self) -> dict:
        d = self.step.to_dict()
        if self.repeat != 1:
            d["repeat"] = self.repeat
        return d


@dataclass(frozen=True)
class RefinementChain:
    """Start collection, elementary steps stored as runs, and the resulting collection."""
    start: tuple
    runs: tuple
    result: tuple

    def __len__(self):
        return sum(r.repeat for r in self.runs)

    def steps(self) -> Iterator:
        """The elementary steps one by one (may be very many)."""
        for r in self.runs:
            for _ in range(r.repeat):
                yield r.step

    def to_dict(self) -> dict:
        return {"start": [list(v) for v in self.start], "steps": [r.to_dict() for r in self.runs],
                "result": [list(v) for v in self.result], "length": len(self)}

    @classmethod
    def from_dict(cls, d: dict) -> "RefinementChain":
        runs = tuple(Run(step_from_dict(s), int(s.get("repeat", 1))) for s in d["steps"])
        if any(r.repeat < 1 for r in runs):
            raise InvalidInputError("step repeat counts must be positive")
        return cls(tuple(tuple(int(x) for x in v) for v in d["start"]), runs,
                   tuple(tuple(int(x) for x in v) for v in d["result"]))


@dataclass(frozen=True)
class MembershipCertificate:
    target: tuple
    coefficients: tuple

    def to_dict(self) -> dict:
        return {"target": list(self.target), "coefficients": list(self.coefficients)}


@dataclass(frozen=True)
class NiceVerdict:
    ok: bool
    reason: str

    def __bool__(self):
        return self.ok


def is_nice(g: GammaForm, vectors: Sequence[Sequence[int]]) -> NiceVerdict:
    n = g.n
    if len(vectors) != n or any(len(v) != n for v in vectors):
        return NiceVerdict(False, f"need {n} vectors of length {n}")
    d = intmat.det(intmat.transpose(vectors))
    if abs(d) != 1:
        return NiceVerdict(False, f"determinant is {d}, not +-1")
    for i, v in enumerate(vectors):
        if g.sign(v) <= 0:
            return NiceVerdict(False, f"vector {i} = {tuple(v)} has nonpositive gamma-value")
    return NiceVerdict(True, "nice")


def apply_step(g: GammaForm, vectors: Sequence[Sequence[int]], step) -> tuple:
    vs = [tuple(v) for v in vectors]
    n = len(vs)
    if isinstance(step, Subtract):
        i, j = step.i, step.j
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise InvalidStepError(f"bad indices in {step}")
        diff = tuple(a - b for a, b in zip(vs[i], vs[j]))
        if g.sign(diff) <= 0:
            raise InvalidStepError(f"{step}: v_{i} . gamma is not larger than v_{j} . gamma")
        vs[i] = diff
        return tuple(vs)
    if isinstance(step, Permute):
        if sorted(step.perm) != list(range(n)):
            raise InvalidStepError(f"{step} is not a permutation of {n} indices")
        return tuple(vs[k] for k in step.perm)
    raise InvalidStepError(f"unknown step {step!r}")


# ---------------------------------------------------------------------------
# the working state
# ---------------------------------------------------------------------------

class _Builder:
    """A nice collection being refined, with cached gamma-values and tracked coefficient vectors."""

    def __init__(self, g: GammaForm, vectors: Sequence[Sequence[int]]):
        verdict = is_nice(g, vectors)
        if not verdict:
            raise InvalidInputError(f"starting collection is not nice: {verdict.reason}")
        self.g = g
        self.start = tuple(tuple(int(x) for x in v) for v in vectors)
        self.v = [list(v) for v in self.start]
        self.val = [g.value(v) for v in self.v]
        self.runs: list[Run] = []
        self.tracked: list[list[int]] = []

    @property
    def n(self) -> int:
        return len(self.v)

    def greater(self, i: int, j: int) -> bool:
        return self.g.strict_sign(self.val[i] - self.val[j]) > 0

    def less_than(self, i: int, bound: FieldElement) -> bool:
        return (self.val[i] - bound).sign() < 0

    def subtract(self, i: int, j: int, times: int = 1) -> None:
        """v_i <- v_i - times * v_j as ``times`` elementary steps, each checked exactly."""
        if times < 0:
            raise ConsistencyError("negative subtraction count")
        if times == 0:
            return
        if len(self.runs) >= MAX_RUNS:
            raise ResourceError(f"refinement chain would exceed {MAX_RUNS} runs")
        # the values fall monotonically along the run, so the run is legal
        # exactly when its final value is positive
        final = self.val[i] - self.val[j] * times
        if self.g.strict_sign(final) <= 0:
            raise InvalidStepError(f"subtracting {times} x v_{j} from v_{i} leaves the cone")
        vi, vj = self.v[i], self.v[j]
        self.v[i] = [a - times * b for a, b in zip(vi, vj)]
        self.val[i] = final
        step = Subtract(i, j)
        if self.runs and self.runs[-1].step == step:
            self.runs[-1] = Run(step, self.runs[-1].repeat + times)
        else:
            self.runs.append(Run(step, times))
        for c in self.tracked:
            c[j] += times * c[i]

    def track(self, coeffs: Sequence[int]) -> int:
        self.tracked.append(list(coeffs))
        return len(self.tracked) - 1

    def solve(self, target: Sequence[int]) -> list[int]:
        return intmat.solve_integer([tuple(v) for v in self.v], target)

    def collection(self) -> tuple:
        return tuple(tuple(v) for v in self.v)

    def chain(self) -> RefinementChain:
        return RefinementChain(self.start, tuple(self.runs), self.collection())


def _as_field(g: GammaForm, delta) -> FieldElement:
    if isinstance(delta, FieldElement):
        return delta
    if isinstance(delta, float):
        delta = Fraction(str(delta))
    if isinstance(delta, str):
        try:
            delta = Fraction(delta)
        except ValueError:
            return g.field.parse(delta)
    return g.field.from_rational(Fraction(delta))


# ---------------------------------------------------------------------------
# shrinking
# ---------------------------------------------------------------------------

def _shrink_pair(b: _Builder, i1: int, i2: int, delta: FieldElement) -> None:
    """Alternate floor subtractions on v_i1, v_i2 until both gamma-values are below delta."""
    if b.greater(i1, i2):
        i1, i2 = i2, i1
    # invariant: 0 < val[i1] < val[i2]
    while not (b.less_than(i1, delta) and b.less_than(i2, delta)):
        top = b.val[i2]
        m = floor_ratio(b.val[i2], b.val[i1])
        b.subtract(i2, i1, m)
        if b.less_than(i1, delta) and b.less_than(i2, delta):
            break
        m2 = floor_ratio(b.val[i1], b.val[i2])
        b.subtract(i1, i2, m2)
        if not b.greater(i2, i1):
            raise ConsistencyError("shrink round broke the ordering of the pair")
        if not (b.val[i2] * 2 - top).sign() < 0:
            raise ConsistencyError("shrink round did not halve the larger gamma-value")


def _shrink_subset(b: _Builder, J: Sequence[int], delta: FieldElement) -> None:
    J = sorted(set(J))
    if len(J) < 2:
        raise InvalidInputError("shrinking needs at least two indices")
    if any(not 0 <= j < b.n for j in J):
        raise InvalidInputError(f"index set {J} out of range")
    j1, j2 = J[0], J[1]
    _shrink_pair(b, j1, j2, delta)
    ref = j1 if b.greater(j2, j1) else j2
    for j in J[2:]:
        if not b.less_than(j, delta):
            b.subtract(j, ref, floor_ratio(b.val[j], b.val[ref]))


@dataclass(frozen=True)
class ShrinkPairResult:
    runs: tuple          # steps on positions 0 (x1) and 1 (x2)
    pair: tuple
    coefficients: tuple  # coefficients[k]: original x_k in terms of the final pair, nonnegative

    def __len__(self):
        return sum(r.repeat for r in self.runs)


def shrink_pair(g: GammaForm, x1: Sequence[int], x2: Sequence[int], delta) -> ShrinkPairResult:
    """Pair version: the steps refer to positions 0 (x1) and 1 (x2)."""
    if g.n != len(x1) or len(x1) != len(x2):
        raise InvalidInputError("vectors must match gamma's dimension")
    d = _as_field(g, delta)
    if d.sign() <= 0:
        raise InvalidInputError("delta must be positive")
    s1 = g.sign(x1)
    diff = tuple(b - a for a, b in zip(x1, x2))
    if s1 <= 0 or g.sign(diff) <= 0:
        raise InvalidInputError("need 0 < x1 . gamma < x2 . gamma")
    b = _PairBuilder(g, x1, x2)
    b.track([1, 0])
    b.track([0, 1])
    _shrink_pair(b, 0, 1, d)
    return ShrinkPairResult(tuple(b.runs), b.collection(), tuple(tuple(c) for c in b.tracked))


class _PairBuilder(_Builder):
    """Two vectors in Z^n; niceness is not required of a pair."""

    def __init__(self, g: GammaForm, x1, x2):
        self.g = g
        self.start = (tuple(x1), tuple(x2))
        self.v = [list(x1), list(x2)]
        self.val = [g.value(x1), g.value(x2)]
        self.runs = []
        self.tracked = []


@dataclass(frozen=True)
class ShrinkSubsetResult:
    chain: RefinementChain
    certificates: dict  # index i in J -> certificate of the original w_i against the result


def shrink_subset(g: GammaForm, vectors: Sequence[Sequence[int]], J: Iterable[int], delta) -> ShrinkSubsetResult:
    J = sorted(set(J))
    if len(J) < 2:
        raise InvalidInputError("shrinking needs |J| >= 2")
    d = _as_field(g, delta)
    if d.sign() <= 0:
        raise InvalidInputError("delta must be positive")
    b = _Builder(g, vectors)
    for i in range(b.n):
        b.track([int(k == i) for k in range(b.n)])
    _shrink_subset(b, J, d)
    certs = {i: MembershipCertificate(b.start[i], tuple(b.tracked[i])) for i in J}
    return ShrinkSubsetResult(b.chain(), certs)


# ---------------------------------------------------------------------------
# absorbing one target
# ---------------------------------------------------------------------------

def _negatives(c: Sequence[int]) -> list[int]:
    return [k for k, x in enumerate(c) if x < 0]


def _absorb_line(b: _Builder, slot: int) -> None:
    """n = 2: unit continued-fraction steps until the tracked target has a nonnegative certificate."""
    c = b.tracked[slot]
    while _negatives(c):
        if b.greater(0, 1):
            b.subtract(0, 1)
        else:
            b.subtract(1, 0)
        c = b.tracked[slot]


def _absorb_one_negative(b: _Builder, slot: int, e_val: FieldElement) -> None:
    """n >= 3, exactly one negative coefficient."""
    n = b.n
    mu = b.tracked[slot]
    (p,) = _negatives(mu)
    s = -mu[p]
    gp = b.val[p]
    small = e_val if (e_val - gp).sign() < 0 else gp
    delta = small / (2 * s * n)
    J = [j for j in range(n) if j != p]
    _shrink_subset(b, J, delta)
    mu = list(b.tracked[slot])
    if any(mu[j] < 0 for j in J) or mu[p] != -s:
        raise ConsistencyError("shrinking changed the sign pattern of the target")
    gp = b.val[p]
    # pivot: the index carrying the largest share of s * gp + e . gamma
    weight = {j: b.val[j] * mu[j] for j in J}
    q = J[0]
    for j in J[1:]:
        if (weight[j] - weight[q]).sign() > 0:
            q = j
    lam = {j: mu[j] // s for j in J}
    lam[q] = mu[q] // s - 1
    if lam[q] < 0:
        raise ConsistencyError("pivot coefficient too small for the one-negative case")
    eta = sum((b.val[j] * lam[j] for j in J if j != q), b.g.field.zero)
    for j in sorted((j for j in J if j != q), key=lambda j: float(b.val[j]), reverse=True):
        excess = eta - gp
        if excess.sign() < 0:
            break
        r = min(lam[j], floor_ratio(excess, b.val[j]) + 1)
        lam[j] -= r
        eta = eta - b.val[j] * r
    if (eta - gp).sign() >= 0:
        raise ConsistencyError("could not bring eta below gamma_p")
    lam[q] = floor_ratio(gp - eta, b.val[q])
    if not 0 <= lam[q] <= mu[q] // s - 1:
        raise ConsistencyError(f"pivot multiplier {lam[q]} out of range")
    for j in J:
        b.subtract(p, j, lam[j])
    lowered = [j for j in J if b.greater(j, p)]
    if q not in lowered:
        raise ConsistencyError("pivot vector not above the new v_p")
    for j in lowered:
        b.subtract(j, p)
    # closed form of the certificate, checked against the tracked one
    expected = [0] * n
    for j in J:
        expected[j] = mu[j] - s * lam[j]
    expected[p] = sum(expected[j] for j in lowered) - s
    if b.tracked[slot] != expected or _negatives(expected):
        raise ConsistencyError("one-negative certificate disagrees with its closed form")


def _absorb_many_negatives(b: _Builder, slot: int, e_val: FieldElement) -> None:
    """Two or more negative coefficients: turn one of them nonnegative."""
    n = b.n
    mu = b.tracked[slot]
    T = _negatives(mu)
    P = [k for k in range(n) if mu[k] >= 0]
    M = sum(mu[k] for k in P)
    if not P or M <= 0:
        raise ConsistencyError("a target with positive gamma-value needs a positive coefficient")
    floor_val = min((b.val[k] for k in P), key=float)
    for k in P:  # exact minimum
        if (b.val[k] - floor_val).sign() < 0:
            floor_val = b.val[k]
    small = e_val if (e_val - floor_val).sign() < 0 else floor_val
    delta = small / (2 * n * M)
    _shrink_subset(b, T, delta)
    mu = list(b.tracked[slot])
    if any(mu[k] > 0 for k in T):
        raise ConsistencyError("shrinking made a negative coefficient positive")
    negs = _negatives(mu)
    if len(negs) < len(T):
        return  # some coefficient became 0: progress already
    t = negs[0]
    need = 1 - mu[t]
    for k in sorted((k for k in P if mu[k] > 0), key=lambda k: float(b.val[k]), reverse=True):
        top = floor_ratio(b.val[k], b.val[t])
        lam = min(top, -(-need // mu[k]))
        b.subtract(k, t, lam)
        need -= lam * mu[k]
        if need <= 0:
            break
    if need > 0:
        raise ConsistencyError("multiplier budget could not make the pivot coefficient positive")


def _absorb(b: _Builder, slot: int, target: Sequence[int]) -> None:
    e_val = b.g.value(target)
    if b.g.strict_sign(e_val, target) <= 0:
        raise InvalidInputError(f"target {tuple(target)} is not in the open cone")
    q = len(_negatives(b.tracked[slot]))
    while q:
        if b.n == 2:
            _absorb_line(b, slot)
        elif q == 1:
            _absorb_one_negative(b, slot, e_val)
        else:
            _absorb_many_negatives(b, slot, e_val)
        q_new = len(_negatives(b.tracked[slot]))
        if q_new >= q:
            raise ConsistencyError("number of negative coefficients did not decrease")
        q = q_new


def absorb(g: GammaForm, vectors: Sequence[Sequence[int]], target: Sequence[int]):
    """Refine ``vectors`` until ``target`` (nonzero, positive gamma-value) is in the N-span."""
    target = tuple(int(x) for x in target)
    if not any(target):
        raise InvalidInputError("absorb needs a nonzero target")
    b = _Builder(g, vectors)
    slot = b.track(b.solve(target))
    _absorb(b, slot, target)
    cert = MembershipCertificate(target, tuple(b.tracked[slot]))
    _check_certificate(b, cert)
    return b.chain(), cert


def _check_certificate(b: _Builder, cert: MembershipCertificate) -> None:
    if any(c < 0 for c in cert.coefficients) or list(cert.coefficients) != b.solve(cert.target):
        raise ConsistencyError(f"certificate for {cert.target} does not reproduce it")


@dataclass(frozen=True)
class CoverResult:
    chain: RefinementChain
    certificates: tuple


def cover(g: GammaForm, vectors: Sequence[Sequence[int]] | None, targets: Iterable[Sequence[int]]) -> CoverResult:
    """Absorb every target in turn; certificates refer to the final collection."""
    if vectors is None:
        vectors = [[int(i == k) for k in range(g.n)] for i in range(g.n)]
    b = _Builder(g, vectors)
    targets = [tuple(int(x) for x in t) for t in targets]
    slots = []
    for t in targets:
        if len(t) != g.n:
            raise InvalidInputError(f"target {t} has the wrong dimension")
        if not any(t):
            slots.append(b.track([0] * g.n))
            continue
        if g.sign(t) <= 0:
            raise InvalidInputError(f"target {t} lies outside the cone")
        slot = b.track(b.solve(t))
        _absorb(b, slot, t)
        slots.append(slot)
    certs = tuple(MembershipCertificate(t, tuple(b.tracked[s])) for t, s in zip(targets, slots))
    for c in certs:
        _check_certificate(b, c)
    return CoverResult(b.chain(), certs)


def standard_basis(n: int) -> tuple:
    return tuple(tuple(int(i == k) for k in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# span containment without refinement (experimental, n = 3)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchOutcome:
    lower: tuple      # V
    upper: tuple      # W, with Sp_N(V) contained in Sp_N(W)
    verdict: str      # "refines", "no-refinement", "budget"
    explored: int

    def to_dict(self) -> dict:
        return {"V": [list(v) for v in self.lower], "W": [list(w) for w in self.upper],
                "verdict": self.verdict, "explored": self.explored}


def _in_span(basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    try:
        c = intmat.solve_integer([tuple(x) for x in basis], v)
    except InvalidInputError:
        return False
    return all(x >= 0 for x in c)


def refinement_reachable(g: GammaForm, lower: Sequence[Sequence[int]], upper: Sequence[Sequence[int]],
                         budget: int = 20_000) -> tuple[str, int]:
    """Breadth-first search for a refinement chain from ``lower`` to ``upper`` (up to order).

    Every collection on a chain ending at ``upper`` has its N-span inside
    Sp_N(upper), and each step lowers one gamma-value, so the states are
    finitely many; the search is exhaustive when it finishes within budget.
    """
    goal = tuple(sorted(tuple(v) for v in upper))
    start = tuple(sorted(tuple(v) for v in lower))
    seen = {start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if state == goal:
            return "refines", len(seen)
        n = len(state)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                diff = tuple(a - c for a, c in zip(state[i], state[j]))
                if g.sign(diff) <= 0 or not _in_span(upper, diff):
                    continue
                nxt = tuple(sorted(state[:i] + (diff,) + state[i + 1:]))
                if nxt not in seen:
                    if len(seen) >= budget:
                        return "budget", len(seen)
                    seen.add(nxt)
                    queue.append(nxt)
    return "no-refinement", len(seen)


def _random_nonneg_unimodular(rng: random.Random, n: int, entry_max: int) -> list[list[int]] | None:
    for _ in range(200):
        c = [[rng.randint(0, entry_max) for _ in range(n)] for _ in range(n)]
        if abs(intmat.det(c)) == 1:
            return c
    return None


def search_span_without_refinement(g: GammaForm, rng: random.Random, samples: int = 50, entry_max: int = 3,
                                   budget: int = 20_000) -> list[SearchOutcome]:
    """Sample W nice and nonnegative unimodular C, set V = W C, and test whether W refines V.

    Sp_N(V) is inside Sp_N(W) by construction; a "no-refinement" verdict
    would be a pair where span containment holds without refinement.
    """
    if g.n != 3:
        raise InvalidInputError("the span-containment search is set up for n = 3")
    out = []
    for _ in range(samples):
        w_targets = [tuple(rng.randint(-3, 3) for _ in range(3)) for _ in range(2)]
        w_targets = [t for t in w_targets if any(t) and g.sign(t) > 0]
        upper = cover(g, None, w_targets).chain.result
        c = _random_nonneg_unimodular(rng, 3, entry_max)
        if c is None:
            continue
        wt = intmat.transpose(upper)                     # columns are the w_i
        lower = tuple(tuple(col) for col in intmat.transpose(intmat.matmul(wt, c)))
        if not is_nice(g, lower):
            continue
        verdict, explored = refinement_reachable(g, lower, upper, budget)
        out.append(SearchOutcome(lower, upper, verdict, explored))
    return out


def homothetic_points(g: GammaForm, vectors: Sequence[Sequence[int]]) -> list[tuple[float, ...]]:
    """x / (x . gamma) in floating point; for plots only."""
    pts = []
    for v in vectors:
        val = float(g.value(v))
        pts.append(tuple(x / val for x in v))
    return pts


def convergents(num: Sequence[int], count: int) -> list[tuple[int, int]]:
    """(p, q) convergents of a continued fraction [a0; a1, ...] (a helper for tests)."""
    out = []
    p0, q0, p1, q1 = 1, 0, num[0], 1
    out.append((p1, q1))
    for a in num[1:count]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out

