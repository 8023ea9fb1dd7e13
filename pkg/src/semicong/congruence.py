"""Congruences on finite semirings, plus the two infinite examples we can probe by bounded closure.

``congruence_closure`` is a union-find worklist: whenever the classes of a
and b merge, the pairs (a+r, b+r), (a*r, b*r) and (r*a, r*b) are queued for
every r, in index order.  Everything downstream (lattice enumeration,
principality, quotients) is built on it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .errors import ConsistencyError, InvalidInputError, ResourceError
from .semiring import BoolPolynomial, FiniteSemiring, is_ring
from .universe import BoolPolyUniverse, NatUniverse, bounded_closure


@dataclass(frozen=True)
class CongruencePartition:
    """Class ids in first-appearance order, so equal partitions compare equal.

    ``verified`` and ``complete`` are bookkeeping flags and take no part in
    equality: ``verified`` means congruence compatibility was established by
    construction or by check; ``complete`` is False for a bounded-closure run
    stopped before its fixpoint.
    """

    labels: tuple
    verified: bool = field(default=False, compare=False)
    complete: bool = field(default=True, compare=False)
    steps: int = field(default=0, compare=False)

    @classmethod
    def from_labels(cls, raw: Sequence, verified: bool = False, complete: bool = True,
                    steps: int = 0) -> "CongruencePartition":
        ids: dict = {}
        return cls(tuple(ids.setdefault(x, len(ids)) for x in raw), verified, complete, steps)

    @classmethod
    def from_classes(cls, n: int, classes: Iterable[Iterable[int]]) -> "CongruencePartition":
        raw = list(range(n))
        seen = set()
        for c in classes:
            c = list(c)
            for a in c:
                if not 0 <= a < n or a in seen:
                    raise InvalidInputError(f"element {a} is out of range or in two classes")
                seen.add(a)
                raw[a] = n + c[0]
        return cls.from_labels(raw)

    @classmethod
    def diagonal(cls, n: int) -> "CongruencePartition":
        return cls(tuple(range(n)), True)

    @classmethod
    def full(cls, n: int) -> "CongruencePartition":
        return cls((0,) * n, True)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def num_classes(self) -> int:
        return max(self.labels, default=-1) + 1

    def classes(self) -> list[tuple[int, ...]]:
        out: list[list[int]] = [[] for _ in range(self.num_classes)]
        for a, c in enumerate(self.labels):
            out[c].append(a)
        return [tuple(c) for c in out]

    def related(self, a: int, b: int) -> bool:
        return self.labels[a] == self.labels[b]

    def refines(self, other: "CongruencePartition") -> bool:
        """Every class of self lies inside a class of other."""
        image: dict = {}
        return all(image.setdefault(c, o) == o for c, o in zip(self.labels, other.labels))

    def join(self, other: "CongruencePartition") -> "CongruencePartition":
        """Finest partition coarser than both (the join of two congruences is a congruence)."""
        parent = list(range(self.size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for labels in (self.labels, other.labels):
            first: dict = {}
            for a, c in enumerate(labels):
                r = first.setdefault(c, a)
                parent[find(a)] = find(r)
        return CongruencePartition.from_labels([find(a) for a in range(self.size)],
                                               self.verified and other.verified)

    def generating_pairs(self) -> list[tuple[int, int]]:
        """(first element of class, x) for every other x: a generator set of the equivalence."""
        first: dict = {}
        out = []
        for a, c in enumerate(self.labels):
            if c in first:
                out.append((first[c], a))
            else:
                first[c] = a
        return out

    def describe(self, s: FiniteSemiring | None = None) -> str:
        name = s.label if s is not None else str
        return " ".join("{" + ",".join(name(a) for a in c) + "}" for c in self.classes())


# ---------------------------------------------------------------------------
# closure and checking
# ---------------------------------------------------------------------------

def congruence_closure(s: FiniteSemiring, gens: Iterable[Sequence[int]]) -> CongruencePartition:
    """Least congruence containing ``gens``; empty ``gens`` gives the diagonal."""
    n = s.size
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = deque()
    for a, b in gens:
        if not (0 <= a < n and 0 <= b < n):
            raise InvalidInputError(f"generator ({a},{b}) is outside the carrier")
        queue.append((a, b))
    add, mul = s.add, s.mul
    rng = range(n)
    while queue:
        a, b = queue.popleft()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if ra < rb:
            parent[rb] = ra
        else:
            parent[ra] = rb
        row_a, row_b = add[a], add[b]
        queue.extend((row_a[r], row_b[r]) for r in rng if row_a[r] != row_b[r])
        row_a, row_b = mul[a], mul[b]
        queue.extend((row_a[r], row_b[r]) for r in rng if row_a[r] != row_b[r])
        queue.extend((mul[r][a], mul[r][b]) for r in rng if mul[r][a] != mul[r][b])
    return CongruencePartition.from_labels([find(a) for a in rng], verified=True)


@dataclass(frozen=True)
class CongruenceViolation:
    pair: tuple
    multiplier: int
    operation: str

    def __str__(self):
        a, b = self.pair
        r = self.multiplier
        return f"{a} ~ {b} but {self.operation} with {r} separates them"


def congruence_violation(s: FiniteSemiring, p: CongruencePartition) -> CongruenceViolation | None:
    """A witness (a, b, r, op) against compatibility, or None if ``p`` is a congruence.

    Comparing each element with the first member of its class is enough: by
    transitivity every related pair is then covered.
    """
    if p.size != s.size:
        raise InvalidInputError("partition does not cover the carrier")
    lab = p.labels
    rep: dict = {}
    for x in range(s.size):
        a = rep.setdefault(lab[x], x)
        if a == x:
            continue
        for r in range(s.size):
            if lab[s.add[a][r]] != lab[s.add[x][r]]:
                return CongruenceViolation((a, x), r, "adding")
            if lab[s.mul[a][r]] != lab[s.mul[x][r]]:
                return CongruenceViolation((a, x), r, "right-multiplying")
            if lab[s.mul[r][a]] != lab[s.mul[r][x]]:
                return CongruenceViolation((a, x), r, "left-multiplying")
    return None


def is_congruence(s: FiniteSemiring, p: CongruencePartition) -> bool:
    return congruence_violation(s, p) is None


# ---------------------------------------------------------------------------
# the congruence lattice
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeEntry:
    partition: CongruencePartition
    generators: tuple  # a generator set of minimal size among those found
    principal: bool


@dataclass(frozen=True)
class CongruenceLattice:
    semiring: FiniteSemiring
    entries: tuple

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def partitions(self) -> list[CongruencePartition]:
        return [e.partition for e in self.entries]

    def index_of(self, p: CongruencePartition) -> int:
        return self.partitions().index(p)

    def cover_relations(self) -> list[tuple[int, int]]:
        """(i, j) with entry i strictly below entry j and nothing in between."""
        ps = self.partitions()
        below = {(i, j) for i, a in enumerate(ps) for j, b in enumerate(ps) if i != j and a.refines(b)}
        return sorted((i, j) for i, j in below
                      if not any((i, k) in below and (k, j) in below for k in range(len(ps))))

    def to_dict(self) -> dict:
        s = self.semiring
        return {
            "count": len(self.entries),
            "congruences": [
                {"classes": [[s.label(a) for a in c] for c in e.partition.classes()],
                 "principal": e.principal,
                 "generators": [[s.label(a), s.label(b)] for a, b in e.generators]}
                for e in self.entries],
        }


def enumerate_congruences(s: FiniteSemiring, max_size: int = 24,
                          max_congruences: int = 100_000) -> CongruenceLattice:
    """All congruences, as the join-closure of the principal ones (the diagonal included).

    Breadth-first joining means the first generator set found for each
    congruence has as few pairs as any join of principal congruences allows.
    """
    n = s.size
    if n > max_size:
        raise ResourceError(f"{n} elements exceeds the enumeration budget of {max_size}")
    diag = CongruencePartition.diagonal(n)
    known: dict[CongruencePartition, tuple] = {diag: ()}
    principal: set = {diag}
    atoms: list[tuple[CongruencePartition, tuple]] = []
    for a, b in combinations(range(n), 2):
        p = congruence_closure(s, [(a, b)])
        if p not in known:
            known[p] = ((a, b),)
            principal.add(p)
            atoms.append((p, (a, b)))
    queue = deque(p for p, _ in atoms)
    while queue:
        c = queue.popleft()
        for p, g in atoms:
            j = c.join(p)
            if j in known:
                continue
            known[j] = known[c] + (g,)
            if len(known) > max_congruences:
                raise ResourceError(f"more than {max_congruences} congruences")
            queue.append(j)
    entries = sorted(known.items(), key=lambda kv: (-kv[0].num_classes, kv[0].labels))
    return CongruenceLattice(s, tuple(
        LatticeEntry(CongruencePartition(p.labels, True), g, p in principal) for p, g in entries))


@dataclass(frozen=True)
class PrincipalityVerdict:
    principal: bool
    witness: CongruencePartition | None
    lattice: CongruenceLattice


def is_c_principal(s: FiniteSemiring, max_size: int = 24) -> PrincipalityVerdict:
    """Whether every congruence is generated by a single pair; else one that is not."""
    lattice = enumerate_congruences(s, max_size)
    bad = next((e.partition for e in lattice if not e.principal), None)
    return PrincipalityVerdict(bad is None, bad, lattice)


# ---------------------------------------------------------------------------
# surjections onto the Boolean semifield
# ---------------------------------------------------------------------------

def _boolean_kernel_ok(s: FiniteSemiring, q: set) -> bool:
    n = s.size
    if s.zero not in q or s.one in q:
        return False
    return all((s.add[a][b] in q) == (a in q and b in q) and (s.mul[a][b] in q) == (a in q or b in q)
               for a in range(n) for b in range(n))


def boolean_quotient_exhaustive(s: FiniteSemiring, max_size: int = 16) -> frozenset | None:
    """Plain subset enumeration: the smallest valid Q by bitmask order."""
    n = s.size
    if n > max_size:
        raise ResourceError(f"exhaustive search is capped at {max_size} elements")
    for mask in range(1 << n):
        q = {a for a in range(n) if mask >> a & 1}
        if _boolean_kernel_ok(s, q):
            return frozenset(q)
    return None


def has_boolean_quotient(s: FiniteSemiring) -> frozenset | None:
    """Preimage of 0 under some surjection onto B, or None.

    Backtracking with unit propagation over the two biconditionals; an
    unassigned element is tried outside Q first, so small preimages win.
    """
    n = s.size
    if s.zero == s.one:
        return None
    add, mul = s.add, s.mul

    def propagate(val: list) -> bool:
        changed = True
        while changed:
            changed = False
            known = [a for a in range(n) if val[a] is not None]
            for a in known:
                va = val[a]
                for b in known:
                    vb = val[b]
                    for target, want in ((add[a][b], va and vb), (mul[a][b], va or vb)):
                        have = val[target]
                        if have is None:
                            val[target] = want
                            changed = True
                        elif have != want:
                            return False
                if changed:
                    break
        return True

    def search(val: list) -> list | None:
        if not propagate(val):
            return None
        free = next((a for a in range(n) if val[a] is None), None)
        if free is None:
            return val
        for choice in (False, True):
            trial = list(val)
            trial[free] = choice
            got = search(trial)
            if got is not None:
                return got
        return None

    start: list = [None] * n
    start[s.zero], start[s.one] = True, False
    got = search(start)
    if got is None:
        return None
    q = frozenset(a for a in range(n) if got[a])
    if not _boolean_kernel_ok(s, set(q)):
        raise ConsistencyError(f"search produced an invalid Boolean kernel {sorted(q)}")
    return q


@dataclass(frozen=True)
class BGReport:
    name: str
    is_ring: bool
    boolean_quotient: frozenset | None
    consistent: bool

    def to_dict(self) -> dict:
        return {"semiring": self.name, "is_ring": self.is_ring,
                "boolean_quotient": sorted(self.boolean_quotient) if self.boolean_quotient is not None else None,
                "consistent": self.consistent}


def bg_check(s: FiniteSemiring) -> BGReport:
    """Rings and only rings fail to map onto B; report both sides and whether they agree."""
    ring = is_ring(s)
    q = has_boolean_quotient(s)
    return BGReport(s.name, ring, q, ring == (q is None))


# ---------------------------------------------------------------------------
# congruences on N
# ---------------------------------------------------------------------------

class _Trivial:
    """The diagonal congruence."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Trivial"

    def __reduce__(self):
        return (_Trivial, ())


TRIVIAL = _Trivial()


@dataclass(frozen=True)
class NatCongruence:
    """x ~ y iff x = y, or x, y >= n and x = y mod k."""

    n: int
    k: int

    def related(self, x: int, y: int) -> bool:
        return x == y or (x >= self.n and y >= self.n and (x - y) % self.k == 0)


def _nat_formula(pairs: list[tuple[int, int]]):
    nontrivial = [(a, b) for a, b in pairs if a != b]
    if not nontrivial:
        return TRIVIAL
    n = min(min(a, b) for a, b in nontrivial)
    k = 0
    for a, b in nontrivial:
        k = gcd(k, abs(a - b))
    return NatCongruence(n, k)


def classify_nat_congruence(gens: Iterable[Sequence[int]], cross_check: bool = True,
                            bound: int | None = None, budget: int = 200_000):
    """TRIVIAL or NatCongruence(n, k) for the semiring congruence on N generated by ``gens``.

    The closed form is confirmed against bounded closure on {0..bound}
    (default 4(n+k), raised to cover the generators); any disagreement raises
    ConsistencyError.
    """
    pairs = [(int(a), int(b)) for a, b in gens]
    if any(a < 0 or b < 0 for a, b in pairs):
        raise InvalidInputError("natural numbers must be nonnegative")
    result = _nat_formula(pairs)
    if not cross_check or result is TRIVIAL:
        return result
    top = max(max(p) for p in pairs)
    b = bound if bound is not None else 4 * (result.n + result.k)
    b = max(b, top, 1)
    part = bounded_closure(NatUniverse(b), pairs, budget=budget)
    for x in range(b + 1):
        for y in range(x + 1, b + 1):
            if part.related(x, y) != result.related(x, y):
                raise ConsistencyError(
                    f"N-congruence formula {result} disagrees with bounded closure at ({x},{y}) "
                    f"within 0..{b}")
    return result


# ---------------------------------------------------------------------------
# the B[X] example
# ---------------------------------------------------------------------------

def x_power_plus_one(i: int) -> BoolPolynomial:
    return BoolPolynomial.of(0, i)


@dataclass(frozen=True)
class BXReport:
    n: int
    degree_bound: int
    generators: tuple
    query: tuple
    related: bool
    merges: int
    classes: int
    complete: bool
    note: str = ("bounded closure under-approximates the congruence: 'related' is certain, "
                 "'not related' only holds inside this degree window and proves nothing")

    def to_dict(self) -> dict:
        return {"N": self.n, "degree_bound": self.degree_bound,
                "generators": [[str(a), str(b)] for a, b in self.generators],
                "query": [str(q) for q in self.query], "related": self.related,
                "merges": self.merges, "classes": self.classes, "fixpoint_reached": self.complete,
                "note": self.note}


def check_bx_nonrelation(n: int, degree_bound: int, budget: int = 200_000,
                         extra: Iterable[Sequence[BoolPolynomial]] = (),
                         query: Sequence[BoolPolynomial] | None = None) -> BXReport:
    """Bounded closure of {X^i+1 ~ X^j+1 : 1 <= i < j <= n} in degree <= D, then test ``query``.

    The default query is (X^{n+1}+1, X^{n+2}+1).
    """
    if n < 1:
        raise InvalidInputError("N must be at least 1")
    if degree_bound <= n + 2:
        raise InvalidInputError("degree bound must exceed N+2")
    gens = [(x_power_plus_one(i), x_power_plus_one(j)) for i, j in combinations(range(1, n + 1), 2)]
    gens += [tuple(p) for p in extra]
    q = tuple(query) if query is not None else (x_power_plus_one(n + 1), x_power_plus_one(n + 2))
    u = BoolPolyUniverse(degree_bound)
    part = bounded_closure(u, gens, budget=budget)
    related = part.related(u.index(q[0]), u.index(q[1]))
    return BXReport(n, degree_bound, tuple(gens), q, related, part.steps, part.num_classes, part.complete)
