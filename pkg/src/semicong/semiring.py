"""Finite semirings as explicit operation tables, and constructions on them.

Conventions
-----------
* Elements are the dense indices ``0 .. size-1``; labels are cosmetic.
* Multiplication need not be commutative; distributivity is checked on both sides.
* ``minmax:b`` is the chain {0, ..., b-1} with addition = max and
  multiplication = min, so the additive identity is 0 and the multiplicative
  identity is b-1.  This is the convention under which the chain is
  c-principal exactly when b <= 3.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class FiniteSemiring:
    add: tuple
    mul: tuple
    zero: int
    one: int
    labels: tuple | None = None
    name: str = ""

    def __post_init__(self):
        n = len(self.add)
        if n == 0:
            raise InvalidInputError("a semiring needs at least one element")
        for tname, table in (("add", self.add), ("mul", self.mul)):
            if len(table) != n or any(len(row) != n for row in table):
                raise InvalidInputError(f"{tname} table must be {n}x{n}")
            if any(not (isinstance(x, (int, np.integer)) and 0 <= x < n) for row in table for x in row):
                raise InvalidInputError(f"{tname} table has an entry outside 0..{n - 1}")
        if not (0 <= self.zero < n and 0 <= self.one < n):
            raise InvalidInputError("zero/one index out of range")
        if self.labels is not None and len(self.labels) != n:
            raise InvalidInputError("labels must have one entry per element")

    @classmethod
    def from_tables(cls, add, mul, zero, one, labels=None, name=""):
        return cls(tuple(tuple(int(x) for x in row) for row in add),
                   tuple(tuple(int(x) for x in row) for row in mul),
                   int(zero), int(one), tuple(str(l) for l in labels) if labels is not None else None, name)

    @classmethod
    def from_functions(cls, n: int, add: Callable, mul: Callable, zero: int, one: int,
                       labels=None, name=""):
        return cls.from_tables([[add(a, b) for b in range(n)] for a in range(n)],
                               [[mul(a, b) for b in range(n)] for a in range(n)],
                               zero, one, labels, name)

    @property
    def size(self) -> int:
        return len(self.add)

    def __len__(self):
        return self.size

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def plus(self, a: int, b: int) -> int:
        return self.add[a][b]

    def times(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def is_commutative(self) -> bool:
        n = self.size
        return all(self.mul[a][b] == self.mul[b][a] for a in range(n) for b in range(a + 1, n))

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array(self.add, dtype=np.int64), np.array(self.mul, dtype=np.int64)

    def to_dict(self) -> dict:
        d = {"size": self.size, "zero": self.zero, "one": self.one,
             "add": [list(r) for r in self.add], "mul": [list(r) for r in self.mul]}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FiniteSemiring":
        try:
            size = int(d["size"])
            s = cls.from_tables(d["add"], d["mul"], d["zero"], d["one"], d.get("labels"), d.get("name", ""))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed semiring document: {exc}") from None
        if s.size != size:
            raise InvalidInputError("size does not match the tables")
        return s

    def relabel(self, perm: Sequence[int], name: str | None = None) -> "FiniteSemiring":
        """Isomorphic copy in which old element ``a`` becomes ``perm[a]``."""
        n = self.size
        inv = [0] * n
        for a, p in enumerate(perm):
            inv[p] = a
        add = [[perm[self.add[inv[x]][inv[y]]] for y in range(n)] for x in range(n)]
        mul = [[perm[self.mul[inv[x]][inv[y]]] for y in range(n)] for x in range(n)]
        labels = [self.label(inv[x]) for x in range(n)]
        return FiniteSemiring.from_tables(add, mul, perm[self.zero], perm[self.one], labels,
                                          self.name if name is None else name)


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def __str__(self):
        return f"{self.axiom} fails at {self.witness}"


def validate_axioms(s: FiniteSemiring) -> list[Violation]:
    """Every violated semiring axiom, each with one witnessing tuple; empty iff valid."""
    A, M = s.arrays()
    n = s.size
    i = np.arange(n)
    a3, b3, c3 = i[:, None, None], i[None, :, None], i[None, None, :]
    out: list[Violation] = []

    def first(mask) -> tuple:
        return tuple(int(x) for x in np.argwhere(mask)[0])

    checks = [
        ("additive associativity", A[A[a3, b3], c3] != A[a3, A[b3, c3]]),
        ("additive commutativity", A != A.T),
        ("multiplicative associativity", M[M[a3, b3], c3] != M[a3, M[b3, c3]]),
        ("left distributivity", M[a3, A[b3, c3]] != A[M[a3, b3], M[a3, c3]]),
        ("right distributivity", M[A[a3, b3], c3] != A[M[a3, c3], M[b3, c3]]),
        ("additive identity", (A[s.zero, :] != i) | (A[:, s.zero] != i)),
        ("absorbing zero", (M[s.zero, :] != s.zero) | (M[:, s.zero] != s.zero)),
        ("multiplicative identity", (M[s.one, :] != i) | (M[:, s.one] != i)),
    ]
    for axiom, mask in checks:
        if mask.any():
            out.append(Violation(axiom, first(mask)))
    return out


def is_ring(s: FiniteSemiring) -> bool:
    """True iff every element has an additive inverse."""
    return all(s.zero in row for row in s.add)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def make_boolean() -> FiniteSemiring:
    return FiniteSemiring.from_tables([[0, 1], [1, 1]], [[0, 0], [0, 1]], 0, 1, ["0", "1"], "boolean")


def make_truncated_nat(n: int, k: int) -> FiniteSemiring:
    """N modulo the congruence generated by n ~ n+k: carrier {0, ..., n+k-1}."""
    if n < 0 or k < 1:
        raise InvalidInputError("truncnat needs n >= 0 and k >= 1")
    size = n + k

    def red(x):
        return x if x < n else n + (x - n) % k

    one = red(1)
    return FiniteSemiring.from_functions(size, lambda a, b: red(a + b), lambda a, b: red(a * b),
                                         0, one, [str(x) for x in range(size)], f"truncnat:{n}:{k}")


def make_minmax(b: int) -> FiniteSemiring:
    if b < 2:
        raise InvalidInputError("minmax semiring needs b >= 2")
    return FiniteSemiring.from_functions(b, max, min, 0, b - 1, [str(x) for x in range(b)], f"minmax:{b}")


def make_zmod(n: int) -> FiniteSemiring:
    if n < 1:
        raise InvalidInputError("zmod needs n >= 1")
    return FiniteSemiring.from_functions(n, lambda a, b: (a + b) % n, lambda a, b: (a * b) % n,
                                         0, 1 % n, [str(x) for x in range(n)], f"zmod:{n}")


def make_product(s: FiniteSemiring, t: FiniteSemiring) -> FiniteSemiring:
    m = t.size
    pairs = [(a, b) for a in range(s.size) for b in range(m)]

    def enc(a, b):
        return a * m + b

    return FiniteSemiring.from_tables(
        [[enc(s.add[a][c], t.add[b][d]) for (c, d) in pairs] for (a, b) in pairs],
        [[enc(s.mul[a][c], t.mul[b][d]) for (c, d) in pairs] for (a, b) in pairs],
        enc(s.zero, t.zero), enc(s.one, t.one),
        [f"({s.label(a)},{t.label(b)})" for a, b in pairs],
        f"product:{s.name},{t.name}")


def make_star(s: FiniteSemiring) -> FiniteSemiring:
    """Adjoin a new additive identity w with w + x = x and w * x = x * w = w.

    The new element is the last index; the old zero becomes an ordinary element.
    """
    n = s.size
    w = n
    add = [list(row) + [a] for a, row in enumerate(s.add)] + [list(range(n)) + [w]]
    mul = [list(row) + [w] for row in s.mul] + [[w] * (n + 1)]
    labels = [s.label(a) for a in range(n)] + ["ω"]
    return FiniteSemiring.from_tables(add, mul, w, s.one, labels, f"star:{s.name}")


def make_quotient(s: FiniteSemiring, partition) -> FiniteSemiring:
    """Semiring of classes; ``partition`` is a CongruencePartition or a label sequence.

    Raises InvalidInputError naming a witnessing pair if the operations are not
    well defined on classes.
    """
    labels = list(getattr(partition, "labels", partition))
    n = s.size
    if len(labels) != n:
        raise InvalidInputError("partition does not cover the carrier")
    ids: dict = {}
    cls = [ids.setdefault(l, len(ids)) for l in labels]
    reps = [None] * len(ids)
    for a in range(n):
        if reps[cls[a]] is None:
            reps[cls[a]] = a
    k = len(ids)
    add = [[None] * k for _ in range(k)]
    mul = [[None] * k for _ in range(k)]
    src = [[None] * k for _ in range(k)]
    for a in range(n):
        for b in range(n):
            ca, cb = cls[a], cls[b]
            sm, pr = cls[s.add[a][b]], cls[s.mul[a][b]]
            if add[ca][cb] is None:
                add[ca][cb], mul[ca][cb], src[ca][cb] = sm, pr, (a, b)
            elif add[ca][cb] != sm or mul[ca][cb] != pr:
                raise InvalidInputError(
                    f"not a congruence: pairs {src[ca][cb]} and {(a, b)} lie in the same classes "
                    f"but their {'sums' if add[ca][cb] != sm else 'products'} do not")
    qlabels = ["{" + ",".join(s.label(a) for a in range(n) if cls[a] == c) + "}" for c in range(k)]
    return FiniteSemiring.from_tables(add, mul, cls[s.zero], cls[s.one], qlabels, f"quotient:{s.name}")


def make_subsemiring(s: FiniteSemiring, members: Iterable[int], name: str = "") -> FiniteSemiring:
    """Induced semiring on a subset closed under both operations and containing 0, 1."""
    keep = sorted(set(members))
    pos = {a: i for i, a in enumerate(keep)}
    if s.zero not in pos or s.one not in pos:
        raise InvalidInputError("subset must contain zero and one")
    try:
        add = [[pos[s.add[a][b]] for b in keep] for a in keep]
        mul = [[pos[s.mul[a][b]] for b in keep] for a in keep]
    except KeyError as exc:
        raise InvalidInputError(f"subset not closed: produces {exc.args[0]}") from None
    return FiniteSemiring.from_tables(add, mul, pos[s.zero], pos[s.one],
                                      [s.label(a) for a in keep], name or f"sub:{s.name}")


# ---------------------------------------------------------------------------
# positivity functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PositivityMap:
    values: tuple

    def __call__(self, x: int) -> int:
        return self.values[x]


def positivity_violations(r: FiniteSemiring, p: PositivityMap) -> list[Violation]:
    n = r.size
    if len(p.values) != n or any(v not in (-1, 0, 1) for v in p.values):
        raise InvalidInputError("positivity map must send each element to -1, 0 or 1")
    out = []
    if p(r.zero) != 0:
        out.append(Violation("p(0) = 0", (r.zero,)))
    if p(r.one) != 1:
        out.append(Violation("p(1) = 1", (r.one,)))
    mult = next(((a, b) for a in range(n) for b in range(n) if p(r.mul[a][b]) != p(a) * p(b)), None)
    if mult:
        out.append(Violation("p(xy) = p(x)p(y)", mult))
    neg = next(((a, b) for a in range(n) for b in range(n)
                if p(r.add[a][b]) == -1 and p(a) != -1 and p(b) != -1), None)
    if neg:
        out.append(Violation("p(x+y) = -1 implies p(x) = -1 or p(y) = -1", neg))
    return out


def positive_subsemiring(r: FiniteSemiring, p: PositivityMap) -> FiniteSemiring:
    """The subsemiring {x : p(x) >= 0} of a finite ring."""
    if not is_ring(r):
        raise InvalidInputError(f"{r.name or 'semiring'} is not a ring")
    bad = positivity_violations(r, p)
    if bad:
        raise InvalidInputError(f"not a positivity function: {bad[0]}")
    return make_subsemiring(r, [x for x in range(r.size) if p(x) >= 0], f"positive:{r.name}")


# ---------------------------------------------------------------------------
# Boolean polynomials B[X]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoolPolynomial:
    """An element of B[X], stored as its support (set of exponents)."""

    support: frozenset = frozenset()

    @classmethod
    def of(cls, *exponents: int) -> "BoolPolynomial":
        if any(e < 0 for e in exponents):
            raise InvalidInputError("exponents must be nonnegative")
        return cls(frozenset(exponents))

    @classmethod
    def from_mask(cls, mask: int) -> "BoolPolynomial":
        return cls(frozenset(i for i in range(mask.bit_length()) if mask >> i & 1))

    def mask(self) -> int:
        return sum(1 << e for e in self.support)

    @property
    def degree(self) -> int:
        return max(self.support, default=-1)

    def __add__(self, other: "BoolPolynomial") -> "BoolPolynomial":
        return BoolPolynomial(self.support | other.support)

    def __mul__(self, other: "BoolPolynomial") -> "BoolPolynomial":
        return BoolPolynomial(frozenset(a + b for a in self.support for b in other.support))

    def __str__(self):
        if not self.support:
            return "0"
        return "+".join("1" if e == 0 else ("X" if e == 1 else f"X^{e}") for e in sorted(self.support))


def bool_poly_add(a: BoolPolynomial, b: BoolPolynomial) -> BoolPolynomial:
    return a + b


def bool_poly_mul(a: BoolPolynomial, b: BoolPolynomial) -> BoolPolynomial:
    return a * b


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def catalog_semiring(name: str) -> FiniteSemiring:
    """Look up a semiring by name: ``boolean``, ``minmax:4``, ``truncnat:2:3``,
    ``zmod:6``, ``star:<name>``, ``product:<name>,<name>``."""
    head, _, rest = name.partition(":")
    try:
        if head == "boolean" and not rest:
            return make_boolean()
        if head == "minmax":
            return make_minmax(int(rest))
        if head == "truncnat":
            n, k = rest.split(":")
            return make_truncated_nat(int(n), int(k))
        if head == "zmod":
            return make_zmod(int(rest))
        if head == "star" and rest:
            return make_star(catalog_semiring(rest))
        if head == "product" and "," in rest:
            left, right = _split_product(rest)
            return make_product(catalog_semiring(left), catalog_semiring(right))
    except ValueError:
        pass
    raise InvalidInputError(f"unknown catalog semiring {name!r}")


def _split_product(text: str) -> tuple[str, str]:
    # product operands may themselves be products; split at the comma that
    # leaves a parseable left operand
    parts = text.split(",")
    for i in range(1, len(parts)):
        left, right = ",".join(parts[:i]), ",".join(parts[i:])
        try:
            catalog_semiring(left)
            return left, right
        except InvalidInputError:
            continue
    raise ValueError(text)


CATALOG = (
    "boolean",
    "minmax:2", "minmax:3", "minmax:4", "minmax:5",
    "truncnat:0:1", "truncnat:1:1", "truncnat:0:3", "truncnat:1:2", "truncnat:2:3", "truncnat:3:2",
    "zmod:1", "zmod:2", "zmod:3", "zmod:4", "zmod:5", "zmod:6",
    "star:boolean", "star:zmod:2", "star:zmod:3", "star:minmax:3", "star:truncnat:1:2",
    "product:boolean,boolean", "product:boolean,zmod:2", "product:zmod:2,zmod:3",
    "product:minmax:3,boolean",
)


def load_semiring(spec: str) -> FiniteSemiring:
    """A catalog name, or a path to a JSON table document."""
    if spec.endswith(".json"):
        try:
            with open(spec) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise InvalidInputError(f"cannot read {spec}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"{spec} is not valid JSON: {exc}") from None
        return FiniteSemiring.from_dict(doc)
    return catalog_semiring(spec)


# ---------------------------------------------------------------------------
# random semirings for property runs
# ---------------------------------------------------------------------------

def _random_tables(rng: random.Random, n: int, tries: int = 60) -> FiniteSemiring | None:
    """Rejection-sample raw tables with 0 and 1 pinned; None if nothing valid was hit."""
    free = [(a, b) for a in range(2, n) for b in range(2, n)] if n > 2 else []
    for _ in range(tries):
        add = [[None] * n for _ in range(n)]
        mul = [[None] * n for _ in range(n)]
        for a in range(n):
            add[0][a] = add[a][0] = a
            mul[0][a] = mul[a][0] = 0
            mul[1][a] = mul[a][1] = a
        for a in range(1, n):
            for b in range(a, n):
                add[a][b] = add[b][a] = rng.randrange(n)
        for a, b in free:
            mul[a][b] = rng.randrange(n)
        s = FiniteSemiring.from_tables(add, mul, 0, 1, name=f"random:{n}")
        if not validate_axioms(s):
            return s
    return None


def random_semiring(rng: random.Random, max_size: int = 6) -> FiniteSemiring:
    """A random validated semiring with at most ``max_size`` elements.

    Drawn from catalog families, products, stars, quotients by random
    principal congruences and raw rejection-sampled tables, then randomly
    relabelled so that 0 and 1 are not always at the same indices.
    """
    from .congruence import congruence_closure  # local: congruence imports this module

    if max_size <= 1:
        return make_zmod(1)
    while True:
        kind = rng.randrange(7)
        if kind == 0:
            s = make_minmax(rng.randint(2, max_size))
        elif kind == 1:
            n = rng.randint(0, max_size - 1)
            s = make_truncated_nat(n, rng.randint(1, max_size - n))
        elif kind == 2:
            s = make_zmod(rng.randint(1, max_size))
        elif kind == 3:
            s = make_star(random_semiring(rng, max_size - 1))
        elif kind == 4:
            a = random_semiring(rng, max_size // 2)
            b = random_semiring(rng, max_size // a.size)
            s = make_product(a, b)
        elif kind == 5:
            s = _random_tables(rng, rng.randint(2, min(4, max_size))) or make_boolean()
        else:
            s = make_boolean()
        if s.size > max_size:
            continue
        if s.size > 1 and rng.random() < 0.4:
            a, b = rng.sample(range(s.size), 2)
            s = make_quotient(s, congruence_closure(s, [(a, b)]))
        perm = list(range(s.size))
        rng.shuffle(perm)
        s = s.relabel(perm)
        if validate_axioms(s):  # constructors are correct; keep the post-validation anyway
            continue
        return s
