"""Real orders Z[theta], their nonnegative parts S, and the congruences on S.

A nonzero congruence on S is pinned down by a nonzero ideal I of the order
and a bit j: with j = 0 it relates x and y whenever x - y lies in I; with
j = 1 it does the same for positive x, y but keeps 0 in a class of its own.
Everything here is exact: membership is HNF back-substitution, signs go
through the number field's interval machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import intmat
from .algebraic import FieldElement, NumberField, format_polynomial, parse_field_spec, squarefree_part, trim
from .congruence import TRIVIAL, CongruencePartition
from .errors import ConsistencyError, InvalidInputError, ResourceError
from .semiring import FiniteSemiring, make_star
from .universe import BoundedUniverse, bounded_closure


# ---------------------------------------------------------------------------
# orders and their elements
# ---------------------------------------------------------------------------

class RealOrder:
    """Z[theta] for a monic irreducible integer polynomial of degree >= 2 and a chosen real root."""

    def __init__(self, poly: Sequence[int], root_index: int = 0):
        field = NumberField(poly, root_index)
        if field.degree < 2:
            raise InvalidInputError("degree-1 orders (R = Z) are handled by the N classifier instead")
        self.field = field
        self.poly = field.poly
        self.degree = field.degree

    @classmethod
    def from_spec(cls, text: str) -> "RealOrder":
        f = parse_field_spec(text)
        return cls(f.poly, f.root_index)

    def spec(self) -> str:
        return self.field.spec()

    def __eq__(self, other):
        return isinstance(other, RealOrder) and self.field == other.field

    def __hash__(self):
        return hash(("order", self.field))

    def __repr__(self):
        return f"RealOrder({self.spec()!r})"

    def element(self, coords: Iterable[int]) -> "OrderElement":
        c = list(coords)
        if any(not isinstance(x, (int, np.integer)) and not (isinstance(x, Fraction) and x.denominator == 1)
               for x in c):
            raise InvalidInputError(f"order elements need integer coordinates, got {c}")
        c = [int(x) for x in c]
        if len(c) > self.degree:
            c = [int(x) for x in self.field._reduce(c)]
        return OrderElement(self, tuple(c + [0] * (self.degree - len(c))))

    def parse(self, text: str) -> "OrderElement":
        """Either a coordinate tuple ``"-1,1"`` or an expression in w such as ``"1+w"``."""
        t = text.strip().strip("()")
        if "," in t:
            try:
                coords = [int(x) for x in t.split(",")]
            except ValueError:
                raise InvalidInputError(f"bad coordinate tuple {text!r}") from None
            if len(coords) != self.degree:
                raise InvalidInputError(f"{text!r} needs {self.degree} coordinates")
            return self.element(coords)
        fe = self.field.parse(t)
        if any(c.denominator != 1 for c in fe.coords):
            raise InvalidInputError(f"{text!r} is not an integral element")
        return self.element(int(c) for c in fe.coords)

    @property
    def zero(self) -> "OrderElement":
        return self.element([0])

    @property
    def one(self) -> "OrderElement":
        return self.element([1])

    @property
    def theta(self) -> "OrderElement":
        return self.element([0, 1])

    def from_int(self, k: int) -> "OrderElement":
        return self.element([k])

    def mul_matrix(self, x: "OrderElement") -> list[list[int]]:
        return [[int(v) for v in row] for row in self.field.mul_matrix(x.coords)]

    def float_basis(self) -> np.ndarray:
        t = float(self.field.gen)
        return np.array([t ** i for i in range(self.degree)])


@dataclass(frozen=True, eq=False)
class OrderElement:
    order: RealOrder
    coords: tuple

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.order.from_int(other)
        return isinstance(other, OrderElement) and self.order == other.order and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __str__(self):
        return format_polynomial(self.coords, "w")

    def __repr__(self):
        return f"OrderElement({self})"

    def _lift(self, other) -> "OrderElement":
        if isinstance(other, OrderElement):
            if other.order != self.order:
                raise InvalidInputError("elements of different orders")
            return other
        if isinstance(other, int):
            return self.order.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return OrderElement(self.order, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return OrderElement(self.order, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return OrderElement(self.order, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return OrderElement(self.order, tuple(a * other for a in self.coords))
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return OrderElement(self.order, tuple(int(c) for c in self.order.field._mul(self.coords, o.coords)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise InvalidInputError("negative powers leave the order")
        out = self.order.one
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not any(self.coords)

    def sign(self) -> int:
        return self.order.field.sign_of(self.coords)

    def value(self) -> FieldElement:
        return self.order.field.element(self.coords)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.value())


def make_order(poly: Sequence[int] | str, root_index: int = 0) -> RealOrder:
    if isinstance(poly, str):
        if "@" in poly:
            return RealOrder.from_spec(poly)
        from .algebraic import parse_polynomial
        poly = parse_polynomial(poly)
    return RealOrder(poly, root_index)


def in_S(x: OrderElement) -> bool:
    return x.sign() >= 0


def _require_in_S(*xs: OrderElement) -> None:
    for x in xs:
        if x.sign() < 0:
            raise InvalidInputError(f"{x} is negative, so it is not in the nonnegative part")


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IdealLattice:
    """A nonzero ideal, as the HNF basis (columns) of its Z-lattice."""

    order: RealOrder
    hnf: tuple
    generators: tuple

    def __eq__(self, other):
        return isinstance(other, IdealLattice) and self.order == other.order and self.hnf == other.hnf

    def __hash__(self):
        return hash(self.hnf)

    @property
    def det(self) -> int:
        return math.prod(self.hnf[i][i] for i in range(len(self.hnf)))

    def basis(self) -> list[OrderElement]:
        d = len(self.hnf)
        return [self.order.element([self.hnf[i][j] for i in range(d)]) for j in range(d)]

    def contains(self, x: OrderElement) -> bool:
        return intmat.hnf_contains(self.hnf, x.coords)

    def __contains__(self, x):
        return self.contains(x)

    def reduce(self, x: OrderElement) -> OrderElement:
        return self.order.element(intmat.hnf_reduce(self.hnf, x.coords))

    def to_dict(self) -> dict:
        return {"hnf": [list(r) for r in self.hnf], "determinant": self.det,
                "generators": [str(g) for g in self.generators],
                "basis": [str(b) for b in self.basis()]}

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def ideal_from_generators(order: RealOrder, gens: Iterable[OrderElement]) -> IdealLattice:
    gens = tuple(gens)
    if not any(not g.is_zero() for g in gens):
        raise InvalidInputError("the zero ideal is excluded: give at least one nonzero generator")
    d = order.degree
    theta = order.theta
    vectors = []
    for g in gens:
        v = g
        for _ in range(d):
            vectors.append(v.coords)
            v = v * theta
    h = intmat.hnf_columns(vectors, d)
    ideal = IdealLattice(order, tuple(tuple(r) for r in h), gens)
    for b in ideal.basis():
        if not ideal.contains(b * theta):
            raise ConsistencyError(f"lattice of {ideal} is not closed under multiplication by w")
    return ideal


def ideal_membership(ideal: IdealLattice, x: OrderElement) -> bool:
    return ideal.contains(x)


@dataclass(frozen=True)
class KIdeal:
    """The nonnegative part of a ring ideal, with k-ideal generators |g|."""

    ideal: IdealLattice
    generators: tuple

    def contains(self, x: OrderElement) -> bool:
        return in_S(x) and self.ideal.contains(x)

    def __contains__(self, x):
        return self.contains(x)


def k_ideal_of(ideal: IdealLattice) -> KIdeal:
    return KIdeal(ideal, tuple(abs(g) for g in ideal.generators if not g.is_zero()))


def ring_ideal_of(k: KIdeal | Iterable[OrderElement], order: RealOrder | None = None) -> IdealLattice:
    if isinstance(k, KIdeal):
        return ideal_from_generators(k.ideal.order, k.generators)
    gens = tuple(k)
    if order is None:
        if not gens:
            raise InvalidInputError("empty generator list")
        order = gens[0].order
    _require_in_S(*gens)
    return ideal_from_generators(order, gens)


# ---------------------------------------------------------------------------
# congruences on S
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PositiveCongruence:
    """C_j(I): x ~ y iff x - y in I, and for j = 1 also x, y > 0 unless x = y = 0."""

    ideal: IdealLattice
    j: int

    def to_dict(self) -> dict:
        return {"kind": "nontrivial", "j": self.j, **self.ideal.to_dict(),
                "quotient_size": self.ideal.det + self.j}


def _pair_list(pairs) -> list[tuple[OrderElement, OrderElement]]:
    out = []
    for a, b in pairs:
        _require_in_S(a, b)
        out.append((a, b))
    return out


def classify_congruence(order: RealOrder, pairs: Iterable[Sequence[OrderElement]], cross_check: bool = True,
                        coord_bound: int = 4, budget: int = 20_000):
    """TRIVIAL or PositiveCongruence for the congruence on S generated by ``pairs``.

    The cross-check runs bounded closure over a small coordinate box and
    confirms that every relation it derives is predicted by the answer.
    """
    pairs = _pair_list(pairs)
    nontrivial = [(a, b) for a, b in pairs if a != b]
    if not nontrivial:
        return TRIVIAL
    ideal = ideal_from_generators(order, [abs(a - b) for a, b in nontrivial])
    j = 0 if any(a.is_zero() != b.is_zero() for a, b in nontrivial) else 1
    result = PositiveCongruence(ideal, j)
    if cross_check:
        bound = max([coord_bound] + [abs(c) for p in nontrivial for x in p for c in x.coords])
        universe = cached_universe(order, bound)
        try:
            part = bounded_closure(universe, nontrivial, budget=budget)
        except ResourceError as exc:
            part = exc.partial
        bad = soundness_violation(universe, part, result)
        if bad is not None:
            raise ConsistencyError(f"bounded closure relates {bad[0]} and {bad[1]} but {result} does not")
    return result


def is_related(order: RealOrder, cls, x: OrderElement, y: OrderElement) -> bool:
    _require_in_S(x, y)
    if cls is TRIVIAL:
        return x == y
    if cls.j == 1:
        zx, zy = x.is_zero(), y.is_zero()
        if zx or zy:
            return zx and zy
    return cls.ideal.contains(x - y)


def _rows_in_lattice(hnf: Sequence[Sequence[int]], diffs: np.ndarray) -> np.ndarray:
    """Vectorized membership of each row of ``diffs`` in the lattice spanned by the HNF columns."""
    h = np.array(hnf, dtype=np.int64)
    rem = diffs.astype(np.int64).copy()
    ok = np.ones(len(rem), dtype=bool)
    for row in range(h.shape[0] - 1, -1, -1):
        piv = h[row, row]
        ok &= rem[:, row] % piv == 0
        q = rem[:, row] // piv
        rem -= q[:, None] * h[:, row][None, :]
    return ok & np.all(rem == 0, axis=1)


def soundness_violation(universe: "OrderUniverse", part: CongruencePartition, cls):
    """A pair related by ``part`` but not by ``cls``, or None."""
    labels = np.asarray(part.labels, dtype=np.int64)
    heads = np.unique(labels, return_index=True)[1]
    head_of = heads[labels]
    mask = head_of != np.arange(len(labels))
    if not mask.any():
        return None
    idx = np.nonzero(mask)[0]
    if cls is TRIVIAL:
        i = int(idx[0])
        return universe.element(int(head_of[i])), universe.element(i)
    c = universe.coords
    good = _rows_in_lattice(cls.ideal.hnf, c[idx] - c[head_of[idx]])
    if cls.j == 1:
        zero = np.all(c == 0, axis=1)
        good &= ~(zero[idx] | zero[head_of[idx]])
    bad = idx[~good]
    if len(bad):
        i = int(bad[0])
        x, y = universe.element(int(head_of[i])), universe.element(i)
        if is_related(universe.order, cls, x, y):
            raise ConsistencyError("vectorized and exact relatedness disagree")
        return x, y
    return None


_UNIVERSES: dict = {}


def cached_universe(order: RealOrder, bounds) -> "OrderUniverse":
    """OrderUniverse instances are reused across calls (their image tables are the expensive part)."""
    key = (order.spec(), tuple(bounds) if not isinstance(bounds, int) else (bounds,) * order.degree)
    u = _UNIVERSES.get(key)
    if u is None:
        if len(_UNIVERSES) > 8:
            _UNIVERSES.clear()
        u = _UNIVERSES[key] = OrderUniverse(order, list(key[1]))
    return u


@dataclass(frozen=True)
class AgreementReport:
    """Bounded closure against a classification: soundness and reachability of the canonical generators."""
    sound: bool
    complete: bool
    bound: int
    universe_size: int
    merges: int
    mismatch: str | None = None

    @property
    def agrees(self) -> bool:
        return self.sound and self.complete

    def to_dict(self) -> dict:
        return {"sound": self.sound, "complete": self.complete, "coordinate_bound": self.bound,
                "universe_size": self.universe_size, "merges": self.merges, "mismatch": self.mismatch}


def bounded_agreement(order: RealOrder, pairs, cls=None, start_bound: int | None = None,
                      max_bound: int | None = None, budget: int = 200_000) -> AgreementReport:
    """Run bounded closure on ``pairs`` in growing coordinate boxes.

    Sound: every pair the closure relates is related by ``cls``.  Complete:
    every canonical generator of ``cls`` is related in some box up to
    ``max_bound``.  The closure stops early once the generators are reached;
    its partial result is still a set of consequences, so the soundness
    check stays meaningful.
    """
    pairs = _pair_list(pairs)
    if cls is None:
        cls = classify_congruence(order, pairs, cross_check=False)
    nontrivial = [(a, b) for a, b in pairs if a != b]
    targets = [] if cls is TRIVIAL else canonical_generators(cls)
    d = order.degree
    start = start_bound if start_bound is not None else (10 if d == 2 else 6)
    cap = max_bound if max_bound is not None else start + (6 if d == 2 else 4)
    need = max([0] + [abs(c) for p in nontrivial + targets for x in p for c in x.coords])
    bound = max(start, need)
    while True:
        u = cached_universe(order, bound)
        try:
            part = bounded_closure(u, nontrivial, budget=budget, until=targets)
        except ResourceError as exc:
            part = exc.partial
        bad = soundness_violation(u, part, cls)
        if bad is not None:
            return AgreementReport(False, False, bound, u.size, part.steps,
                                   f"closure relates {bad[0]} and {bad[1]}")
        missing = [t for t in targets if not part.related(u.index(t[0]), u.index(t[1]))]
        if not missing:
            return AgreementReport(True, True, bound, u.size, part.steps)
        if bound + 2 > max(cap, need):
            return AgreementReport(True, False, bound, u.size, part.steps,
                                   f"canonical generator {missing[0][0]} ~ {missing[0][1]} not reached")
        bound += 2


def canonical_generators(cls, ideal_gens: Iterable[OrderElement] | None = None) -> list:
    """Pairs (j, j + x) over k-ideal generators x of the class's ideal."""
    if cls is TRIVIAL:
        raise InvalidInputError("the trivial congruence has no canonical generators")
    order = cls.ideal.order
    gens = list(ideal_gens) if ideal_gens is not None else list(k_ideal_of(cls.ideal).generators)
    _require_in_S(*gens)
    j = order.from_int(cls.j)
    return [(j, j + x) for x in gens if not x.is_zero()]


def _finite_ring_tables(ideal: IdealLattice):
    """R/I via Smith normal form: residues of U x modulo the invariant factors."""
    h = [list(r) for r in ideal.hnf]
    u, dmat, _ = intmat.smith_normal_form(h)
    d = len(h)
    inv = [dmat[i][i] for i in range(d)]
    uinv = intmat.inverse_unimodular(u)
    active = [i for i in range(d) if inv[i] != 1]
    residues = list(product(*[range(inv[i]) for i in active]))
    index = {r: k for k, r in enumerate(residues)}
    order = ideal.order

    def key(x: OrderElement):
        ux = intmat.matvec(u, x.coords)
        return tuple(ux[i] % inv[i] for i in active)

    reps = []
    for r in residues:
        full = [0] * d
        for i, v in zip(active, r):
            full[i] = v
        reps.append(ideal.reduce(order.element(intmat.matvec(uinv, full))))
    add = [[index[key(a + b)] for b in reps] for a in reps]
    mul = [[index[key(a * b)] for b in reps] for a in reps]
    return add, mul, index[key(order.zero)], index[key(order.one)], [str(r) for r in reps]


def quotient_semiring(order: RealOrder, cls, max_size: int = 400) -> FiniteSemiring:
    """S / C_j(I): the finite ring R/I for j = 0, and (R/I) with a new zero adjoined for j = 1."""
    if cls is TRIVIAL:
        raise InvalidInputError("the trivial congruence has an infinite quotient")
    if cls.ideal.det > max_size:
        raise ResourceError(f"quotient would have {cls.ideal.det} elements (cap {max_size})")
    add, mul, zero, one, labels = _finite_ring_tables(cls.ideal)
    ring = FiniteSemiring.from_tables(add, mul, zero, one, labels, f"R/{cls.ideal}")
    return ring if cls.j == 0 else make_star(ring)


# ---------------------------------------------------------------------------
# integer relations n ~ m
# ---------------------------------------------------------------------------

def characteristic_polynomial(m: Sequence[Sequence[int]]) -> tuple:
    """Faddeev-LeVerrier; coefficients lowest degree first, monic."""
    n = len(m)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        mk = intmat.matmul(m, mk)
        for i in range(n):
            mk[i][i] += coeffs[n - k + 1]
        am = intmat.matmul(m, mk)
        tr = sum(am[i][i] for i in range(n))
        if tr % k:
            raise ConsistencyError("non-integral characteristic polynomial")
        coeffs[n - k] = -tr // k
    return tuple(coeffs)


def minimal_polynomial(x: OrderElement) -> tuple:
    cp = characteristic_polynomial(x.order.mul_matrix(x))
    mp = squarefree_part(cp)
    if mp[-1] != 1:
        raise ConsistencyError(f"minimal polynomial of {x} is not monic")
    return mp


@dataclass(frozen=True)
class IntegerRelation:
    """u f(u) = u g(u) + l with f, g in N[X], and integers n = m + l, m > a f(a) + a g(a)."""

    f: tuple
    g: tuple
    l: int
    m: int
    n: int
    minimal_polynomial: tuple

    def to_dict(self) -> dict:
        return {"f": format_polynomial(self.f, "X") if self.f else "0",
                "g": format_polynomial(self.g, "X") if self.g else "0",
                "l": self.l, "m": self.m, "n": self.n,
                "minimal_polynomial": format_polynomial(self.minimal_polynomial)}


def _eval_nat_poly(p: Sequence[int], x: OrderElement) -> OrderElement:
    acc = x.order.zero
    for c in reversed(p):
        acc = acc * x + c
    return acc


def relation_identity_holds(u: OrderElement, rel: IntegerRelation) -> bool:
    return u * _eval_nat_poly(rel.f, u) == u * _eval_nat_poly(rel.g, u) + rel.l


def derive_integer_relation(order: RealOrder, a: OrderElement, u: OrderElement) -> IntegerRelation:
    """Integers n > m > 1 with m ~ n in any congruence containing a ~ a + u (a, u > 0)."""
    if a.sign() <= 0:
        raise InvalidInputError("a must be positive")
    if u.sign() <= 0:
        raise InvalidInputError("u must be positive")
    mp = minimal_polynomial(u)
    while mp[0] == 0:  # cannot happen for irreducible mp of a nonzero u, kept for safety
        mp = mp[1:]
    c0 = mp[0]
    h = list(mp[1:])  # u * h(u) = -c0
    if -c0 < 0:
        h = [-c for c in h]
    l = abs(c0)
    f = trim(max(c, 0) for c in h)
    g = trim(max(-c, 0) for c in h)
    s = a * _eval_nat_poly(f, a) + a * _eval_nat_poly(g, a)
    lo, _ = s.value().enclosure(Fraction(1, 4))
    m = math.floor(lo)
    while order.from_int(m + 1) <= s:
        m += 1
    while order.from_int(m) > s:
        m -= 1
    m = max(m + 1, 2)
    rel = IntegerRelation(f, g, l, m, m + l, mp)
    if not relation_identity_holds(u, rel):
        raise ConsistencyError(f"derived relation fails for u = {u}")
    return rel


# ---------------------------------------------------------------------------
# small generator search
# ---------------------------------------------------------------------------

def small_generators(ideal: IdealLattice, max_count: int = 2, coord_bound: int = 3):
    """Fewest elements (at most ``max_count``) with coordinates in the box generating ``ideal``.

    Searches the box in order of coordinate size; returns None if nothing is found.
    """
    order = ideal.order
    d = order.degree
    box = [c for c in product(range(-coord_bound, coord_bound + 1), repeat=d) if any(c)]
    box.sort(key=lambda c: (sum(map(abs, c)), c))
    candidates = [order.element(c) for c in box if ideal.contains(order.element(c))]
    candidates = [x for x in candidates if x.sign() > 0]
    for count in range(1, max_count + 1):
        if count == 1:
            for x in candidates:
                if ideal_from_generators(order, [x]) == ideal:
                    return [x]
        else:
            for i, x in enumerate(candidates):
                for y in candidates[i + 1:]:
                    if ideal_from_generators(order, [x, y]) == ideal:
                        return [x, y]
    return None


# ---------------------------------------------------------------------------
# bounded universe over S
# ---------------------------------------------------------------------------

class OrderUniverse(BoundedUniverse):
    """Elements of S whose coordinates lie in a box; products via the multiplication matrix.

    ``value_bound`` optionally drops elements whose real value exceeds it,
    which thins the box down to a strip near the hyperplane of value 0.
    """

    def __init__(self, order: RealOrder, bounds: int | Sequence[int], value_bound: float | None = None):
        d = order.degree
        if isinstance(bounds, int):
            bounds = [bounds] * d
        bounds = [int(b) for b in bounds]
        if len(bounds) != d or min(bounds) < 0:
            raise InvalidInputError("one nonnegative bound per coordinate is required")
        widths = [2 * b + 1 for b in bounds]
        total = math.prod(widths)
        if total > 2_000_000:
            raise ResourceError(f"coordinate box has {total} points")
        self.order = order
        self.bounds = np.array(bounds, dtype=np.int64)
        self.commutative = True
        grids = np.indices(widths).reshape(d, -1).T - self.bounds
        vals = grids.astype(float) @ order.float_basis()
        keep = vals > 1e-9
        near = np.abs(vals) <= 1e-6
        for i in np.nonzero(near)[0]:
            keep[i] = order.field.sign_of(tuple(int(c) for c in grids[i])) >= 0
        if value_bound is not None:
            # membership only has to be consistent, not exact, at the upper edge
            keep &= vals <= value_bound
        self.coords = grids[keep]
        self.size = len(self.coords)
        self._strides = np.cumprod([1] + widths[:-1]).astype(np.int64)
        self._lookup = np.full(total, -1, dtype=np.int64)
        self._lookup[self._box_index(self.coords)] = np.arange(self.size)

    def _box_index(self, c: np.ndarray) -> np.ndarray:
        return (c + self.bounds) @ self._strides

    def _locate(self, c: np.ndarray) -> np.ndarray:
        inside = np.all(np.abs(c) <= self.bounds, axis=1)
        out = np.full(len(c), -1, dtype=np.int64)
        out[inside] = self._lookup[self._box_index(c[inside])]
        return out

    def image_row(self, op, x):
        cx = self.coords[x]
        if op == "add":
            return self._locate(self.coords + cx)
        mm = np.array(self.order.mul_matrix(self.element(x)), dtype=np.int64)
        return self._locate(self.coords @ mm.T)

    def build_image_table(self) -> np.ndarray:
        c = self.coords
        n, d = c.shape
        sums = self._locate((c[:, None, :] + c[None, :, :]).reshape(-1, d)).reshape(n, n)
        basis = [self.order.mul_matrix(self.order.element([0] * i + [1])) for i in range(d)]
        t = np.array(basis, dtype=np.int64)  # t[i] multiplies by theta^i
        prods = np.einsum("xi,ijk,yk->xyj", c, t, c).reshape(-1, d)
        prods = self._locate(prods).reshape(n, n)
        return np.concatenate([sums, prods], axis=1)

    def index(self, element):
        c = np.array([element.coords], dtype=np.int64)
        i = int(self._locate(c)[0])
        if i < 0:
            raise InvalidInputError(f"{element} is outside the universe")
        return i

    def contains(self, element) -> bool:
        return int(self._locate(np.array([element.coords], dtype=np.int64))[0]) >= 0

    def element(self, i):
        return self.order.element(int(c) for c in self.coords[i])
