"""Bounded universes: finite windows onto infinite semirings, with partial operations.

A universe enumerates finitely many elements of some semiring and can produce,
for any element ``x``, the vector of indices of ``x + r`` (or ``x * r``) over
all ``r`` in the universe, with -1 wherever the result falls outside.
``bounded_closure`` computes the least equivalence closed under every
translation whose inputs and outputs stay inside the universe.  Anything it
relates is related in the true congruence; the converse can fail.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, ResourceError
from .semiring import BoolPolynomial, FiniteSemiring


class BoundedUniverse:
    """Base class.  Subclasses set ``size`` and ``commutative`` and implement the hooks."""

    size: int
    commutative: bool = True

    def image_row(self, op: str, x: int) -> np.ndarray:
        """Indices of x+r ('add'), x*r ('mul') or r*x ('rmul') for all r; -1 if undefined."""
        raise NotImplementedError

    def index(self, element) -> int:
        raise NotImplementedError

    def element(self, i: int):
        raise NotImplementedError

    def describe(self, i: int) -> str:
        return str(self.element(i))

    def ops(self) -> tuple[str, ...]:
        return ("add", "mul") if self.commutative else ("add", "mul", "rmul")

    def images(self, x: int) -> np.ndarray:
        """All translation images of x, one block of length ``size`` per op."""
        table = self._image_table()
        if table is not None:
            return table[x]
        return np.concatenate([self.image_row(op, x) for op in self.ops()])

    # Tables up to this many entries are built once and reused.
    TABLE_LIMIT = 40_000_000

    def _image_table(self) -> np.ndarray | None:
        table = getattr(self, "_table", None)
        if table is None and self.size * self.size * len(self.ops()) <= self.TABLE_LIMIT:
            table = self.build_image_table()
            self._table = table
        return table

    def build_image_table(self) -> np.ndarray:
        return np.stack([np.concatenate([self.image_row(op, x) for op in self.ops()])
                         for x in range(self.size)])


class FiniteUniverse(BoundedUniverse):
    """A finite semiring viewed as a (total) universe."""

    def __init__(self, s: FiniteSemiring):
        self.semiring = s
        self.size = s.size
        self.commutative = s.is_commutative()
        self._add, self._mul = s.arrays()

    def image_row(self, op, x):
        if op == "add":
            return self._add[x]
        if op == "mul":
            return self._mul[x]
        return self._mul[:, x]

    def index(self, element):
        if not 0 <= int(element) < self.size:
            raise InvalidInputError(f"{element} is not an element")
        return int(element)

    def element(self, i):
        return i

    def describe(self, i):
        return self.semiring.label(i)


class NatUniverse(BoundedUniverse):
    """{0, 1, ..., bound} inside (N, +, *)."""

    def __init__(self, bound: int):
        if bound < 1:
            raise InvalidInputError("bound must be positive")
        self.bound = bound
        self.size = bound + 1
        self._r = np.arange(self.size, dtype=np.int64)

    def image_row(self, op, x):
        v = x + self._r if op == "add" else x * self._r
        return np.where(v <= self.bound, v, -1)

    def index(self, element):
        e = int(element)
        if not 0 <= e <= self.bound:
            raise InvalidInputError(f"{e} lies outside N <= {self.bound}")
        return e

    def element(self, i):
        return int(i)


class BoolPolyUniverse(BoundedUniverse):
    """Polynomials of degree <= D in B[X], indexed by their support bitmask."""

    def __init__(self, degree_bound: int):
        if degree_bound < 0:
            raise InvalidInputError("degree bound must be nonnegative")
        if degree_bound > 16:
            raise ResourceError("degree bound above 16 is outside the desk-scale budget")
        self.degree_bound = degree_bound
        self.size = 1 << (degree_bound + 1)
        r = np.arange(self.size, dtype=np.int64)
        self._r = r
        deg = np.full(self.size, -1, dtype=np.int64)
        for i in range(degree_bound + 1):
            deg[r >> i & 1 == 1] = i
        self._deg = deg

    def image_row(self, op, x):
        if op == "add":
            return x | self._r
        if x == 0:
            return np.zeros(self.size, dtype=np.int64)
        out = np.zeros(self.size, dtype=np.int64)
        for i in range(int(x).bit_length()):
            if x >> i & 1:
                out |= self._r << i
        ok = self._deg + (int(x).bit_length() - 1) <= self.degree_bound
        return np.where(ok, out, -1)

    def index(self, element):
        m = element.mask() if isinstance(element, BoolPolynomial) else int(element)
        if not 0 <= m < self.size:
            raise InvalidInputError(f"{element} exceeds degree bound {self.degree_bound}")
        return m

    def element(self, i):
        return BoolPolynomial.from_mask(int(i))


def bounded_closure(universe: BoundedUniverse, gens: Iterable[Sequence], budget: int = 200_000,
                    until: Iterable[Sequence] | None = None):
    """Restricted congruence closure of ``gens`` inside ``universe``.

    ``budget`` caps the number of class merges; exceeding it raises
    ResourceError with the partial partition attached.  With ``until``, the
    run stops as soon as every listed pair is related; the returned partition
    is then flagged ``complete=False`` unless the fixpoint was reached anyway.
    """
    from .congruence import CongruencePartition

    u = universe
    n = u.size
    pairs = [(u.index(a), u.index(b)) for a, b in gens]
    targets = [(u.index(a), u.index(b)) for a, b in until] if until is not None else None
    label = np.arange(n, dtype=np.int64)
    members: dict[int, list[int]] = {}
    vecs: dict[int, np.ndarray] = {}

    def vec(c: int) -> np.ndarray:
        got = vecs.get(c)
        return got if got is not None else u.images(c)

    def done() -> bool:
        return targets is not None and all(label[a] == label[b] for a, b in targets)

    queue = deque(pairs)
    merges = 0
    stopped = done()
    while queue and not stopped:
        a, b = queue.popleft()
        ca, cb = int(label[a]), int(label[b])
        if ca == cb:
            continue
        merges += 1
        if merges > budget:
            partial = CongruencePartition.from_labels(label.tolist(), complete=False)
            raise ResourceError(f"bounded closure exceeded {budget} merges", partial)
        ma, mb = members.get(ca, [ca]), members.get(cb, [cb])
        if len(ma) < len(mb):
            ca, cb, ma, mb = cb, ca, mb, ma
        va, vb = vec(ca), vec(cb)
        both = (va >= 0) & (vb >= 0)
        xa, xb = va[both], vb[both]
        la, lb = label[xa], label[xb]
        diff = la != lb
        if diff.any():
            _, first = np.unique(la[diff] * n + lb[diff], return_index=True)
            queue.extend(zip(xa[diff][first].tolist(), xb[diff][first].tolist()))
        merged = np.where(va >= 0, va, vb)
        label[mb] = ca
        members[ca] = ma + mb
        members.pop(cb, None)
        vecs.pop(cb, None)
        vecs[ca] = merged
        stopped = done()
    complete = not queue
    return CongruencePartition.from_labels(label.tolist(), complete=complete, steps=merges)
