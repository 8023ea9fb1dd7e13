"""Exact arithmetic in a real number field Q(theta).

A field is described by a monic integer polynomial together with the index
of one of its real roots (in increasing order).  Elements are coordinate
vectors in the power basis 1, theta, ..., theta^(d-1).  Signs are decided
exactly: interval evaluation over an isolating interval of theta, bisected
until the enclosure excludes zero.  All isolating intervals have dyadic
endpoints, so the interval evaluation runs on plain integers.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import ConsistencyError, InvalidInputError

Rational = Union[int, Fraction]

# A nonzero element must separate from 0 long before this many bisections.
_MAX_REFINE_BITS = 20000


# ---------------------------------------------------------------------------
# integer / rational polynomials (coefficients lowest degree first)
# ---------------------------------------------------------------------------

def trim(coeffs: Iterable) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(p: Sequence) -> int:
    return len(trim(p)) - 1


def poly_eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Sequence) -> tuple:
    return trim(i * c for i, c in enumerate(p) if i > 0)


def _qdivmod(a: Sequence, b: Sequence):
    a = [Fraction(c) for c in trim(a)]
    b = [Fraction(c) for c in trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        t = a[-1] / lead
        q[shift] = t
        for i, c in enumerate(b):
            a[shift + i] -= t * c
        a = list(trim(a))
    return trim(q), trim(a)


def _qgcd(a: Sequence, b: Sequence) -> tuple:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, _qdivmod(a, b)[1]
    if not a:
        return ()
    lead = Fraction(a[-1])
    return tuple(Fraction(c) / lead for c in a)


def primitive(p: Sequence) -> tuple:
    """Scale a rational polynomial to a primitive integer one with positive lead."""
    p = trim(Fraction(c) for c in p)
    if not p:
        return ()
    den = 1
    for c in p:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    if ints[-1] < 0:
        g = -g
    return tuple(c // g for c in ints)


def squarefree_part(p: Sequence) -> tuple:
    p = trim(p)
    if len(p) <= 1:
        return primitive(p)
    g = _qgcd(p, derivative(p))
    q, r = _qdivmod(p, g)
    assert not r
    return primitive(q)


def sturm_sequence(p: Sequence) -> list:
    seq = [primitive(p)]
    d = derivative(seq[0])
    if not d:
        return seq
    seq.append(primitive(d))
    while True:
        r = _qdivmod(seq[-2], seq[-1])[1]
        if not r:
            return seq
        # primitive() keeps the sign of the leading coefficient, so negate
        # explicitly to preserve the Sturm sign pattern.
        pr = primitive(r)
        lead_sign = 1 if r[-1] > 0 else -1
        seq.append(tuple(-lead_sign * c for c in pr))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_changes(seq: Sequence[Sequence], x) -> int:
    signs = [s for s in (_sign(poly_eval(q, x)) for q in seq) if s]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sturm_count(seq: Sequence[Sequence], a, b) -> int:
    """Number of distinct roots in the half-open interval (a, b]."""
    return sign_changes(seq, a) - sign_changes(seq, b)


def cauchy_bound(p: Sequence) -> int:
    """An integer strictly greater than the absolute value of every root."""
    p = trim(p)
    lead = abs(Fraction(p[-1]))
    m = max((abs(Fraction(c)) / lead for c in p[:-1]), default=Fraction(0))
    return math.floor(m) + 2


# ---------------------------------------------------------------------------
# real root isolation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RealRoot:
    """A real root of ``poly`` isolated in [lo, hi] (lo == hi for rational roots)."""

    poly: tuple
    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def refine(self) -> "RealRoot":
        if self.exact:
            return self
        mid = (self.lo + self.hi) / 2
        vm = _sign(poly_eval(self.poly, mid))
        if vm == 0:
            return RealRoot(self.poly, mid, mid)
        if vm == _sign(poly_eval(self.poly, self.lo)):
            return RealRoot(self.poly, mid, self.hi)
        return RealRoot(self.poly, self.lo, mid)

    def refined_to(self, width) -> "RealRoot":
        r = self
        while r.hi - r.lo > width:
            r = r.refine()
        return r

    def __float__(self) -> float:
        return float((self.lo + self.hi) / 2)


def isolate_real_roots(p: Sequence[int]) -> list[RealRoot]:
    """Isolating intervals for the distinct real roots of ``p``, increasing."""
    p = trim(p)
    if not p:
        raise InvalidInputError("cannot isolate roots of the zero polynomial")
    p = squarefree_part(p)
    if len(p) <= 1:
        return []
    if len(p) == 2:
        r = Fraction(-p[0], p[1])
        return [RealRoot(p, r, r)]
    seq = sturm_sequence(p)
    bound = Fraction(cauchy_bound(p))
    roots: list[RealRoot] = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        n = sturm_count(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            roots.append(RealRoot(p, a, b))
            continue
        m = (a + b) / 2
        if poly_eval(p, m) == 0:
            roots.append(RealRoot(p, m, m))
            h = (b - a) / 4
            while True:
                lo, hi = m - h, m + h
                if poly_eval(p, lo) and poly_eval(p, hi) and sturm_count(seq, lo, hi) == 1:
                    break
                h /= 2
            stack.append((a, lo))
            stack.append((hi, b))
        else:
            stack.append((a, m))
            stack.append((m, b))
    roots.sort(key=lambda r: r.lo)
    return roots


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TERM_BODY = re.compile(r"(\d+(?:/\d+)?)?\*?(?:([A-Za-z])(?:\^(\d+))?)?")


def parse_expression(text: str) -> tuple[str | None, dict[int, Fraction]]:
    """Parse a sum of monomials such as ``"x^2-2"`` or ``"1/2+3w"``.

    Returns the variable name (None for a constant) and a degree -> coefficient map.
    """
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise InvalidInputError("empty expression")
    var = None
    coeffs: dict[int, Fraction] = {}
    pos = 0
    for m in re.finditer(r"([+-]?)([^+-]+)", s):
        if m.start() != pos:
            raise InvalidInputError(f"cannot parse expression {text!r}")
        pos = m.end()
        sgn, body = m.groups()
        bm = _TERM_BODY.fullmatch(body)
        if bm is None or not (bm.group(1) or bm.group(2)):
            raise InvalidInputError(f"cannot parse term {body!r} in {text!r}")
        c = Fraction(bm.group(1)) if bm.group(1) else Fraction(1)
        if sgn == "-":
            c = -c
        if bm.group(2):
            if var is not None and bm.group(2) != var:
                raise InvalidInputError(f"mixed variables in {text!r}")
            var = bm.group(2)
            k = int(bm.group(3)) if bm.group(3) else 1
        else:
            if bm.group(3):
                raise InvalidInputError(f"cannot parse term {body!r}")
            k = 0
        coeffs[k] = coeffs.get(k, Fraction(0)) + c
    if pos != len(s):
        raise InvalidInputError(f"cannot parse expression {text!r}")
    return var, coeffs


def parse_polynomial(text: str) -> tuple:
    """Integer polynomial from text, e.g. ``"x^2-2"`` -> (-2, 0, 1)."""
    _, coeffs = parse_expression(text)
    if not coeffs:
        return ()
    out = [Fraction(0)] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        out[k] += c
    if any(c.denominator != 1 for c in out):
        raise InvalidInputError(f"polynomial {text!r} must have integer coefficients")
    return trim(int(c) for c in out)


def format_polynomial(coeffs: Sequence, var: str = "x") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    return head + "".join(f"{s}{b}" for s, b in terms[1:])


def parse_field_spec(text: str) -> "NumberField":
    """``"x^2-2@1"`` -> Q(sqrt 2) embedded at its larger real root."""
    if "@" in text:
        poly_text, idx_text = text.rsplit("@", 1)
        try:
            idx = int(idx_text)
        except ValueError:
            raise InvalidInputError(f"bad root index in field spec {text!r}") from None
    else:
        poly_text, idx = text, 0
    return NumberField(parse_polynomial(poly_text), idx)


# ---------------------------------------------------------------------------
# the field
# ---------------------------------------------------------------------------

def _to_dyadic(x: Fraction) -> tuple[int, int]:
    den = x.denominator
    k = den.bit_length() - 1
    if den != 1 << k:
        raise ConsistencyError(f"non-dyadic isolating endpoint {x}")
    return x.numerator, k


def _int_interval_horner(coeffs: Sequence[int], lo: int, hi: int, k: int) -> tuple[int, int]:
    """Enclosure of 2^(k*n) * sum c_i t^i for t in [lo/2^k, hi/2^k], n = len-1."""
    n = len(coeffs) - 1
    a = b = coeffs[n]
    for i in range(n - 1, -1, -1):
        ps = (a * lo, a * hi, b * lo, b * hi)
        add = coeffs[i] << (k * (n - i))
        a, b = min(ps) + add, max(ps) + add
    return a, b


class NumberField:
    """Q(theta) for a monic irreducible integer polynomial and a chosen real root."""

    def __init__(self, poly: Sequence[int], root_index: int = 0, check: bool = True):
        p = trim(int(c) for c in poly)
        if len(p) < 2:
            raise InvalidInputError("minimal polynomial must have degree >= 1")
        if p[-1] != 1:
            raise InvalidInputError(f"minimal polynomial {format_polynomial(p)} is not monic")
        self.poly = p
        self.degree = len(p) - 1
        roots = isolate_real_roots(p)
        if not roots:
            raise InvalidInputError(f"{format_polynomial(p)} has no real root")
        if not 0 <= root_index < len(roots):
            raise InvalidInputError(
                f"root index {root_index} out of range: {format_polynomial(p)} has {len(roots)} real roots")
        if check:
            check_minimal_polynomial(p, roots)
        self.root_index = root_index
        self.root = roots[root_index]
        self._lock = threading.Lock()
        self._reset_interval(self.root)

    def _reset_interval(self, root: RealRoot) -> None:
        if root.exact:
            self._exact = root.lo
            return
        self._exact = None
        lo, klo = _to_dyadic(root.lo)
        hi, khi = _to_dyadic(root.hi)
        k = max(klo, khi)
        self._iv = (lo << (k - klo), hi << (k - khi), k)
        self._sign_lo = _sign(poly_eval(self.poly, root.lo))

    # identity --------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, NumberField) and (self.poly, self.root_index) == (
            other.poly, other.root_index)

    def __hash__(self):
        return hash((self.poly, self.root_index))

    def __repr__(self):
        return f"NumberField({self.spec()!r})"

    def spec(self, var: str = "x") -> str:
        return f"{format_polynomial(self.poly, var)}@{self.root_index}"

    # construction ----------------------------------------------------------
    def element(self, coords: Iterable[Rational]) -> "FieldElement":
        c = [Fraction(x) for x in coords]
        if len(c) > self.degree:
            c = list(self._reduce(c))
        c += [Fraction(0)] * (self.degree - len(c))
        return FieldElement(self, tuple(c))

    def from_rational(self, q: Rational) -> "FieldElement":
        return self.element([q])

    @property
    def zero(self) -> "FieldElement":
        return self.from_rational(0)

    @property
    def one(self) -> "FieldElement":
        return self.from_rational(1)

    @property
    def gen(self) -> "FieldElement":
        return self.element([0, 1])

    def coerce(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field != self:
                raise InvalidInputError("elements of different fields")
            return x
        if isinstance(x, (int, Fraction)):
            return self.from_rational(x)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")

    def parse(self, text: str) -> "FieldElement":
        """Parse a polynomial expression in the generator, e.g. ``"1+w"``, ``"3/2*w^2"``."""
        _, coeffs = parse_expression(text)
        if not coeffs:
            return self.zero
        c = [Fraction(0)] * (max(coeffs) + 1)
        for k, v in coeffs.items():
            c[k] += v
        return self.element(c)

    # arithmetic on coordinate tuples ---------------------------------------
    def _reduce(self, c: list) -> tuple:
        c = list(c)
        d, p = self.degree, self.poly
        for top in range(len(c) - 1, d - 1, -1):
            t = c[top]
            if t:
                for i in range(d):
                    c[top - d + i] -= t * p[i]
            c[top] = 0
        c = c[:d] + [0] * max(0, d - len(c))
        return tuple(c)

    def _mul(self, a: Sequence, b: Sequence) -> tuple:
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._reduce(prod)

    def mul_matrix(self, a: Sequence) -> list[list]:
        """Matrix of multiplication by ``a`` (column i = a * theta^i)."""
        d = self.degree
        cols = []
        e = [0] * d
        for i in range(d):
            e = [0] * d
            e[i] = 1
            cols.append(self._mul(a, e))
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    # signs -----------------------------------------------------------------
    def _refine_once(self) -> None:
        lo, hi, k = self._iv
        mid = lo + hi  # at scale k + 1
        vm = _sign(_int_interval_horner(self.poly, mid, mid, k + 1)[0])
        if vm == 0:
            self._exact = Fraction(mid, 1 << (k + 1))
            return
        if vm == self._sign_lo:
            self._iv = (mid, hi << 1, k + 1)
        else:
            self._iv = (lo << 1, mid, k + 1)

    def _integer_coeffs(self, coords: Sequence) -> tuple:
        den = 1
        for c in coords:
            if isinstance(c, Fraction):
                den = den * c.denominator // math.gcd(den, c.denominator)
        return tuple(int(c * den) for c in coords)

    def _enclose_int(self, ints: Sequence[int]):
        """Return (lo, hi, scale_bits, interval) with value in [lo, hi] / 2^scale_bits.

        For a rational root the exact value is returned instead.
        """
        with self._lock:
            exact = self._exact
            iv = None if exact is not None else self._iv
        if exact is not None:
            return poly_eval(ints, exact)
        lo, hi, k = iv
        a, b = _int_interval_horner(ints, lo, hi, k)
        return a, b, k * (len(ints) - 1), iv

    def _refine_from(self, iv) -> None:
        with self._lock:
            # skip if another caller refined concurrently
            if self._exact is None and self._iv == iv:
                self._refine_once()

    def sign_of(self, coords: Sequence) -> int:
        ints = trim(self._integer_coeffs(coords))
        if not ints:
            return 0
        if len(ints) == 1:
            return _sign(ints[0])
        for _ in range(_MAX_REFINE_BITS):
            enc = self._enclose_int(ints)
            if not isinstance(enc, tuple):
                return _sign(enc)
            a, b, _, iv = enc
            if a > 0:
                return 1
            if b < 0:
                return -1
            self._refine_from(iv)
        raise ConsistencyError(
            f"sign undecided after {_MAX_REFINE_BITS} bisections; is {format_polynomial(self.poly)} reducible?")

    def enclosure(self, coords: Sequence, width: Rational) -> tuple[Fraction, Fraction]:
        """A rational interval of width <= ``width`` containing the element's value."""
        ints = self._integer_coeffs(coords)
        den = 1
        for c in coords:
            if isinstance(c, Fraction):
                den = den * c.denominator // math.gcd(den, c.denominator)
        ints = trim(ints)
        if len(ints) <= 1:
            v = Fraction(ints[0] if ints else 0, den)
            return v, v
        for _ in range(_MAX_REFINE_BITS):
            enc = self._enclose_int(ints)
            if not isinstance(enc, tuple):
                v = Fraction(enc) / den
                return v, v
            a, b, s, iv = enc
            lo, hi = Fraction(a, den << s), Fraction(b, den << s)
            if hi - lo <= width:
                return lo, hi
            self._refine_from(iv)
        raise ConsistencyError("enclosure did not converge")


def check_minimal_polynomial(p: Sequence[int], roots: Sequence[RealRoot] | None = None) -> None:
    """Necessary irreducibility tests; complete for degree <= 3.

    Raises InvalidInputError if ``p`` is not squarefree or has a rational root
    (for degree >= 2).
    """
    p = trim(p)
    if len(p) <= 2:
        return
    if len(_qgcd(p, derivative(p))) > 1:
        raise InvalidInputError(f"{format_polynomial(p)} is not squarefree")
    if roots is None:
        roots = isolate_real_roots(p)
    for r in roots:
        if r.exact:
            raise InvalidInputError(f"{format_polynomial(p)} has the rational root {r.lo}")
        r = r.refined_to(Fraction(1, 2))
        for n in range(math.floor(r.lo), math.ceil(r.hi) + 1):
            if poly_eval(p, n) == 0:
                raise InvalidInputError(f"{format_polynomial(p)} has the rational root {n}")


@dataclass(frozen=True, eq=False)
class FieldElement:
    field: NumberField
    coords: tuple

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __hash__(self):
        return hash((self.field, self.coords))

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        return format_polynomial(self.coords, "w")

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other):
        o = self.field.coerce(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self.field.coerce(other))

    def __rsub__(self, other):
        return self.field.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coords))
        o = self.field.coerce(other)
        return FieldElement(self.field, self.field._mul(self.coords, o.coords))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        m = self.field.mul_matrix(self.coords)
        rhs = [Fraction(0)] * self.field.degree
        rhs[0] = Fraction(1)
        return FieldElement(self.field, tuple(_solve_rational(m, rhs)))

    def __truediv__(self, other):
        return self * self.field.coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.field.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sign(self) -> int:
        return self.field.sign_of(self.coords)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def enclosure(self, width: Rational = Fraction(1, 10**6)) -> tuple[Fraction, Fraction]:
        return self.field.enclosure(self.coords, width)

    def __float__(self):
        lo, hi = self.enclosure(Fraction(1, 1 << 60))
        return float((lo + hi) / 2)


def _solve_rational(m: list[list], rhs: list) -> list[Fraction]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


# module-level operation names ------------------------------------------------

def field_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def field_neg(a: FieldElement) -> FieldElement:
    return -a


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def field_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def sign(a: FieldElement) -> int:
    return a.sign()


def floor_ratio(a, b) -> int:
    """The integer m with m*b <= a < (m+1)*b, decided exactly; requires b > 0."""
    if isinstance(a, FieldElement):
        field = a.field
    elif isinstance(b, FieldElement):
        field = b.field
    else:
        a, b = Fraction(a), Fraction(b)
        if b <= 0:
            raise InvalidInputError("floor_ratio requires a positive divisor")
        return math.floor(a / b)
    a, b = field.coerce(a), field.coerce(b)
    if b.sign() <= 0:
        raise InvalidInputError("floor_ratio requires a positive divisor")
    w = Fraction(1, 1 << 20)
    while True:
        alo, ahi = a.enclosure(w)
        blo, bhi = b.enclosure(w)
        if blo > 0:
            qs = (alo / blo, alo / bhi, ahi / blo, ahi / bhi)
            if max(qs) - min(qs) < 2:
                break
        w /= 1 << 20
    m = math.floor(min(qs))
    while (a - b * (m + 1)).sign() >= 0:
        m += 1
    while (a - b * m).sign() < 0:
        m -= 1
    return m
