"""Integer matrix routines: Bareiss determinant, Hermite and Smith normal forms.

Matrices are lists of rows of Python ints unless a function says otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import InvalidInputError


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def solve_rational(columns: Sequence[Sequence[int]], target: Sequence[int]) -> list[Fraction]:
    """Coefficients c with sum_k c_k * columns[k] == target (square, nonsingular)."""
    n = len(columns)
    a = [[Fraction(columns[k][i]) for k in range(n)] + [Fraction(target[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise InvalidInputError("singular basis")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        if pv != 1:
            a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def solve_integer(columns: Sequence[Sequence[int]], target: Sequence[int]) -> list[int]:
    """Integer coefficients of ``target`` in the basis ``columns``; raises if not integral."""
    sol = solve_rational(columns, target)
    if any(x.denominator != 1 for x in sol):
        raise InvalidInputError("target is not in the integer span of the basis")
    return [int(x) for x in sol]


def hnf_columns(generators: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """Hermite normal form of the lattice spanned by ``generators`` (vectors of length ``dim``).

    Returns ``dim`` basis columns forming an upper-triangular matrix H with
    positive diagonal and 0 <= H[i][j] < H[i][i] for j > i.  The lattice must
    have full rank.
    """
    cols = [list(map(int, g)) for g in generators if any(g)]
    pivots: list[list[int] | None] = [None] * dim
    for row in range(dim - 1, -1, -1):
        active = [c for c in cols if c[row] != 0]
        rest = [c for c in cols if c[row] == 0]
        while len(active) > 1:
            active.sort(key=lambda c: abs(c[row]))
            p = active[0]
            nxt = [p]
            for c in active[1:]:
                q = c[row] // p[row]
                c = [x - q * y for x, y in zip(c, p)]
                if c[row] != 0:
                    nxt.append(c)
                elif any(c):
                    rest.append(c)
            active = nxt
        if not active:
            raise InvalidInputError("lattice is not of full rank")
        p = active[0]
        if p[row] < 0:
            p = [-x for x in p]
        pivots[row] = p
        cols = rest
    h = pivots
    for j in range(dim):
        for i in range(j - 1, -1, -1):
            q = h[j][i] // h[i][i]
            if q:
                h[j] = [x - q * y for x, y in zip(h[j], h[i])]
    # h[j] is column j; return as a row-major matrix
    return [[h[j][i] for j in range(dim)] for i in range(dim)]


def hnf_contains(h: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """Membership of ``v`` in the lattice spanned by the columns of HNF matrix ``h``."""
    return hnf_coefficients(h, v) is not None


def hnf_coefficients(h: Sequence[Sequence[int]], v: Sequence[int]) -> list[int] | None:
    """Back-substitution: integer c with H c = v, or None."""
    n = len(h)
    r = list(map(int, v))
    c = [0] * n
    for i in range(n - 1, -1, -1):
        if r[i] % h[i][i]:
            return None
        c[i] = r[i] // h[i][i]
        if c[i]:
            for k in range(i + 1):
                r[k] -= c[i] * h[k][i]
    return c


def hnf_reduce(h: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    """Canonical coset representative of ``v`` modulo the HNF lattice."""
    n = len(h)
    r = list(map(int, v))
    for i in range(n - 1, -1, -1):
        q = r[i] // h[i][i]
        if q:
            for k in range(i + 1):
                r[k] -= q * h[k][i]
    return tuple(r)


def smith_normal_form(m: Sequence[Sequence[int]]):
    """Return (U, D, V) with U*M*V = D diagonal, U and V unimodular.

    Diagonal entries are nonnegative and each divides the next.
    """
    a = [list(map(int, row)) for row in m]
    rows, cols = len(a), len(a[0]) if a else 0
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for r in a:
            r[dst] += f * r[src]
        for r in v:
            r[dst] += f * r[src]

    for t in range(min(rows, cols)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            done = True
            for i in range(t + 1, rows):
                q = a[i][t] // a[t][t]
                if q:
                    add_row(i, t, -q)
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // a[t][t]
                if q:
                    add_col(j, t, -q)
                if a[t][j]:
                    done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def inverse_unimodular(m: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(m)
    cols = []
    for k in range(n):
        e = [int(i == k) for i in range(n)]
        cols.append(solve_integer(transpose(m), e))
    return transpose(cols)
