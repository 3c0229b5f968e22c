"""Exact integer and rational matrix helpers.

Matrices are tuples of row tuples of Python ints (or Fractions where noted).
Nothing in here uses floating point.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from operator import mul
from typing import Sequence

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp

IntMatrix = tuple[tuple[int, ...], ...]


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(zip(*m)) if m else ()


def dot(u: Sequence, v: Sequence):
    return sum(map(mul, u, v))


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(map(mul, row, v)) for row in m)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    cols = transpose(b)
    return tuple(tuple(sum(map(mul, row, c)) for c in cols) for row in a)


def bilinear(g: Sequence[Sequence], u: Sequence, v: Sequence):
    """Return ``u^T g v``."""
    return dot(u, matvec(g, v))


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Integer determinant by Bareiss fraction-free elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def smith_decomposition(m: Sequence[Sequence[int]], ncols: int | None = None):
    """Return ``(diagonal, U, V)`` with ``U @ m @ V`` in Smith normal form.

    ``diagonal`` lists the nonzero invariant factors in divisibility order;
    they occupy the leading diagonal positions of the normal form. ``U`` and
    ``V`` are unimodular integer matrices. ``ncols`` is needed when ``m`` has
    no rows.
    """
    rows = len(m)
    cols = len(m[0]) if rows else (ncols or 0)
    if rows == 0 or cols == 0:
        return [], identity(rows), identity(cols)
    s, u, v = smith_normal_decomp(Matrix(m), domain=ZZ)
    diag = []
    for i in range(min(rows, cols)):
        d = int(s[i, i])
        if d == 0:
            break
        diag.append(abs(d))
    # sympy may leave negative units on the diagonal; fold the sign into U
    u_rows = [[int(x) for x in u.row(i)] for i in range(rows)]
    for i in range(len(diag)):
        if int(s[i, i]) < 0:
            u_rows[i] = [-x for x in u_rows[i]]
    v_mat = tuple(tuple(int(x) for x in v.row(i)) for i in range(cols))
    return diag, tuple(map(tuple, u_rows)), v_mat


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix (including units)."""
    return smith_decomposition(m)[0]


def integer_kernel(m: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Basis of ``{x in Z^ncols : m x = 0}``; the result is saturated."""
    if not m:
        return list(identity(ncols))
    diag, _, v = smith_decomposition(m, ncols)
    r = len(diag)
    cols = transpose(v)
    return [tuple(c) for c in cols[r:]]


def solve_integral(columns: Sequence[Sequence[int]], target: Sequence[int]):
    """Solve ``sum c_i columns[i] = target``.

    Returns ``("integral", c)`` when an integer solution exists,
    ``("rational", None)`` when ``target`` only lies in the rational span and
    ``("none", None)`` otherwise.
    """
    k = len(columns)
    n = len(target)
    if k == 0:
        return ("integral", ()) if not any(target) else ("none", None)
    a = transpose(columns)  # n x k
    diag, u, v = smith_decomposition(a)
    ut = matvec(u, target)
    r = len(diag)
    if any(ut[i] for i in range(r, n)):
        return "none", None
    y = [0] * k
    for i, d in enumerate(diag):
        if ut[i] % d:
            return "rational", None
        y[i] = ut[i] // d
    return "integral", matvec(v, y)


def congruence_diagonalize(g: Sequence[Sequence[int]]):
    """Symmetric congruence diagonalization over the rationals.

    Returns ``(diag, columns)`` where ``columns`` are rational vectors
    ``p_0..p_{n-1}`` forming a basis with ``p_i^T g p_j = 0`` for ``i != j``
    and ``p_i^T g p_i = diag[i]``. Pivots are chosen at the first usable
    index; when every remaining diagonal entry vanishes the first nonzero
    off-diagonal entry ``(i, j)`` is folded into the diagonal by adding
    basis vector ``j`` to basis vector ``i``.
    """
    n = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    p = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]  # columns

    def add_col(dst, src, c):
        # basis change p_dst += c * p_src, applied congruently to a
        for r in range(n):
            a[r][dst] += c * a[r][src]
        for r in range(n):
            a[dst][r] += c * a[src][r]
        pd, ps = p[dst], p[src]
        for r in range(n):
            pd[r] += c * ps[r]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        p[i], p[j] = p[j], p[i]

    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n)
                         if a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            add_col(i, j, 1)
            piv = i
        if piv != k:
            swap(piv, k)
        akk = a[k][k]
        for r in range(k + 1, n):
            if a[r][k] != 0:
                add_col(r, k, -a[r][k] / akk)
    diag = [a[i][i] for i in range(n)]
    return diag, [tuple(col) for col in p]


def primitive_integer(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = reduce(lcm, (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def rational_inverse(m: Sequence[Sequence]) -> tuple:
    """Gauss-Jordan inverse over the rationals; raises on singular input."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                c = a[i][k]
                a[i] = [x - c * y for x, y in zip(a[i], a[k])]
    return tuple(tuple(row[n:]) for row in a)


def integer_inverse(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Inverse of a unimodular integer matrix."""
    inv = rational_inverse(m)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def echelon_rows(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Integer row echelon form (Hermite-style) of the span of ``vectors``."""
    rows: list[list[int]] = []
    for v in vectors:
        _insert_row(rows, list(v))
    return rows


def _insert_row(rows: list[list[int]], v: list[int]) -> None:
    n = len(v)
    i = 0
    while True:
        lead = next((j for j in range(n) if v[j]), None)
        if lead is None:
            return
        while i < len(rows) and _lead(rows[i]) < lead:
            i += 1
        if i == len(rows) or _lead(rows[i]) > lead:
            if v[lead] < 0:
                v = [-x for x in v]
            rows.insert(i, v)
            return
        # same pivot column: extended gcd combination
        r = rows[i]
        a, b = r[lead], v[lead]
        g, x, y = _xgcd(a, b)
        new_r = [x * p + y * q for p, q in zip(r, v)]
        new_v = [(a // g) * q - (b // g) * p for p, q in zip(r, v)]
        rows[i] = new_r
        v = new_v


def _lead(row: Sequence[int]) -> int:
    return next(j for j, x in enumerate(row) if x)


def _xgcd(a: int, b: int):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def in_integer_span(vectors: Sequence[Sequence[int]], target: Sequence[int]) -> bool:
    """Decide whether ``target`` is an integer combination of ``vectors``."""
    rows = echelon_rows(vectors)
    t = list(target)
    for r in rows:
        lead = _lead(r)
        if t[lead] % r[lead]:
            return False
        q = t[lead] // r[lead]
        if q:
            t = [x - q * y for x, y in zip(t, r)]
    return not any(t)
