"""Isometries, reflections and the real spinor norm.

Sign convention for the spinor norm: a reflection in a vector of NEGATIVE
square has spinor norm +1, a reflection in a vector of positive square has
spinor norm -1. Equivalently the norm is taken with respect to ``-Q``. With
this convention every reflection in a (-2)-class is in the kernel, which is
what the monodromy group generated by such reflections requires.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache, reduce
from math import gcd
from operator import mul
from typing import Sequence

from . import linalg
from .errors import (NotIntegralReflectionError, IsotropicRootError, ParameterError,
                     UnsupportedError, UsageError)
from .lattice import Lattice, LatticeVector, enumerate_roots, signature


class SpinorSign(IntEnum):
    PLUS = 1
    MINUS = -1

    def __str__(self):
        return "+1" if self is SpinorSign.PLUS else "-1"


def preserves_form(matrix: Sequence[Sequence[int]], lattice: Lattice) -> bool:
    """Exact check of ``M^T G M == G``."""
    g = lattice.gram
    n = lattice.rank
    if len(matrix) != n or any(len(row) != n for row in matrix):
        return False
    gm = []
    for i in range(n):
        row = [0] * n
        for j, gij in enumerate(g[i]):
            if gij:
                mj = matrix[j]
                for k in range(n):
                    row[k] += gij * mj[k]
        gm.append(row)
    mt = linalg.transpose(matrix)
    gmt = linalg.transpose(gm)
    for i in range(n):
        ci = mt[i]
        for j in range(i, n):
            if sum(map(mul, ci, gmt[j])) != g[i][j]:
                return False
    return True


def is_isometry(matrix: Sequence[Sequence[int]], lattice: Lattice) -> bool:
    """True when ``matrix`` is an integral isometry of ``lattice``."""
    if not all(isinstance(x, int) for row in matrix for x in row):
        return False
    if not preserves_form(matrix, lattice):
        return False
    if lattice.determinant == 0:
        return abs(linalg.determinant(matrix)) == 1
    return True


@dataclass(frozen=True, eq=False)
class Isometry:
    """Integral isometry acting on coordinate columns: ``v -> matrix @ v``."""

    matrix: tuple[tuple[int, ...], ...]
    lattice: Lattice

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if not is_isometry(m, self.lattice):
            raise ParameterError("matrix does not preserve the Gram form")

    def __eq__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        return self.matrix == other.matrix and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.matrix)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return compose(self, other)

    def __call__(self, v: LatticeVector) -> LatticeVector:
        return apply(self, v)

    def is_identity(self) -> bool:
        return self.matrix == linalg.identity(self.lattice.rank)


def identity(l: Lattice) -> Isometry:
    return Isometry(linalg.identity(l.rank), l)


def reflection(v: LatticeVector) -> Isometry:
    """``x -> x - (2 x.v / v.v) v``; for ``v.v = -2`` this is ``x + (x.v) v``."""
    l = v.lattice
    q = v.square
    if q == 0:
        raise IsotropicRootError("cannot reflect in an isotropic vector")
    gv = l.functional(v.coords)
    if any((2 * x) % q for x in gv):
        raise NotIntegralReflectionError(
            f"square {q} does not divide 2(b_i.v) for every basis vector")
    c = [2 * x // q for x in gv]
    n = l.rank
    m = tuple(tuple(int(i == j) - v.coords[i] * c[j] for j in range(n)) for i in range(n))
    return Isometry(m, l)


def _check_same(a: Isometry, b) -> None:
    if a.lattice != b.lattice:
        raise UsageError("objects belong to different lattices")


def compose(a: Isometry, b: Isometry) -> Isometry:
    """``a o b``: apply ``b`` first."""
    _check_same(a, b)
    return Isometry(linalg.matmul(a.matrix, b.matrix), a.lattice)


@lru_cache(maxsize=64)
def _adjugate(gram):
    det = linalg.determinant(gram)
    inv = linalg.rational_inverse(gram)
    return tuple(tuple(int(x * det) for x in row) for row in inv), det


def inverse(a: Isometry) -> Isometry:
    l = a.lattice
    if l.determinant != 0:
        # M^{-1} = G^{-1} M^T G
        adj, det = _adjugate(l.gram)
        num = linalg.matmul(adj, linalg.matmul(linalg.transpose(a.matrix), l.gram))
        m = tuple(tuple(x // det for x in row) for row in num)
    else:
        m = linalg.integer_inverse(a.matrix)
    return Isometry(m, l)


def apply(a: Isometry, v: LatticeVector) -> LatticeVector:
    _check_same(a, v)
    return LatticeVector(linalg.matvec(a.matrix, v.coords), a.lattice)


def conjugate(g: Isometry, h: Isometry) -> Isometry:
    """``g o h o g^{-1}``."""
    return compose(g, compose(h, inverse(g)))


# ---------------------------------------------------------------------------
# spinor norm

def _reflect_scaled(y, den, v, gv, qv):
    """Reflect the rational vector ``y/den`` in ``v``; returns a new pair."""
    t = 2 * sum(map(mul, y, gv))
    ny = [qv * a - t * b for a, b in zip(y, v)]
    nd = den * qv
    g = reduce(gcd, ny, nd)
    if nd < 0:
        g = -g
    return [a // g for a in ny], nd // g


def reflection_factorization(a: Isometry) -> list[tuple[tuple[int, ...], int]]:
    """Cartan-Dieudonne factorization of ``a`` on the quotient by the radical.

    Returns pairs ``(v, v.v)`` of primitive integral vectors such that ``a``
    agrees with ``r_{v_1} o r_{v_2} o ... o r_{v_k}`` modulo the radical,
    ``r_v`` the rational reflection in ``v``. Each orthogonal basis vector
    ``w`` is fixed in turn: reflect in ``h(w) - w`` when it is anisotropic,
    otherwise in ``h(w) + w`` followed by ``w`` itself.
    """
    l = a.lattice
    g = l.gram
    m = a.matrix
    steps: list[tuple[tuple[int, ...], tuple[int, ...], int]] = []  # (v, Gv, v.v)
    for w, _ in l.orthogonal_basis:
        y, den = list(linalg.matvec(m, w)), 1
        for v, gv, qv in steps:
            y, den = _reflect_scaled(y, den, v, gv, qv)
        d = [yi - den * wi for yi, wi in zip(y, w)]
        gd = linalg.matvec(g, d)
        if not any(gd):
            continue
        qd = sum(map(mul, d, gd))
        if qd != 0:
            v = linalg.primitive_integer(d)
            gv = linalg.matvec(g, v)
            steps.append((v, gv, sum(map(mul, v, gv))))
        else:
            s = linalg.primitive_integer([yi + den * wi for yi, wi in zip(y, w)])
            gs = linalg.matvec(g, s)
            steps.append((s, gs, sum(map(mul, s, gs))))
            gw = linalg.matvec(g, w)
            steps.append((tuple(w), gw, sum(map(mul, w, gw))))
    return [(v, q) for v, _, q in steps]


def real_spinor_norm(a: Isometry) -> SpinorSign:
    """Product of ``sign(-v.v)`` over a reflection factorization of ``a``."""
    sign = 1
    for _, q in reflection_factorization(a):
        if q > 0:
            sign = -sign
    return SpinorSign(sign)


def orientation_character(a: Isometry) -> SpinorSign:
    """Whether ``a`` preserves the orientation of maximal positive subspaces.

    Independent route to the same character as :func:`real_spinor_norm`: for
    a positive definite subspace ``W`` (spanned by the positive vectors of
    the orthogonal basis) the sign of ``det(w_i . a(w_j))`` decides whether
    projecting ``a(W)`` back onto ``W`` keeps the orientation.
    """
    l = a.lattice
    pos = [w for w, q in l.orthogonal_basis if q > 0]
    if not pos:
        return SpinorSign.PLUS
    images = [linalg.matvec(a.matrix, w) for w in pos]
    x = [[l.pair(wi, aw) for aw in images] for wi in pos]
    d = linalg.determinant(x)
    return SpinorSign.PLUS if d > 0 else SpinorSign.MINUS


def is_in_O_prime_k(a: Isometry, k: LatticeVector) -> bool:
    """Fixes ``k`` and has positive real spinor norm."""
    _check_same(a, k)
    if not is_isometry(a.matrix, a.lattice):
        return False
    return apply(a, k) == k and real_spinor_norm(a) is SpinorSign.PLUS


# ---------------------------------------------------------------------------
# finite orthogonal groups

MAX_ENUMERATION_RANK = 8


def enumerate_orthogonal_group(l: Lattice) -> list[Isometry]:
    """All isometries of a definite lattice of rank at most 8.

    Backtracking: basis vector ``b_i`` is sent to a vector of square
    ``G_ii`` whose products with the images already chosen match the Gram
    matrix. Candidates are tried in lexicographic order.
    """
    sig = signature(l)
    if sig.zero or (sig.positive and sig.negative):
        raise UnsupportedError("orthogonal group enumeration needs a definite lattice")
    if l.rank > MAX_ENUMERATION_RANK:
        raise UnsupportedError(f"rank {l.rank} exceeds the enumeration cap {MAX_ENUMERATION_RANK}")
    n = l.rank
    g = l.gram
    cache = {}
    cands = []
    for i in range(n):
        if g[i][i] not in cache:
            cache[g[i][i]] = [v.coords for v in enumerate_roots(l, g[i][i], None)]
        cands.append(cache[g[i][i]])
    functionals = {}

    def fn(v):
        if v not in functionals:
            functionals[v] = l.functional(v)
        return functionals[v]

    images: list[tuple[int, ...]] = []
    out = []

    def rec(i):
        if i == n:
            m = linalg.transpose(images)
            out.append(Isometry(m, l))
            return
        for v in cands[i]:
            fv = fn(v)
            if all(sum(map(mul, fv, images[j])) == g[i][j] for j in range(i)):
                images.append(v)
                rec(i + 1)
                images.pop()

    rec(0)
    return out
