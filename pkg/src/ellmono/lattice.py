"""Integral bilinear lattices given by a Gram matrix, and their invariants."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from operator import mul
from typing import Iterable, NamedTuple, Sequence

from . import linalg
from .enumeration import FinckePohst, VectorSearch, iter_vectors
from .errors import ParameterError, UsageError


@dataclass(frozen=True, eq=False)
class Lattice:
    """A free integral lattice with symmetric Gram matrix ``gram``."""

    gram: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise ParameterError("Gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise ParameterError(f"Gram matrix is not symmetric at ({i}, {j})")
        labels = self.labels
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise ParameterError("number of labels must equal the rank")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_hash", hash(gram))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Lattice):
            return NotImplemented
        return self._hash == other._hash and self.gram == other.gram

    def __hash__(self):
        return self._hash

    @property
    def rank(self) -> int:
        return len(self.gram)

    def vector(self, coords: Iterable[int]) -> "LatticeVector":
        return LatticeVector(tuple(coords), self)

    def basis_vector(self, i: int) -> "LatticeVector":
        return LatticeVector(tuple(int(i == j) for j in range(self.rank)), self)

    def basis(self) -> list["LatticeVector"]:
        return [self.basis_vector(i) for i in range(self.rank)]

    def zero(self) -> "LatticeVector":
        return LatticeVector((0,) * self.rank, self)

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        """Inner product of raw coordinate tuples."""
        return sum(map(mul, u, linalg.matvec(self.gram, v)))

    def functional(self, v: Sequence[int]) -> tuple[int, ...]:
        """Row ``v^T G`` so that ``x . v`` is ``functional(v) . x``."""
        return linalg.matvec(self.gram, v)

    @cached_property
    def determinant(self) -> int:
        return linalg.determinant(self.gram)

    @cached_property
    def _diagonalization(self):
        return linalg.congruence_diagonalize(self.gram)

    @cached_property
    def orthogonal_basis(self) -> list[tuple[tuple[int, ...], int]]:
        """Integral orthogonal basis of a complement to the radical.

        Pairs ``(w, w.w)`` with every ``w.w`` nonzero; built from the
        congruence diagonalization, each vector made primitive.
        """
        diag, cols = self._diagonalization
        out = []
        for d, col in zip(diag, cols):
            if d != 0:
                w = linalg.primitive_integer(col)
                out.append((w, self.pair(w, w)))
        return out


class LatticeVector:
    """Integer coordinates of a vector in the basis of ``lattice``."""

    __slots__ = ("coords", "lattice")

    def __init__(self, coords: Sequence[int], lattice: Lattice):
        coords = tuple(int(c) for c in coords)
        if len(coords) != lattice.rank:
            raise ParameterError(
                f"vector has {len(coords)} coordinates, lattice rank is {lattice.rank}")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "lattice", lattice)

    def __setattr__(self, name, value):
        raise AttributeError("LatticeVector is immutable")

    def __repr__(self):
        return f"LatticeVector({list(self.coords)})"

    def __eq__(self, other):
        if not isinstance(other, LatticeVector):
            return NotImplemented
        return self.coords == other.coords and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.coords)

    def __lt__(self, other):
        return self.coords < other.coords

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _same(self, other):
        if not isinstance(other, LatticeVector):
            raise UsageError("expected a LatticeVector")
        if other.lattice != self.lattice:
            raise UsageError("vectors belong to different lattices")

    def __add__(self, other):
        self._same(other)
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.lattice)

    def __sub__(self, other):
        self._same(other)
        return LatticeVector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.lattice)

    def __neg__(self):
        return LatticeVector(tuple(-a for a in self.coords), self.lattice)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return LatticeVector(tuple(k * a for a in self.coords), self.lattice)

    __rmul__ = __mul__

    def dot(self, other: "LatticeVector") -> int:
        return inner_product(self, other)

    @property
    def square(self) -> int:
        return self.lattice.pair(self.coords, self.coords)

    @property
    def height(self) -> int:
        """Max-norm of the coordinates."""
        return max((abs(c) for c in self.coords), default=0)

    def is_zero(self) -> bool:
        return not any(self.coords)


class Signature(NamedTuple):
    positive: int
    negative: int
    zero: int

    def __str__(self):
        return f"({self.positive},{self.negative},{self.zero})"


@dataclass(frozen=True)
class DiscriminantData:
    invariant_factors: tuple[int, ...]
    determinant: int

    @property
    def order(self) -> int:
        """Order of the discriminant group (0 if the form is degenerate)."""
        return abs(self.determinant)


# ---------------------------------------------------------------------------
# standard lattices

def _chain_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


def _cartan(n, edges):
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2
    for i, j in edges:
        g[i][j] = g[j][i] = -1
    return g


# Bourbaki numbering (0-based): node 1 hangs off node 3
_E_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]


def make_standard(kind: str, param=None, scale: int = 1) -> Lattice:
    """Standard lattice ``kind`` with its Gram matrix multiplied by ``scale``.

    ``kind`` is one of ``"U"``, ``"A"``, ``"D"``, ``"E"`` (``param`` the rank)
    or ``"diag"`` (``param`` the diagonal entries). Root lattices use the
    positive definite Cartan convention before scaling.

    >>> make_standard("A", 2, scale=-1).gram
    ((-2, 1), (1, -2))
    """
    if not isinstance(scale, int) or scale == 0:
        raise ParameterError("scale must be a nonzero integer")
    kind = kind.upper() if kind.lower() != "diag" else "diag"
    if kind == "U":
        if param not in (None, 1):
            raise ParameterError("U takes no parameter")
        g = [[0, 1], [1, 0]]
        labels = ["u1", "u2"]
    elif kind in ("A", "D", "E"):
        if not isinstance(param, int):
            raise ParameterError(f"{kind} needs an integer rank")
        n = param
        if kind == "A":
            if n < 1:
                raise ParameterError("A(n) needs n >= 1")
            g = _cartan(n, _chain_edges(n))
        elif kind == "D":
            if n < 4:
                raise ParameterError("D(n) needs n >= 4")
            g = _cartan(n, _chain_edges(n - 1) + [(n - 3, n - 1)])
        else:
            if n not in (6, 7, 8):
                raise ParameterError("E(n) needs n in {6, 7, 8}")
            g = _cartan(n, [(i, j) for i, j in _E_EDGES if i < n and j < n])
        labels = [f"{kind.lower()}{i + 1}" for i in range(n)]
    elif kind == "diag":
        if param is None:
            raise ParameterError("diag needs its diagonal entries")
        entries = [int(a) for a in param]
        g = [[entries[i] if i == j else 0 for j in range(len(entries))]
             for i in range(len(entries))]
        labels = [f"d{i + 1}" for i in range(len(entries))]
    else:
        raise ParameterError(f"unknown lattice kind {kind!r}")
    return Lattice(tuple(tuple(scale * x for x in row) for row in g), tuple(labels))


def direct_sum(a: Lattice, b: Lattice) -> Lattice:
    n, m = a.rank, b.rank
    g = [list(row) + [0] * m for row in a.gram] + [[0] * n + list(row) for row in b.gram]
    if a.labels is None and b.labels is None:
        labels = None
    else:
        la = a.labels or tuple(f"b{i + 1}" for i in range(n))
        lb = b.labels or tuple(f"b{n + i + 1}" for i in range(m))
        labels = la + lb
    return Lattice(tuple(map(tuple, g)), labels)


def direct_sum_all(parts: Iterable[Lattice]) -> Lattice:
    out = Lattice(())
    for p in parts:
        out = direct_sum(out, p)
    return out


def inner_product(v: LatticeVector, w: LatticeVector) -> int:
    v._same(w)
    return v.lattice.pair(v.coords, w.coords)


def signature(l: Lattice) -> Signature:
    """Signs of an exact congruence diagonalization of the Gram matrix."""
    diag, _ = l._diagonalization
    pos = sum(1 for d in diag if d > 0)
    neg = sum(1 for d in diag if d < 0)
    return Signature(pos, neg, l.rank - pos - neg)


def discriminant(l: Lattice) -> DiscriminantData:
    factors = linalg.invariant_factors(l.gram) if l.rank else []
    return DiscriminantData(tuple(d for d in factors if d > 1), l.determinant)


def is_even(l: Lattice) -> bool:
    return all(l.gram[i][i] % 2 == 0 for i in range(l.rank))


def is_unimodular(l: Lattice) -> bool:
    return abs(l.determinant) == 1


def radical_basis(l: Lattice) -> list[LatticeVector]:
    """Saturated integral basis of the kernel of the Gram matrix."""
    return [l.vector(v) for v in linalg.integer_kernel(l.gram, l.rank)]


def orthogonal_complement(l: Lattice, vs: Sequence[LatticeVector]):
    """Saturated sublattice ``{x : x.v = 0 for all v in vs}``.

    Returns ``(sublattice, basis)`` where ``basis`` lists the ambient
    vectors that the sublattice's basis vectors map to.
    """
    for v in vs:
        if v.lattice != l:
            raise UsageError("vector does not belong to the lattice")
    rows = [l.functional(v.coords) for v in vs]
    rows = [r for r in rows if any(r)]
    kernel = linalg.integer_kernel(rows, l.rank)
    gram = tuple(tuple(l.pair(a, b) for b in kernel) for a in kernel)
    return Lattice(gram), [l.vector(k) for k in kernel]


def sublattice(l: Lattice, basis: Sequence[LatticeVector]) -> Lattice:
    """Lattice spanned by ``basis`` with the induced Gram matrix."""
    return Lattice(tuple(tuple(inner_product(a, b) for b in basis) for a in basis))


def is_saturated(l: Lattice, basis: Sequence[LatticeVector]) -> bool:
    """True when ``basis`` spans a primitive sublattice of ``l``."""
    if not basis:
        return True
    factors = linalg.invariant_factors([v.coords for v in basis])
    return len(factors) == len(basis) and all(d == 1 for d in factors)


def box(l: Lattice, height: int) -> list[tuple[int, int]]:
    return [(-height, height)] * l.rank


class RootSearch:
    """Vectors of one square in a coordinate box, under pairing constraints.

    ``constraints`` holds pairs ``(w, value)`` of a vector ``w`` and the
    required inner product ``x.w``. Iteration is lazy and deterministic (see
    :mod:`ellmono.enumeration` for the order); :meth:`sample` draws random
    solutions reusing the cached candidate tables.
    """

    def __init__(self, l: Lattice, square: int, bounds=None, height: int | None = None,
                 constraints=()):
        if bounds is None:
            if height is None:
                raise ParameterError("give either bounds or height")
            bounds = box(l, height)
        self.lattice = l
        cons = [(l.functional(w.coords), val) for w, val in constraints]
        self._search = VectorSearch(l.gram, square, bounds, cons)

    def __iter__(self):
        l = self.lattice
        return (LatticeVector(x, l) for x in self._search)

    def sample(self, rng) -> LatticeVector | None:
        x = self._search.sample(rng)
        return None if x is None else LatticeVector(x, self.lattice)


def enumerate_roots(l: Lattice, square: int, height: int | None) -> list[LatticeVector]:
    """All ``v`` with ``v.v = square`` and coordinates bounded by ``height``.

    For a definite lattice ``height=None`` returns the complete (finite)
    set. The list is sorted lexicographically and contains both ``v`` and
    ``-v``.
    """
    if square == 0:
        raise ParameterError("square must be nonzero")
    if height is None:
        sig = signature(l)
        sign = 1 if sig.negative == 0 and sig.zero == 0 else -1 if sig.positive == 0 and sig.zero == 0 else 0
        if sign == 0:
            raise ParameterError("height=None is only valid for definite lattices")
        if sign * square < 0:
            return []
        fp = FinckePohst([[sign * x for x in row] for row in l.gram])
        found = [v for v, val in fp.enumerate(sign * square) if val == sign * square]
        return [l.vector(v) for v in sorted(found)]
    if height < 0:
        raise ParameterError("height must be non-negative")
    found = sorted(iter_vectors(l.gram, square, box(l, height)))
    return [l.vector(v) for v in found]
