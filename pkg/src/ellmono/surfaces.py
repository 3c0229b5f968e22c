"""Lattice models of regular elliptic surfaces and Brieskorn-Pham Milnor lattices.

Model of the homology lattice for ``chi = pg + 1``::

    B + U^(2 chi - 2) + E8(-1)^chi,     B = [[0, 1], [1, b]]

``e`` is the first basis vector, ``f = m e`` with ``m`` the lcm of the
fibre multiplicities, ``f_i = (m / m_i) e`` and ``k = s e`` with
``s = (chi - 2) m + sum (m_i - 1)(m / m_i)``. The bit ``b = s mod 2`` makes
``k`` characteristic (``x.x = x.k mod 2`` for all ``x``), so ``B = U`` and
the lattice is even exactly when ``s`` is even. When there are no multiple
fibres the section is ``sigma = w + t e`` with ``w`` the second basis vector
and ``t = -(chi + b) / 2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from math import gcd, lcm, prod
from typing import Sequence

from . import linalg
from .errors import ParameterError, UnsupportedError
from .lattice import (Lattice, LatticeVector, RootSearch, Signature, direct_sum_all,
                      is_even, make_standard, orthogonal_complement, radical_basis, signature)


@dataclass(frozen=True)
class SurfaceModel:
    pg: int
    multiplicities: tuple[int, ...]
    lattice: Lattice
    e: LatticeVector
    f: LatticeVector
    fibres: tuple[tuple[int, LatticeVector], ...]
    k: LatticeVector
    sigma: LatticeVector | None
    k_scalar: int

    @property
    def q(self) -> int:
        return 0

    @property
    def chi(self) -> int:
        return self.pg + 1

    @property
    def m(self) -> int:
        return reduce(lcm, self.multiplicities, 1)

    @property
    def is_k3(self) -> bool:
        return self.pg == 1 and not self.multiplicities

    @property
    def lprime_indices(self) -> range:
        """Basis indices of the even unimodular part complementary to ``B``."""
        return range(2, self.lattice.rank)

    def fibre_class(self, mi: int) -> LatticeVector:
        for m, cls in self.fibres:
            if m == mi:
                return cls
        raise ParameterError(f"{mi} is not a fibre multiplicity of the model")

    def invariant_failures(self) -> list[str]:
        chi = self.chi
        out = []
        l = self.lattice
        if l.rank != 12 * chi - 2:
            out.append("rank")
        if signature(l) != Signature(2 * chi - 1, 10 * chi - 1, 0):
            out.append("signature")
        if self.f.square != 0:
            out.append("f.f")
        if self.sigma is not None and (self.sigma.square != -chi or self.sigma.dot(self.f) != 1):
            out.append("sigma")
        for m, cls in self.fibres:
            if cls * m != self.f:
                out.append(f"fibre {m}")
        if self.k.square != 0 or self.k.dot(self.f) != 0:
            out.append("k")
        if any((x - y) % 2 for x, y in zip(_diag(l), l.functional(self.k.coords))):
            out.append("k not characteristic")
        return out


def _diag(l: Lattice):
    return [l.gram[i][i] for i in range(l.rank)]


def canonical_scalar(chi: int, multiplicities: Sequence[int]) -> int:
    """``s`` with ``k = s e``: ``(chi - 2) m + sum (m_i - 1) (m / m_i)``."""
    m = reduce(lcm, multiplicities, 1)
    return (chi - 2) * m + sum((mi - 1) * (m // mi) for mi in multiplicities)


def build_surface_model(pg: int, multiplicities: Sequence[int] = ()) -> SurfaceModel:
    if pg < 1:
        raise UnsupportedError("the model requires positive geometric genus (pg >= 1)")
    mults = tuple(int(x) for x in multiplicities)
    if any(x < 2 for x in mults):
        raise ParameterError("fibre multiplicities must be at least 2")
    chi = pg + 1
    s = canonical_scalar(chi, mults)
    b = s % 2
    blocks = [Lattice(((0, 1), (1, b)), ("e", "w"))]
    blocks += [make_standard("U")] * (2 * chi - 2)
    blocks += [make_standard("E", 8, -1)] * chi
    l = direct_sum_all(blocks)
    n = l.rank
    m = reduce(lcm, mults, 1)

    def vec(a, c=0):
        return l.vector((a, c) + (0,) * (n - 2))

    e = vec(1)
    sigma = None
    if not mults:
        sigma = vec(-(chi + b) // 2, 1)
    model = SurfaceModel(pg, mults, l, e, e * m,
                         tuple((mi, e * (m // mi)) for mi in mults), e * s, sigma, s)
    bad = model.invariant_failures()
    if bad:
        raise AssertionError(f"surface model violates {bad}")
    return model


@dataclass(frozen=True)
class FibreComplement:
    """``f``-perp with its radical, and the even unimodular part ``L'``."""

    lattice: Lattice
    basis: tuple[LatticeVector, ...]
    radical: LatticeVector
    radical_primitive: bool
    lprime: Lattice
    lprime_basis: tuple[LatticeVector, ...]


def fibre_complement(s: SurfaceModel) -> FibreComplement:
    l = s.lattice
    comp, basis = orthogonal_complement(l, [s.f])
    rad = radical_basis(comp)
    if len(rad) != 1:
        raise AssertionError(f"radical of the fibre complement has rank {len(rad)}")
    gen = l.vector(linalg.matvec(linalg.transpose([b.coords for b in basis]), rad[0].coords))
    if gen == -s.e:
        gen = -gen
    primitive = reduce(gcd, gen.coords, 0) == 1
    idx = list(s.lprime_indices)
    lp_basis = tuple(l.basis_vector(i) for i in idx)
    lprime = Lattice(tuple(tuple(l.gram[i][j] for j in idx) for i in idx))
    return FibreComplement(comp, tuple(basis), gen, primitive, lprime, lp_basis)


# ---------------------------------------------------------------------------
# Milnor lattices

@dataclass(frozen=True)
class BPSingularity:
    """``x^a + y^b + z^c``."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        ex = tuple(int(x) for x in self.exponents)
        object.__setattr__(self, "exponents", ex)
        if len(ex) != 3:
            raise UnsupportedError("only surface singularities (three exponents) are supported")
        if any(x < 2 for x in ex):
            raise ParameterError("exponents must be at least 2")

    @property
    def milnor_number(self) -> int:
        return prod(x - 1 for x in self.exponents)

    @classmethod
    def e_series(cls, k: int) -> "BPSingularity":
        """``z^2 + y^3 + x^(6k-1)``, of Milnor number ``12k - 4``."""
        return cls((6 * k - 1, 3, 2))


# (overall sign, superdiagonal entry) of the symmetrised tensor form
MILNOR_CONVENTION = (-1, -1)


def _bidiagonal(a: int, superdiag: int):
    n = a - 1
    return [[1 if i == j else superdiag if j == i + 1 else 0 for j in range(n)] for i in range(n)]


def _kron(x, y):
    return [[a * b for a in row_x for b in row_y] for row_x in x for row_y in y]


def milnor_form(exponents: Sequence[int], convention=MILNOR_CONVENTION) -> Lattice:
    eps, sup = convention
    v = reduce(_kron, (_bidiagonal(a, sup) for a in exponents))
    n = len(v)
    return Lattice(tuple(tuple(eps * (v[i][j] + v[j][i]) for j in range(n)) for i in range(n)))


def _calibration_ok(convention) -> bool:
    a1 = milnor_form((2, 2, 2), convention)
    if a1.gram != ((-2,),):
        return False
    a2 = milnor_form((3, 2, 2), convention)
    return (a2.rank == 2 and a2.determinant == 3 and is_even(a2)
            and signature(a2) == Signature(0, 2, 0))


def calibrated_conventions() -> list[tuple[int, int]]:
    """Every (sign, superdiagonal) choice that passes both calibration anchors."""
    return [c for c in product((-1, 1), (-1, 1)) if _calibration_ok(c)]


def milnor_lattice(s) -> Lattice:
    """Intersection form on the Pham basis: ``-(V + V^T)``, ``V`` a tensor of bidiagonals."""
    if not isinstance(s, BPSingularity):
        s = BPSingularity(tuple(s))
    return milnor_form(s.exponents)


@dataclass(frozen=True)
class EmbeddingVerdict:
    match: bool
    milnor: dict
    model: dict
    basis: str = ("equality of rank, signature, parity and |det|; for indefinite even "
                  "unimodular lattices this determines the isometry class")


def _invariants(l: Lattice) -> dict:
    return {"rank": l.rank, "signature": tuple(signature(l)), "even": is_even(l),
            "abs_det": abs(l.determinant)}


def embed_milnor(s: SurfaceModel, m: Lattice) -> EmbeddingVerdict:
    lp = fibre_complement(s).lprime
    a, b = _invariants(m), _invariants(lp)
    match = a == b and a["even"] and a["abs_det"] == 1 and m.rank == s.lattice.rank - 2
    return EmbeddingVerdict(match, a, b)


# ---------------------------------------------------------------------------
# witness searches

DEFAULT_HEIGHT = 3


def _pair_bounds(l: Lattice, target: LatticeVector, height: int):
    """Coordinate box for ``x`` such that both ``x`` and ``target - x`` lie in the height box."""
    out = []
    for t in target.coords:
        lo, hi = max(-height, t - height), min(height, t + height)
        if lo > hi:
            return None
        out.append((lo, hi))
    return out


def find_fibre_splitting_roots(s: SurfaceModel, height: int = DEFAULT_HEIGHT,
                               target: LatticeVector | None = None):
    """Roots ``a, a'`` with ``a + a' = f`` (or ``target``) inside the height box.

    ``a' = f - a`` has square ``-2`` exactly when ``a.f = 0``, so the search
    runs over roots orthogonal to ``f``.
    """
    l = s.lattice
    f = s.f if target is None else target
    if height < 0:
        raise ParameterError("height must be non-negative")
    bounds = _pair_bounds(l, f, height)
    if bounds is None:
        return None
    for a in RootSearch(l, -2, bounds=bounds, constraints=[(f, 0)]):
        a2 = f - a
        if a2.square == -2 and a.dot(a2) == 2 and a + a2 == f:
            return a, a2
    return None


def find_multiple_fibre_span(s: SurfaceModel, mi: int, height: int = DEFAULT_HEIGHT, pool: int = 400):
    """Roots ``a, a'`` with the fibre class ``f_i`` in the span of ``a, a', f``.

    Pairs are drawn from the first ``pool`` roots of the height box, in
    triangular order ``(0,1), (0,2), (1,2), (0,3), ...``.
    """
    fi = s.fibre_class(mi)
    if height < 0:
        raise ParameterError("height must be non-negative")
    if height == 0:
        return None
    l = s.lattice
    roots = []
    for r in RootSearch(l, -2, height=height):
        roots.append(r)
        j = len(roots) - 1
        for i in range(j):
            a, b = roots[i], roots[j]
            if linalg.in_integer_span([a.coords, b.coords, s.f.coords], fi.coords):
                return a, b
        if len(roots) >= pool:
            break
    return None


def find_k3_extra_classes(s: SurfaceModel, height: int = DEFAULT_HEIGHT, max_sections: int = 50):
    """Roots ``a, a'`` and a ``-2`` class ``sigma`` with ``a + a' = f``,
    ``a.sigma = 1`` and ``a'.sigma = 0``."""
    if not s.is_k3:
        raise ParameterError("this search needs the K3 model (pg = 1, no multiple fibres)")
    if height < 0:
        raise ParameterError("height must be non-negative")
    if height == 0:
        return None
    l = s.lattice
    f = s.f
    bounds = _pair_bounds(l, f, height)
    if bounds is None:
        return None
    tried = 0
    for sigma in RootSearch(l, -2, height=height, constraints=[(f, 1)]):
        for a in RootSearch(l, -2, bounds=bounds, constraints=[(f, 0), (sigma, 1)]):
            a2 = f - a
            if (a2.square == -2 and a + a2 == f and a.dot(sigma) == 1
                    and a2.dot(sigma) == 0 and sigma.square == -2):
                return a, a2, sigma
            break
        tried += 1
        if tried >= max_sections:
            break
    return None
