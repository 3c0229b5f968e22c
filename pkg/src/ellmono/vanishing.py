"""Root sets, the three completeness conditions, and reflection group orders.

A vanishing set is a finite list of (-2)-vectors of a lattice. Its
reflection group acts by ``x -> x + (x.d) d``. Completeness asks for three
things: the roots generate the lattice, they form one orbit under their own
reflection group, and six of them realise a fixed intersection pattern.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from operator import mul
from typing import Sequence

from . import linalg
from .enumeration import definiteness
from .errors import (ContainmentError, ParameterError, PreconditionError,
                     UnsupportedError, UsageError)
from .lattice import Lattice, LatticeVector, is_even
from .permgroup import StabilizerChain

DEFAULT_ORBIT_BOUND = 10_000
MAX_CLOSED_ROOTS = 50_000


@dataclass(frozen=True)
class VanishingSet:
    """Finite list of square ``-2`` vectors of ``lattice``."""

    roots: tuple[LatticeVector, ...]
    lattice: Lattice

    def __post_init__(self):
        roots = tuple(self.roots)
        object.__setattr__(self, "roots", roots)
        for r in roots:
            if r.lattice != self.lattice:
                raise UsageError("root does not belong to the lattice")
            if r.square != -2:
                raise ParameterError(f"vector {r.coords} has square {r.square}, not -2")

    @classmethod
    def from_coords(cls, lattice: Lattice, coords) -> "VanishingSet":
        return cls(tuple(lattice.vector(c) for c in coords), lattice)

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, i):
        return self.roots[i]


@dataclass(frozen=True)
class DiagramPattern:
    """Required absolute pairings between six roots; ``-2`` on the diagonal."""

    gram_pattern: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.gram_pattern)
        object.__setattr__(self, "gram_pattern", m)
        n = len(m)
        if n == 0 or any(len(row) != n for row in m):
            raise ParameterError("pattern must be a non-empty square matrix")
        for i in range(n):
            if m[i][i] != -2:
                raise ParameterError("pattern diagonal must be -2")
            for j in range(i + 1, n):
                if m[i][j] != m[j][i]:
                    raise ParameterError("pattern must be symmetric")
                if m[i][j] < 0:
                    raise ParameterError("off-diagonal pattern entries are absolute values")
        if self.names is not None and len(self.names) != n:
            raise ParameterError("one name per pattern vertex")

    @property
    def size(self) -> int:
        return len(self.gram_pattern)


def default_pattern() -> DiagramPattern:
    """The six-vertex pattern shipped in ``data/default_pattern.json``."""
    text = resources.files("ellmono").joinpath("data/default_pattern.json").read_text()
    data = json.loads(text)
    return DiagramPattern(data["pattern"], tuple(data["vertices"]) if "vertices" in data else None)


def pattern_lattice(p: DiagramPattern) -> tuple[Lattice, VanishingSet]:
    """Lattice whose Gram matrix is the pattern itself, with its basis as roots.

    All signs are taken positive. Used to plant the pattern where a definite
    root system cannot contain it.
    """
    l = Lattice(p.gram_pattern)
    return l, VanishingSet(tuple(l.basis()), l)


# ---------------------------------------------------------------------------
# condition (1)

def _coordinates_in(target: Lattice, basis: Sequence[LatticeVector], v: LatticeVector):
    status, c = linalg.solve_integral([b.coords for b in basis], v.coords)
    if status != "integral":
        raise ContainmentError(f"{v.coords} is not in the target lattice")
    return c


def generates_lattice(d, target: Lattice, basis: Sequence[LatticeVector] | None = None) -> bool:
    """Do the vectors of ``d`` span ``target`` over the integers?

    ``d`` is a :class:`VanishingSet` or any sequence of lattice vectors.
    When ``target`` is a sublattice, ``basis`` gives its basis vectors in
    the ambient lattice; otherwise ``target`` must be the lattice of ``d``.
    """
    vectors = list(d)
    if basis is None:
        if vectors and vectors[0].lattice != target:
            raise UsageError("give the target basis for a sublattice")
        coords = [v.coords for v in vectors]
    else:
        if len(basis) != target.rank:
            raise ParameterError("basis size does not match the target rank")
        coords = [_coordinates_in(target, basis, v) for v in vectors]
    if target.rank == 0:
        return True
    if not coords:
        return False
    # the echelon rows span the same group, and keep the Smith form small
    factors = linalg.invariant_factors(linalg.echelon_rows(coords))
    return len(factors) == target.rank and all(f == 1 for f in factors)


# ---------------------------------------------------------------------------
# condition (2)

@dataclass(frozen=True)
class OrbitCertificate:
    """Record of a breadth-first orbit computation.

    ``generator_log[i]`` explains orbit element ``i + 1``: it is the image of
    orbit element ``source`` under the reflection in root ``generator`` of
    the input set. Element 0 is the seed.
    """

    seed: int
    reached: tuple[bool, ...]
    bfs_depth: int
    generator_log: tuple[tuple[int, int], ...]
    new_roots: int
    closed: bool

    @property
    def single_orbit(self) -> bool:
        return all(self.reached)

    def replay(self, d: VanishingSet) -> list[tuple[int, ...]]:
        """Rebuild the orbit from the seed using only the log."""
        l = d.lattice
        out = [d.roots[self.seed].coords]
        for src, gen in self.generator_log:
            x = out[src]
            r = d.roots[gen].coords
            t = l.pair(x, r)
            out.append(tuple(a + t * b for a, b in zip(x, r)))
        return out


def orbit_closure(d: VanishingSet, seed: int, max_new: int = DEFAULT_ORBIT_BOUND):
    """Orbit of ``d[seed]`` under the reflections in the roots of ``d``.

    Reflections in the orbit elements themselves are never needed: for
    ``x = g(d_j)`` the reflection in ``x`` is ``g r_j g^{-1}``, which already
    lies in the group. The search stops once ``max_new`` vectors outside
    ``d`` have been produced, and the certificate then reports
    ``closed=False``.
    """
    l = d.lattice
    roots = [r.coords for r in d.roots]
    if not 0 <= seed < len(roots):
        raise ParameterError("seed index out of range")
    gens = [(r, l.functional(r)) for r in roots]
    original = {}
    for i, r in enumerate(roots):
        original.setdefault(r, []).append(i)
    reached = [False] * len(roots)

    orbit = [roots[seed]]
    index = {roots[seed]: 0}
    depth_of = [0]
    log: list[tuple[int, int]] = []
    new = 0
    closed = True
    for i in original.get(roots[seed], ()):
        reached[i] = True

    head = 0
    while head < len(orbit) and closed:
        x = orbit[head]
        for g, (r, gr) in enumerate(gens):
            t = sum(map(mul, x, gr))
            if t == 0:
                continue
            y = tuple(a + t * b for a, b in zip(x, r))
            if y in index:
                continue
            if y in original:
                for i in original[y]:
                    reached[i] = True
            else:
                if new >= max_new:
                    closed = False
                    break
                new += 1
            index[y] = len(orbit)
            orbit.append(y)
            depth_of.append(depth_of[head] + 1)
            log.append((head, g))
        head += 1

    cert = OrbitCertificate(seed, tuple(reached), max(depth_of), tuple(log), new, closed)
    return VanishingSet(tuple(l.vector(x) for x in orbit), l), cert


def orbit_verdict(cert: OrbitCertificate) -> str:
    """``true``/``false`` when the orbit closed, ``certified``/``unknown`` otherwise.

    A closed orbit proves the input set is one orbit exactly when every
    input root was reached and no root outside the set appeared. When the
    bound was hit, reaching every input root still proves that all of them
    are conjugate (``certified``); failing to reach one decides nothing.
    """
    if cert.closed:
        return "true" if cert.single_orbit and cert.new_roots == 0 else "false"
    return "certified" if cert.single_orbit else "unknown"


# ---------------------------------------------------------------------------
# condition (3)

def _diagram_search(d: VanishingSet, p: DiagramPattern, max_nodes: int | None):
    """Backtracking search; returns ``(witness or None, exhausted)``."""
    n = p.size
    roots = [r.coords for r in d.roots]
    if len(roots) < n:
        return None, True
    l = d.lattice
    fns = [l.functional(r) for r in roots]
    neg = {}
    pos = {r: i for i, r in enumerate(roots)}
    for i, r in enumerate(roots):
        j = pos.get(tuple(-x for x in r))
        neg[i] = j
    pat = p.gram_pattern
    rows: dict[int, dict[int, list[int]]] = {}

    def by_value(i):
        # candidates grouped by |pairing| with root i, in index order
        row = rows.get(i)
        if row is None:
            row = {}
            f = fns[i]
            for j, r in enumerate(roots):
                row.setdefault(abs(sum(map(mul, r, f))), []).append(j)
            rows[i] = row
        return row

    # for each vertex, an earlier vertex it must pair with nontrivially
    anchor = [next((j for j in range(k) if pat[k][j]), None) for k in range(n)]
    chosen: list[int] = []
    blocked: set[int] = set()
    nodes = 0

    def rec(k):
        nonlocal nodes
        if k == n:
            return True
        a = anchor[k]
        cands = range(len(roots)) if a is None else by_value(chosen[a]).get(pat[k][a], ())
        for i in cands:
            if i in blocked:
                continue
            nodes += 1
            if max_nodes is not None and nodes > max_nodes:
                raise _Budget
            if all(abs(sum(map(mul, roots[i], fns[chosen[j]]))) == pat[k][j] for j in range(k)):
                chosen.append(i)
                added = [x for x in (i, neg[i]) if x is not None and x not in blocked]
                blocked.update(added)
                if rec(k + 1):
                    return True
                blocked.difference_update(added)
                chosen.pop()
        return False

    try:
        found = rec(0)
    except _Budget:
        return None, False
    return (tuple(chosen) if found else None), True


class _Budget(Exception):
    pass


def contains_diagram(d: VanishingSet, p: DiagramPattern | None = None,
                     max_nodes: int | None = None) -> tuple[int, ...] | None:
    """Indices of roots realising ``p`` up to sign, or ``None``.

    Pattern vertices are assigned in order, each to the smallest admissible
    root index, so the first witness in lexicographic order is returned.
    Distinct vertices never use ``v`` and ``-v`` together. The witness is
    re-verified before it is returned.
    """
    p = p or default_pattern()
    witness, _ = _diagram_search(d, p, max_nodes)
    if witness is not None and not verify_diagram(d, p, witness):
        raise AssertionError("diagram witness failed verification")
    return witness


def verify_diagram(d: VanishingSet, p: DiagramPattern, witness: Sequence[int]) -> bool:
    n = p.size
    if len(witness) != n or len(set(witness)) != n:
        return False
    vs = [d.roots[i] for i in witness]
    for i in range(n):
        for j in range(i + 1, n):
            if vs[i] == -vs[j] or abs(vs[i].dot(vs[j])) != p.gram_pattern[i][j]:
                return False
    return True


# ---------------------------------------------------------------------------
# the report

@dataclass
class CVLReport:
    generates: bool
    orbit: str
    diagram: str
    witness: tuple[int, ...] | None
    certificate: OrbitCertificate | None
    bounds: dict = field(default_factory=dict)

    @property
    def overall(self) -> str:
        if self.generates and self.orbit in ("true", "certified") and self.diagram == "true":
            return "complete (certified)"
        if not self.generates or self.orbit == "false" or self.diagram == "false":
            return "not complete"
        return "undecided"

    def verdict_line(self) -> str:
        return (f"CVL:(1)={str(self.generates).lower()} (2)={self.orbit} "
                f"(3)={self.diagram}")


def is_complete_vanishing_lattice(l: Lattice, d: VanishingSet, p: DiagramPattern | None = None,
                                  orbit_bound: int = DEFAULT_ORBIT_BOUND,
                                  tuple_bound: int | None = None) -> CVLReport:
    """Check generation, the single-orbit property and the six-root pattern.

    The orbit check starts at the first root. ``tuple_bound`` caps the
    number of search nodes of the pattern search; exceeding it yields
    ``unknown`` for the third condition.
    """
    if not is_even(l):
        raise PreconditionError("the lattice must be even")
    if d.lattice != l:
        raise UsageError("the roots belong to a different lattice")
    p = p or default_pattern()
    gen = generates_lattice(d, l)
    if len(d):
        _, cert = orbit_closure(d, 0, orbit_bound)
        orbit = orbit_verdict(cert)
    else:
        cert, orbit = None, "false"
    witness, exhausted = _diagram_search(d, p, tuple_bound)
    if witness is not None:
        if not verify_diagram(d, p, witness):
            raise AssertionError("diagram witness failed verification")
        diagram = "true"
    else:
        diagram = "false" if exhausted else "unknown"
    return CVLReport(gen, orbit, diagram, witness, cert,
                     {"orbit_bound": orbit_bound, "tuple_bound": tuple_bound})


# ---------------------------------------------------------------------------
# reflection groups on definite spans

def _span_definiteness(d: VanishingSet) -> int:
    rows = linalg.echelon_rows([r.coords for r in d.roots])
    l = d.lattice
    gram = [[l.pair(a, b) for b in rows] for a in rows]
    return definiteness(gram) if rows else -1


def closed_root_set(d: VanishingSet, limit: int = MAX_CLOSED_ROOTS) -> list[tuple[int, ...]]:
    """Union of the orbits of all roots of ``d``, in discovery order."""
    l = d.lattice
    gens = [(r.coords, l.functional(r.coords)) for r in d.roots]
    out: list[tuple[int, ...]] = []
    seen = set()
    for r in d.roots:
        if r.coords in seen:
            continue
        seen.add(r.coords)
        out.append(r.coords)
        head = len(out) - 1
        while head < len(out):
            x = out[head]
            for g, fg in gens:
                t = sum(map(mul, x, fg))
                if t:
                    y = tuple(a + t * b for a, b in zip(x, g))
                    if y not in seen:
                        seen.add(y)
                        out.append(y)
                        if len(out) > limit:
                            raise UnsupportedError(f"closed root set exceeds {limit} vectors")
            head += 1
    return out


def reflection_permutations(d: VanishingSet) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """The closed root set and each generator as a permutation of it."""
    if _span_definiteness(d) == 0:
        raise UnsupportedError("the roots span an indefinite or degenerate lattice")
    l = d.lattice
    pts = closed_root_set(d)
    pos = {x: i for i, x in enumerate(pts)}
    perms = []
    for r in d.roots:
        fr = l.functional(r.coords)
        perm = []
        for x in pts:
            t = sum(map(mul, x, fr))
            perm.append(pos[tuple(a + t * b for a, b in zip(x, r.coords))])
        perms.append(tuple(perm))
    return pts, perms


def reflection_group_order(d: VanishingSet) -> int:
    """Order of the group generated by the reflections in ``d``.

    The span must be definite, so the roots close up into a finite set on
    which the group acts faithfully; the order comes from a stabilizer
    chain of that permutation action.
    """
    if not len(d):
        return 1
    pts, perms = reflection_permutations(d)
    return StabilizerChain(perms, len(pts)).order()


def reflection_group_elements(d: VanishingSet, limit: int = 100_000) -> set[tuple]:
    """All matrices of the reflection group by breadth-first closure."""
    from .isometry import reflection
    l = d.lattice
    gens = [reflection(r).matrix for r in d.roots]
    start = linalg.identity(l.rank)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                y = linalg.matmul(g, m)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > limit:
                        raise UnsupportedError(f"group exceeds {limit} elements")
        frontier = nxt
    return seen
