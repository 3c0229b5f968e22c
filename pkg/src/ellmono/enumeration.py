"""Bounded enumeration of lattice vectors of prescribed square.

The Gram matrix is split into orthogonal components (connected components
of its off-diagonal support). Definite components are enumerated with an
integer-only Fincke-Pohst recursion, small indefinite or degenerate ones by
scanning their coordinate box, and larger ones by a depth-first scan with
interval pruning. A depth-first search over components then combines the
per-component candidates into vectors of the requested total square.

Search order: components are assigned from the last basis block to the
first; within a component squares are tried by increasing absolute value
and vectors in lexicographic order. The trailing blocks therefore vary
slowest, so a witness touching the leading block (where the elliptic-surface
models keep their fibre line) is reached early.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt, lcm
from operator import mul
from typing import Iterator, Sequence

Bounds = Sequence[tuple[int, int]]

# coordinate boxes up to this many points are scanned directly
BOX_SCAN_LIMIT = 250_000
EXACT_SUM_LIMIT = 100_000

# Fincke-Pohst tables of definite components, shared between searches
_FP_CACHE: dict[tuple, tuple[int, dict[int, list]]] = {}
_FP_CACHE_SIZE = 32


def orthogonal_components(gram: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis-index sets of the connected components of the Gram graph."""
    n = len(gram)
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and gram[i][j] != 0:
                    seen[j] = True
                    stack.append(j)
        comps.append(tuple(sorted(comp)))
    return comps


def definiteness(gram: Sequence[Sequence[int]]) -> int:
    """+1 positive definite, -1 negative definite, 0 otherwise."""
    from .linalg import congruence_diagonalize

    if not gram:
        return 0
    diag, _ = congruence_diagonalize(gram)
    if all(d > 0 for d in diag):
        return 1
    if all(d < 0 for d in diag):
        return -1
    return 0


def quad_interval(gram: Sequence[Sequence[int]], bounds: Bounds) -> tuple[int, int]:
    """Interval enclosing ``x^T G x`` over a coordinate box (term-wise bound)."""
    r = len(gram)
    lo = hi = 0
    for i in range(r):
        a, b = bounds[i]
        sq_hi = max(a * a, b * b)
        sq_lo = 0 if a <= 0 <= b else min(a * a, b * b)
        g = gram[i][i]
        lo += min(g * sq_lo, g * sq_hi)
        hi += max(g * sq_lo, g * sq_hi)
        for j in range(i + 1, r):
            if gram[i][j]:
                c, d = bounds[j]
                prods = [2 * gram[i][j] * s * t for s in (a, b) for t in (c, d)]
                lo += min(prods)
                hi += max(prods)
    return lo, hi


class FinckePohst:
    """Vectors ``x`` with ``x^T P x <= R`` for a positive definite ``P``.

    Integer-only: the Cholesky-type decomposition is computed once over the
    rationals and then rescaled so the recursion compares integers.
    """

    def __init__(self, p: Sequence[Sequence[int]]):
        r = len(p)
        self.rank = r
        q = [[Fraction(p[i][j]) for j in range(r)] for i in range(r)]
        for i in range(r):
            for j in range(i + 1, r):
                q[j][i] = q[i][j]
                q[i][j] = q[i][j] / q[i][i]
            for k in range(i + 1, r):
                for l in range(k, r):
                    q[k][l] -= q[k][i] * q[i][l]
        # x^T P x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
        self.den = [reduce(lcm, (q[i][j].denominator for j in range(i + 1, r)), 1)
                    for i in range(r)]
        self.coef = [[-int(q[i][j] * self.den[i]) if j > i else 0 for j in range(r)]
                     for i in range(r)]
        scale = 1
        for i in range(r):
            scale = lcm(scale, self.den[i] ** 2 * q[i][i].denominator)
        self.scale = scale
        self.weight = [int(q[i][i] * scale / self.den[i] ** 2) for i in range(r)]

    def enumerate(self, bound: int, bounds: Bounds | None = None) -> Iterator[tuple[tuple[int, ...], int]]:
        """Yield ``(x, x^T P x)`` for every ``x`` in the box with value <= bound."""
        r = self.rank
        if r == 0:
            yield (), 0
            return
        if bound < 0:
            return
        total = bound * self.scale
        x = [0] * r
        den, coef, weight, scale = self.den, self.coef, self.weight, self.scale
        lo = [b[0] for b in bounds] if bounds else None
        hi = [b[1] for b in bounds] if bounds else None

        def rec(i, budget):
            c = sum(map(mul, coef[i], x))  # d_i * center_i
            d = den[i]
            k = weight[i]
            s = isqrt(budget // k)
            xmin = -((s - c) // d)
            xmax = (c + s) // d
            if lo is not None:
                xmin = max(xmin, lo[i])
                xmax = min(xmax, hi[i])
            for v in range(xmin, xmax + 1):
                t = d * v - c
                rest = budget - k * t * t
                if rest < 0:
                    continue
                x[i] = v
                if i == 0:
                    yield tuple(x), (total - rest) // scale
                else:
                    yield from rec(i - 1, rest)
            x[i] = 0

        yield from rec(r - 1, total)


class _Component:
    """One orthogonal block of the Gram matrix with its candidate tables."""

    def __init__(self, gram, indices, bounds, filters):
        self.indices = indices
        self.gram = [[gram[i][j] for j in indices] for i in indices]
        self.bounds = [bounds[i] for i in indices]
        self.filters = filters  # [(functional restricted to block, value)]
        self.rank = len(indices)
        g = self.gram
        r = self.rank
        step = 0
        for i in range(r):
            step = gcd(step, g[i][i])
            for j in range(i + 1, r):
                step = gcd(step, 2 * g[i][j])
        self.step = step
        lo_q, hi_q = quad_interval(g, self.bounds)
        self.sign = definiteness(self.gram) if r else 0
        if self.sign > 0:
            lo_q = 0
        elif self.sign < 0:
            hi_q = 0
        self.lo, self.hi = lo_q, hi_q
        self.box_size = 1
        for a, b in self.bounds:
            self.box_size *= max(0, b - a + 1)
        self.exact: dict[int, list] | None = None
        self._fp = None
        self._fp_done = -1
        self._fp_table: dict[int, list] = {}
        if r == 0:
            self.exact = {0: [()]}
        elif self.sign == 0 and self.box_size <= BOX_SCAN_LIMIT:
            self.exact = self._scan_box()
        self._cache: dict[int, list] = {}
        self._norms: list[int] | None = None

    def _ok(self, v):
        return all(sum(map(mul, phi, v)) == val for phi, val in self.filters)

    def _norm(self, v):
        g = self.gram
        return sum(v[i] * sum(map(mul, g[i], v)) for i in range(self.rank))

    def _scan_box(self):
        table: dict[int, list] = {}
        ranges = [range(a, b + 1) for a, b in self.bounds]
        for v in itertools.product(*ranges):
            if self._ok(v):
                table.setdefault(self._norm(v), []).append(v)
        return table

    def norms(self) -> list[int]:
        if self._norms is not None:
            return self._norms
        if self.exact is not None:
            ns = list(self.exact)
        elif self.step == 0:
            ns = [0]
        else:
            first = -((-self.lo) // self.step) * self.step
            ns = list(range(first, self.hi + 1, self.step))
        self._norms = sorted(ns, key=lambda n: (abs(n), n))
        return self._norms

    def vectors(self, norm: int) -> list[tuple[int, ...]]:
        if self.exact is not None:
            return self.exact.get(norm, [])
        if norm in self._cache:
            return self._cache[norm]
        if self.sign != 0:
            out = self._definite(norm)
        else:
            out = sorted(v for v in _pruned_scan(self.gram, self.bounds, norm) if self._ok(v))
        self._cache[norm] = out
        return out

    def _definite(self, norm):
        target = self.sign * norm
        if target < 0:
            return []
        if target > self._fp_done:
            key = (tuple(map(tuple, self.gram)), tuple(map(tuple, self.bounds)),
                   tuple((tuple(phi), val) for phi, val in self.filters))
            hit = _FP_CACHE.get(key)
            if hit is not None and hit[0] >= target:
                self._fp_done, self._fp_table = hit
            else:
                self._extend_table(target)
                if len(_FP_CACHE) >= _FP_CACHE_SIZE:
                    _FP_CACHE.pop(next(iter(_FP_CACHE)))
                _FP_CACHE[key] = (self._fp_done, self._fp_table)
        return self._fp_table.get(target, [])

    def _extend_table(self, target):
        if self._fp is None:
            p = [[self.sign * x for x in row] for row in self.gram]
            self._fp = FinckePohst(p)
        new_bound = max(target, 2 * self._fp_done, 8)
        table: dict[int, list] = {}
        for v, val in self._fp.enumerate(new_bound, self.bounds):
            if self._ok(v):
                table.setdefault(val, []).append(v)
        for vs in table.values():
            vs.sort()
        self._fp_table = table
        self._fp_done = new_bound


def _pruned_scan(gram, bounds, norm):
    """Box scan of an indefinite form with interval pruning on partial sums."""
    r = len(gram)
    suffix = [quad_interval([row[i:] for row in gram[i:]], bounds[i:]) for i in range(r)]
    suffix.append((0, 0))
    x = [0] * r

    def rec(i, acc):
        if i == r:
            if acc == norm:
                yield tuple(x)
            return
        for v in range(bounds[i][0], bounds[i][1] + 1):
            x[i] = v
            part = acc + gram[i][i] * v * v + 2 * v * sum(gram[i][j] * x[j] for j in range(i))
            lin_lo = lin_hi = 0
            for k in range(i + 1, r):
                c = 2 * sum(gram[k][j] * x[j] for j in range(i + 1))
                a, b = bounds[k]
                lin_lo += min(c * a, c * b)
                lin_hi += max(c * a, c * b)
            qlo, qhi = suffix[i + 1]
            if part + lin_lo + qlo <= norm <= part + lin_hi + qhi:
                yield from rec(i + 1, part)
        x[i] = 0

    yield from rec(0, 0)


class VectorSearch:
    """Reusable search for box vectors of one square under linear constraints.

    ``constraints`` are pairs ``(phi, value)`` requiring ``phi . x = value``;
    a functional supported on a single component is applied while that
    component's candidates are built, the rest are checked per vector.
    Candidate tables are cached, so repeated :meth:`sample` calls are cheap.
    """

    def __init__(self, gram: Sequence[Sequence[int]], square: int, bounds: Bounds,
                 constraints: Sequence[tuple[Sequence[int], int]] = ()):
        n = len(gram)
        self.n = n
        self.square = square
        self.empty = False
        comps = orthogonal_components(gram)
        where = {}
        for ci, comp in enumerate(comps):
            for i in comp:
                where[i] = ci
        local: list[list] = [[] for _ in comps]
        self.leaf_checks = []
        for phi, val in constraints:
            support = {where[i] for i in range(n) if phi[i]}
            if not support:
                if val != 0:
                    self.empty = True
                continue
            if len(support) == 1:
                ci = support.pop()
                local[ci].append((tuple(phi[i] for i in comps[ci]), val))
            else:
                self.leaf_checks.append((tuple(phi), val))
        blocks = [_Component(gram, comp, bounds, local[ci]) for ci, comp in enumerate(comps)]
        if any(b.box_size == 0 for b in blocks):
            self.empty = True
        self.order = order = blocks[::-1]
        m = self.m = len(order)
        lo = [0] * (m + 1)
        hi = [0] * (m + 1)
        step = [0] * (m + 1)
        for k in range(m - 1, -1, -1):
            b = order[k]
            if b.exact is not None:
                ns = list(b.exact)
                if not ns:
                    self.empty = True
                    ns = [0]
                blo, bhi, bstep = min(ns), max(ns), reduce(gcd, ns, 0)
            else:
                blo, bhi, bstep = b.lo, b.hi, b.step
            lo[k] = lo[k + 1] + blo
            hi[k] = hi[k + 1] + bhi
            step[k] = gcd(step[k + 1], bstep)
        self.lo, self.hi, self.step = lo, hi, step
        # exact sets of reachable squares for suffixes made of scanned blocks
        exact: list[set | None] = [None] * (m + 1)
        exact[m] = {0}
        for k in range(m - 1, -1, -1):
            b = order[k]
            if b.exact is None:
                break
            sums = {x + y for x in b.exact for y in exact[k + 1]}
            if len(sums) > EXACT_SUM_LIMIT:
                break
            exact[k] = sums
        self.exact_sums = exact

    def _feasible(self, k, t):
        if self.exact_sums[k] is not None:
            return t in self.exact_sums[k]
        if t < self.lo[k] or t > self.hi[k]:
            return False
        return t == 0 if self.step[k] == 0 else t % self.step[k] == 0

    def _run(self, rng):
        if self.empty or not self._feasible(0, self.square):
            return
        out = [0] * self.n
        order, m = self.order, self.m
        leaf_checks = self.leaf_checks

        def rec(k, t):
            if k == m:
                if t == 0:
                    v = tuple(out)
                    if all(sum(map(mul, phi, v)) == val for phi, val in leaf_checks):
                        yield v
                return
            b = order[k]
            norms = [t] if k == m - 1 else b.norms()
            if rng is not None:
                norms = _rotated([nb for nb in norms if self._feasible(k + 1, t - nb)], rng)
            for nb in norms:
                if not self._feasible(k + 1, t - nb):
                    continue
                cands = b.vectors(nb)
                if rng is not None:
                    cands = _rotated(cands, rng)
                for c in cands:
                    for i, val in zip(b.indices, c):
                        out[i] = val
                    yield from rec(k + 1, t - nb)
                for i in b.indices:
                    out[i] = 0

        yield from rec(0, self.square)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return self._run(None)

    def sample(self, rng: random.Random) -> tuple[int, ...] | None:
        """A random solution (not uniformly distributed), or None."""
        return next(self._run(rng), None)


def _rotated(seq, rng):
    """Cyclic traversal of ``seq`` from a random start, without copying."""
    n = len(seq)
    if n < 2:
        return seq
    start = rng.randrange(n)
    return (seq[(start + i) % n] for i in range(n))


def iter_vectors(gram: Sequence[Sequence[int]], square: int, bounds: Bounds,
                 constraints: Sequence[tuple[Sequence[int], int]] = ()) -> Iterator[tuple[int, ...]]:
    """Lazily yield every ``x`` in the box with ``x^T G x = square``."""
    return iter(VectorSearch(gram, square, bounds, constraints))
