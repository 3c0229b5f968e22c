"""Order of a permutation group by the Schreier-Sims algorithm.

Permutations are tuples ``p`` with ``p[x]`` the image of ``x``; products
compose right to left, ``mul(a, b)[x] == a[b[x]]``.
"""
from __future__ import annotations

from math import prod
from typing import Sequence

Perm = tuple[int, ...]


def mul(a: Perm, b: Perm) -> Perm:
    return tuple(a[x] for x in b)


def inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


class StabilizerChain:
    """Base, strong generators and transversals of a permutation group."""

    def __init__(self, generators: Sequence[Perm], degree: int):
        self.degree = degree
        self.identity = tuple(range(degree))
        gens = [tuple(g) for g in generators if tuple(g) != self.identity]
        self.base: list[int] = []
        self.strong: list[list[Perm]] = []
        self.trans: list[dict[int, Perm]] = []
        for g in gens:
            if all(g[b] == b for b in self.base):
                self._new_level(next(x for x in range(degree) if g[x] != x))
        for i in range(len(self.base)):
            self.strong[i] = [g for g in gens if all(g[b] == b for b in self.base[:i])]
            self._orbit(i)
        self._complete()

    def _new_level(self, point: int) -> None:
        self.base.append(point)
        self.strong.append([])
        self.trans.append({point: self.identity})

    def _orbit(self, i: int) -> None:
        b = self.base[i]
        trans = {b: self.identity}
        queue = [b]
        for p in queue:
            tp = trans[p]
            for s in self.strong[i]:
                q = s[p]
                if q not in trans:
                    trans[q] = mul(s, tp)
                    queue.append(q)
        self.trans[i] = trans

    def strip(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for level in range(start, len(self.base)):
            beta = g[self.base[level]]
            u = self.trans[level].get(beta)
            if u is None:
                return g, level
            g = mul(inv(u), g)
        return g, len(self.base)

    def _complete(self) -> None:
        i = len(self.base) - 1
        while i >= 0:
            restart = None
            for p, u in list(self.trans[i].items()):
                for s in self.strong[i]:
                    sg = mul(inv(self.trans[i][s[p]]), mul(s, u))
                    h, j = self.strip(sg, i + 1)
                    if j < len(self.base) or h != self.identity:
                        if j == len(self.base):
                            self._new_level(next(x for x in range(self.degree) if h[x] != x))
                        for level in range(i + 1, j + 1):
                            self.strong[level].append(h)
                            self._orbit(level)
                        restart = j
                        break
                if restart is not None:
                    break
            if restart is None:
                i -= 1
            else:
                i = restart

    def order(self) -> int:
        return prod(len(t) for t in self.trans)

    def __contains__(self, g: Perm) -> bool:
        h, j = self.strip(tuple(g))
        return j == len(self.base) and h == self.identity


def group_order(generators: Sequence[Perm], degree: int) -> int:
    return StabilizerChain(generators, degree).order()
