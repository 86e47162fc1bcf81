"""Permutations as tuples and a deterministic Schreier-Sims stabilizer chain.

A permutation ``p`` maps point ``x`` to ``p[x]``.  ``compose(a, b)`` is
``a after b``: first ``b``, then ``a``.
"""

from __future__ import annotations

from itertools import product


def identity(n):
    return tuple(range(n))


def compose(a, b):
    return tuple(a[x] for x in b)


def inverse(p):
    inv = [0] * len(p)
    for x, y in enumerate(p):
        inv[y] = x
    return tuple(inv)


def is_identity(p):
    return all(x == y for x, y in enumerate(p))


class StabilizerChain:
    """Base, strong generators and explicit transversals of a permutation group.

    Base points are taken in increasing order among the points moved by the
    current generators, so the chain is fully determined by the generator
    list.
    """

    def __init__(self, degree, generators=()):
        self.degree = degree
        gens = [tuple(g) for g in generators if not is_identity(g)]
        self.base = []
        self.strong = []        # strong[l]: generators fixing base[:l]
        self.transversals = []  # transversals[l]: {point: u with u[base[l]] == point}
        for g in gens:
            if all(g[b] == b for b in self.base):
                self._new_base_point(g)
        for level in range(len(self.base)):
            self.strong.append([g for g in gens if all(g[b] == b for b in self.base[:level])])
            self.transversals.append(None)
        self._build()

    def _new_base_point(self, g):
        self.base.append(next(x for x in range(self.degree) if g[x] != x))

    def _transversal(self, level):
        if self.transversals[level] is None:
            b = self.base[level]
            trans = {b: identity(self.degree)}
            queue = [b]
            for x in queue:
                for s in self.strong[level]:
                    y = s[x]
                    if y not in trans:
                        trans[y] = compose(s, trans[x])
                        queue.append(y)
            self.transversals[level] = trans
        return self.transversals[level]

    def strip(self, g, start=0):
        """Sift ``g`` down the chain; returns the residue and the level where
        sifting stopped (``len(base)`` if it went through)."""
        for level in range(start, len(self.base)):
            trans = self._transversal(level)
            x = g[self.base[level]]
            if x not in trans:
                return g, level
            g = compose(inverse(trans[x]), g)
        return g, len(self.base)

    def _build(self):
        i = len(self.base) - 1
        while i >= 0:
            trans = self._transversal(i)
            found = None
            for x in sorted(trans):
                u = trans[x]
                for s in self.strong[i]:
                    schreier = compose(inverse(trans[s[x]]), compose(s, u))
                    h, j = self.strip(schreier, i + 1)
                    if j < len(self.base) or not is_identity(h):
                        found = (h, j)
                        break
                if found:
                    break
            if found is None:
                i -= 1
                continue
            h, j = found
            if j == len(self.base):
                self._new_base_point(h)
                self.strong.append([])
                self.transversals.append(None)
            for level in range(i + 1, j + 1):
                self.strong[level].append(h)
                self.transversals[level] = None
            i = j

    def order(self) -> int:
        out = 1
        for level in range(len(self.base)):
            out *= len(self._transversal(level))
        return out

    def contains(self, g) -> bool:
        g = tuple(g)
        if len(g) != self.degree:
            return False
        h, j = self.strip(g)
        return j == len(self.base) and is_identity(h)

    def elements(self):
        """Every group element exactly once (as ``u_0 u_1 ... u_k``)."""
        levels = [list(self._transversal(l).values()) for l in range(len(self.base))]
        if not levels:
            yield identity(self.degree)
            return
        for combo in product(*levels):
            g = identity(self.degree)
            for u in combo:
                g = compose(g, u)
            yield g
