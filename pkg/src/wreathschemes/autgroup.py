"""Automorphism groups of association schemes.

Color-preserving automorphisms (``sigma`` = identity) are found by
individualization and color-degree refinement: a partition of the points is
refined by the number of neighbours of each relation color in each cell,
and automorphisms are assembled level by level along a base, keeping only
one coset representative per new orbit point.  Color-permuting
automorphisms are found by first filtering label permutations that preserve
valencies and intersection numbers, then searching for one point map per
surviving label permutation.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .perm import StabilizerChain, compose
from .scheme import Scheme, _row0_representatives, intersection_numbers, valencies

log = logging.getLogger(__name__)

__all__ = [
    "PermGroupWithColors",
    "color_aut_group",
    "full_aut_group",
    "find_isomorphism",
    "sigma_of",
    "index_permutation_candidates",
    "orbitals",
    "is_schurian",
    "predicted_wreath_aut_order",
    "sigma_fiber_counts",
]


@dataclass
class PermGroupWithColors:
    """Generators ``(f, sigma)`` of a group of scheme automorphisms."""

    degree: int
    generators: list
    _chain: Optional[StabilizerChain] = field(default=None, repr=False, compare=False)

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = StabilizerChain(self.degree, [f for f, _ in self.generators])
        return self._chain

    @property
    def order(self) -> int:
        return self.chain.order()

    def contains(self, f) -> bool:
        return self.chain.contains(f)

    def point_generators(self):
        return [f for f, _ in self.generators]

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "order": str(self.order),
                "generators": [{"f": list(f), "sigma": list(s)} for f, s in self.generators]}


# -- refinement --------------------------------------------------------------

class _Colored:
    """Relation matrix split into one 0/1 matrix per color."""

    def __init__(self, relation, num_colors):
        self.relation = np.asarray(relation)
        self.n = self.relation.shape[0]
        self.onehot = np.stack([(self.relation == k).astype(np.int64) for k in range(num_colors)])

    def refine(self, cells):
        """Equitable refinement; returns (cells, trace).

        Cells are split by the vector of color counts into every current
        cell, new cells sorted by that vector, so the result and the trace
        are invariant under isomorphism.
        """
        trace = []
        while True:
            memb = np.zeros((self.n, len(cells)), dtype=np.int64)
            for c, cell in enumerate(cells):
                memb[cell, c] = 1
            counts = np.einsum("kxy,yc->xkc", self.onehot, memb).reshape(self.n, -1)
            new_cells = []
            step = []
            for cell in cells:
                if len(cell) == 1:
                    new_cells.append(cell)
                    continue
                groups = {}
                for x in cell:
                    groups.setdefault(counts[x].tobytes(), []).append(x)
                keys = sorted(groups)
                step.append(tuple((k, len(groups[k])) for k in keys))
                new_cells.extend(groups[k] for k in keys)
            trace.append(tuple(step))
            if len(new_cells) == len(cells):
                return new_cells, tuple(trace)
            cells = new_cells


def _individualize(cells, c, x):
    cell = cells[c]
    return cells[:c] + [[x], [y for y in cell if y != x]] + cells[c + 1:]


def _target_cell(cells):
    return next((c for c, cell in enumerate(cells) if len(cell) > 1), None)


def _search(left, right, lcells, rcells):
    """Some bijection mapping ``left`` colors onto ``right`` colors and the
    ordered partition ``lcells`` onto ``rcells``, or ``None``."""
    c = _target_cell(lcells)
    if c is None:
        f = [0] * left.n
        for lc, rc in zip(lcells, rcells):
            f[lc[0]] = rc[0]
        fa = np.asarray(f)
        if np.array_equal(right.relation[np.ix_(fa, fa)], left.relation):
            return tuple(f)
        return None
    x = lcells[c][0]
    l2, ltrace = left.refine(_individualize(lcells, c, x))
    for y in rcells[c]:
        r2, rtrace = right.refine(_individualize(rcells, c, y))
        if rtrace != ltrace:
            continue
        found = _search(left, right, l2, r2)
        if found is not None:
            return found
    return None


def find_isomorphism(left_relation, right_relation, num_colors):
    """Point map ``f`` with ``right[f(x)][f(y)] == left[x][y]``, or ``None``."""
    left = _Colored(left_relation, num_colors)
    right = _Colored(right_relation, num_colors)
    if left.n != right.n:
        return None
    lcells, ltrace = left.refine([list(range(left.n))])
    rcells, rtrace = right.refine([list(range(right.n))])
    if ltrace != rtrace:
        return None
    return _search(left, right, lcells, rcells)


def _orbit(point, gens):
    orb = {point}
    queue = [point]
    for x in queue:
        for g in gens:
            if g[x] not in orb:
                orb.add(g[x])
                queue.append(g[x])
    return orb


def _color_automorphisms(s: Scheme):
    colored = _Colored(s.relation, s.num_relations)
    n = s.size
    cells, _ = colored.refine([list(range(n))])
    path = [cells]
    base = []
    while (c := _target_cell(path[-1])) is not None:
        x = path[-1][c][0]
        base.append((c, x))
        path.append(colored.refine(_individualize(path[-1], c, x))[0])
    gens = []
    for level in range(len(base) - 1, -1, -1):
        c, b = base[level]
        cells = path[level]
        _, btrace = colored.refine(_individualize(cells, c, b))
        lcells = path[level + 1]
        orb = _orbit(b, gens)
        for y in cells[c]:
            if y in orb:
                continue
            rcells, rtrace = colored.refine(_individualize(cells, c, y))
            if rtrace != btrace:
                continue
            f = _search(colored, colored, lcells, rcells)
            if f is not None:
                gens.append(f)
                orb = _orbit(b, gens)
    return gens


def sigma_of(s: Scheme, f) -> tuple:
    """Index permutation induced by a point map (read off row 0)."""
    reps = _row0_representatives(s)
    R = s.relation
    return tuple(int(R[f[0], f[z]]) for z in reps)


def color_aut_group(s: Scheme) -> PermGroupWithColors:
    ident = tuple(range(s.num_relations))
    gens = sorted(_color_automorphisms(s))
    return PermGroupWithColors(s.size, [(f, ident) for f in gens])


def index_permutation_candidates(s: Scheme):
    """Label permutations fixing 0 that preserve valencies and every
    intersection number."""
    r = s.num_relations
    p = intersection_numbers(s).p
    k = valencies(s)
    out = []
    sigma = [0] + [None] * (r - 1)
    used = {0}

    def consistent(i):
        done = range(i + 1)
        for a in done:
            for b in done:
                for c in done:
                    if i not in (a, b, c):
                        continue
                    if p[sigma[a], sigma[b], sigma[c]] != p[a, b, c]:
                        return False
        return True

    def extend(i):
        if i == r:
            out.append(tuple(sigma))
            return
        for t in range(1, r):
            if t in used or k[t] != k[i]:
                continue
            sigma[i] = t
            used.add(t)
            if consistent(i):
                extend(i + 1)
            used.discard(t)
        sigma[i] = None

    extend(1)
    return out


def full_aut_group(s: Scheme) -> PermGroupWithColors:
    """All ``(f, sigma)`` making the morphism square commute."""
    color = color_aut_group(s)
    gens = list(color.generators)
    R = s.relation
    ident = tuple(range(s.num_relations))
    for sigma in index_permutation_candidates(s):
        if sigma == ident:
            continue
        recolored = np.asarray(sigma)[R]
        f = find_isomorphism(recolored, R, s.num_relations)
        if f is not None:
            gens.append((f, sigma_of(s, f)))
    gens.sort()
    return PermGroupWithColors(s.size, gens)


# -- orbitals and the Schurian test ------------------------------------------

def orbitals(group, n: int = None) -> np.ndarray:
    """Orbits of the diagonal action on ordered pairs, as an ``n x n`` array
    of orbit ids numbered by first appearance in row-major order.

    ``group`` is a :class:`PermGroupWithColors` whose generators all have the
    identity ``sigma``, or a plain list of point permutations.
    """
    if isinstance(group, PermGroupWithColors):
        for _, sig in group.generators:
            if list(sig) != list(range(len(sig))):
                raise ValueError("orbitals need color-preserving generators")
        n = group.degree
        gens = group.point_generators()
    else:
        gens = [tuple(g) for g in group]
        if n is None:
            raise ValueError("degree required for a bare generator list")
    parent = list(range(n * n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for x in range(n):
            for y in range(n):
                a, b = find(x * n + y), find(g[x] * n + g[y])
                if a != b:
                    parent[max(a, b)] = min(a, b)
    ids = {}
    out = np.empty(n * n, dtype=np.int64)
    for cell in range(n * n):
        out[cell] = ids.setdefault(find(cell), len(ids))
    return out.reshape(n, n)


def is_schurian(s: Scheme) -> bool:
    """Each relation is a single orbital of the color-preserving group."""
    orb = orbitals(color_aut_group(s))
    return int(orb.max()) + 1 == s.num_relations


# -- wreath automorphism order -----------------------------------------------

def sigma_fiber_counts(s: Scheme, group: PermGroupWithColors = None, enumerate_limit: int = 200_000):
    """Number of automorphisms carrying each realised index permutation.

    Elements are enumerated from the stabilizer chain and tallied by their
    index permutation.  Above ``enumerate_limit`` elements the count falls
    back to the coset size ``|Aut(X|I)|`` for every realised permutation.
    """
    if group is None:
        group = full_aut_group(s)
    if group.order <= enumerate_limit:
        return dict(Counter(sigma_of(s, f) for f in group.chain.elements()))
    log.info("group of order %d too large to enumerate; using coset sizes", group.order)
    kernel = color_aut_group(s).order
    realised = {tuple(range(s.num_relations))}
    frontier = list(realised)
    while frontier:
        t = frontier.pop()
        for _, g in group.generators:
            u = compose(g, t)
            if u not in realised:
                realised.add(u)
                frontier.append(u)
    return {t: kernel for t in realised}


def predicted_wreath_aut_order(x: Scheme, y: Scheme) -> int:
    """``|Aut(X)| * sum over realised tau of |Aut(Y)_tau| ** #X``."""
    counts = sigma_fiber_counts(y)
    return full_aut_group(x).order * sum(c ** x.size for c in counts.values())
