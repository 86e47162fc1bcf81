"""Finite truncations of towers of iterated wreath products.

A tower is a list of factor schemes ``X_1, X_2, ...``; its depth-``n``
truncation is ``(...(X_1 wr X_2) wr ...) wr X_n``.  Dropping the last
coordinate gives the step morphisms, and the label sets of the truncations
stabilize in the way described by :func:`limit_labels`.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import SchemaError
from .products import DEFAULT_CAP, class_one, projection_morphism, wreath_product
from .scheme import Morphism, Scheme, check_morphism, parse, serialize
from .spectral import (
    VERIFY_TOL,
    SpectralDecomposition,
    decompose,
    embed_algebra,
    idempotent_correspondence,
    wreath_idempotents,
)

__all__ = [
    "Tower",
    "LimitLabel",
    "TAIL",
    "ProjectiveCheck",
    "kernel_tower",
    "limit_labels",
    "verify_projective_system",
    "verify_idempotent_chain",
    "parse_tower",
    "serialize_tower",
]


class Tower:
    """Factors of a wreath tower with memoized truncations.

    With ``repeat=True`` the last factor repeats forever and the tower can
    be truncated at any depth.  All caches are guarded by one re-entrant
    lock, so concurrent calls at different depths serialize instead of
    deadlocking.
    """

    def __init__(self, factors, repeat: bool = False, cap: int = None):
        factors = list(factors)
        if not factors:
            raise ValueError("a tower needs at least one factor")
        self.factors = tuple(factors)
        self.repeat = bool(repeat)
        self.cap = DEFAULT_CAP if cap is None else cap
        self._lock = threading.RLock()
        self._truncations = {}
        self._morphisms = {}
        self._decompositions = {}

    @property
    def max_depth(self):
        return None if self.repeat else len(self.factors)

    def _check_depth(self, n):
        if n < 1 or (not self.repeat and n > len(self.factors)):
            raise ValueError(f"depth {n} outside 1..{self.max_depth}")

    def factor(self, n: int) -> Scheme:
        """``X_n`` (1-based)."""
        self._check_depth(n)
        return self.factors[min(n, len(self.factors)) - 1]

    def sizes(self, n: int):
        return [self.factor(i).size for i in range(1, n + 1)]

    def truncation(self, n: int) -> Scheme:
        self._check_depth(n)
        with self._lock:
            if n not in self._truncations:
                if n == 1:
                    self._truncations[1] = self.factor(1)
                else:
                    prev = self.truncation(n - 1)
                    self._truncations[n] = wreath_product(prev, self.factor(n), cap=self.cap)
            return self._truncations[n]

    def step_morphism(self, n: int) -> Morphism:
        """truncation(n) -> truncation(n-1)."""
        if n < 2:
            raise ValueError("step morphisms start at depth 2")
        return self.morphism(n, n - 1)

    def morphism(self, lam: int, mu: int) -> Morphism:
        """Direct map truncation(lam) -> truncation(mu), ``lam >= mu``:
        keep the first ``mu`` coordinates and labels of levels ``<= mu``."""
        if mu > lam or mu < 1:
            raise ValueError("need 1 <= mu <= lam")
        key = (lam, mu)
        with self._lock:
            if key not in self._morphisms:
                big, small = self.truncation(lam), self.truncation(mu)
                tail = prod(self.sizes(lam)[mu:])
                f = np.arange(big.size) // tail
                sigma = np.arange(big.num_relations)
                sigma[sigma >= small.num_relations] = 0
                self._morphisms[key] = Morphism(f, sigma)
            return self._morphisms[key]

    def decomposition(self, n: int) -> SpectralDecomposition:
        """Idempotents of truncation(n) assembled level by level, so front
        idempotents keep their index from one depth to the next."""
        self._check_depth(n)
        with self._lock:
            if n not in self._decompositions:
                here = decompose(self.factor(n))
                if n == 1:
                    self._decompositions[1] = here
                else:
                    self._decompositions[n] = wreath_idempotents(self.decomposition(n - 1), here)
            return self._decompositions[n]


def kernel_tower(v: int = 2, cap: int = None) -> Tower:
    return Tower([class_one(v)], repeat=True, cap=cap)


@dataclass(frozen=True, order=True)
class LimitLabel:
    """``(level, label)``; level 0 is the tail symbol."""

    level: int
    label: int

    @property
    def is_tail(self) -> bool:
        return self.level == 0

    def __str__(self):
        return "tail" if self.is_tail else f"({self.level},{self.label})"


TAIL = LimitLabel(0, 0)


def limit_labels(t: Tower, n: int):
    """Relation and idempotent labels of truncation(n), as limit labels.

    Position ``k`` of the returned lists is relation ``k`` (resp. column
    ``k`` of ``t.decomposition(n)``).
    """
    i_labels = [TAIL]
    j_labels = []
    for level in range(1, n + 1):
        x = t.factor(level)
        i_labels += [LimitLabel(level, a) for a in range(1, x.num_relations)]
        dec = decompose(x)
        j0 = dec.j0_index
        j_labels += [LimitLabel(level, j) for j in range(len(dec)) if level == 1 or j != j0]
    return i_labels, j_labels


@dataclass(frozen=True)
class ProjectiveCheck:
    ok: bool
    witness: tuple = ()
    message: str = ""

    def __bool__(self):
        return self.ok


def verify_projective_system(t: Tower, depth: int) -> ProjectiveCheck:
    """Check the finite chain truncation(1) <- ... <- truncation(depth).

    Every ``p_{lam,mu}`` must be a surjective morphism, ``p_{lam,lam}`` the
    identity, and ``p_{lam,nu} == p_{mu,nu} o p_{lam,mu}``.  Truncations are
    also rebuilt from their predecessor and compared bit-exactly.
    """
    for lam in range(2, depth + 1):
        rebuilt = wreath_product(t.truncation(lam - 1), t.factor(lam), cap=t.cap)
        if rebuilt != t.truncation(lam):
            return ProjectiveCheck(False, (lam, lam - 1, lam - 1), "cached truncation differs from its rebuild")
        if t.step_morphism(lam) != projection_morphism(t.truncation(lam - 1), t.factor(lam)):
            return ProjectiveCheck(False, (lam, lam - 1, lam - 1), "step morphism is not the projection")
    for lam in range(1, depth + 1):
        for mu in range(1, lam + 1):
            m = t.morphism(lam, mu)
            src, dst = t.truncation(lam), t.truncation(mu)
            if len(m.f) != src.size or len(m.sigma) != src.num_relations or not check_morphism(src, dst, m):
                return ProjectiveCheck(False, (lam, mu, mu), "not a morphism")
            if not m.is_surjective(dst.size):
                return ProjectiveCheck(False, (lam, mu, mu), "point map not surjective")
            if lam == mu and (m.f != tuple(range(src.size)) or m.sigma != tuple(range(src.num_relations))):
                return ProjectiveCheck(False, (lam, lam, lam), "map at equal depths is not the identity")
    for lam in range(1, depth + 1):
        for mu in range(1, lam + 1):
            for nu in range(1, mu + 1):
                if t.morphism(mu, nu).compose(t.morphism(lam, mu)) != t.morphism(lam, nu):
                    return ProjectiveCheck(False, (lam, mu, nu), "composition law fails")
    return ProjectiveCheck(True)


def verify_idempotent_chain(t: Tower, depth: int, tol: float = VERIFY_TOL) -> ProjectiveCheck:
    """Along each step, every idempotent ``E`` of the smaller truncation
    pulls back to the single idempotent ``E (x) J/n`` with the same index."""
    for n in range(2, depth + 1):
        small, big = t.truncation(n - 1), t.truncation(n)
        dec_small, dec_big = t.decomposition(n - 1), t.decomposition(n)
        emb = embed_algebra(big, small, t.step_morphism(n))
        corr = idempotent_correspondence(dec_big, dec_small, emb, tol)
        v = t.factor(n).size
        jv = np.ones((v, v)) / v
        for j, block in enumerate(corr.blocks):
            if block != (j,):
                return ProjectiveCheck(False, (n, j, block), "block is not the same-index singleton")
            e = np.asarray(dec_small.idempotents[j], dtype=complex)
            target = np.asarray(dec_big.idempotents[j], dtype=complex)
            if np.abs(np.kron(e, jv) - target).max() > tol:
                return ProjectiveCheck(False, (n, j, block), "pulled-back idempotent is not E (x) J/n")
    return ProjectiveCheck(True)


# -- JSON --------------------------------------------------------------------

def parse_tower(doc, cap: int = None) -> Tower:
    """``{"factors": [scheme | {"ref": "kernel-base", "v": v}], "repeat": bool}``"""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise SchemaError("tower document must be a JSON object")
    unknown = set(doc) - {"factors", "repeat"}
    if unknown:
        raise SchemaError("unknown key", field=sorted(unknown)[0])
    factors = doc.get("factors")
    if not isinstance(factors, list) or not factors:
        raise SchemaError("must be a non-empty list", field="factors")
    repeat = doc.get("repeat", False)
    if not isinstance(repeat, bool):
        raise SchemaError("must be a boolean", field="repeat")
    out = []
    for i, item in enumerate(factors):
        if isinstance(item, dict) and "ref" in item:
            if item["ref"] != "kernel-base":
                raise SchemaError(f"unknown reference {item['ref']!r}", field=f"factors[{i}].ref")
            v = item.get("v", 2)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise SchemaError("must be a positive integer", field=f"factors[{i}].v")
            out.append(class_one(v))
        else:
            try:
                out.append(parse(item))
            except SchemaError as exc:
                raise SchemaError(f"factors[{i}]: {exc}") from None
    return Tower(out, repeat=repeat, cap=cap)


def serialize_tower(t: Tower) -> str:
    factors = [json.loads(serialize(x)) for x in t.factors]
    return json.dumps({"factors": factors, "repeat": t.repeat}, separators=(",", ":"))
