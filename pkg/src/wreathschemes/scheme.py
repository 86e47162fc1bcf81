"""Finite association schemes stored as relation-label matrices.

A scheme on ``n`` points with ``r`` relations is an ``n x n`` integer matrix
whose entries are labels ``0..r-1``.  Label 0 is always the identity
relation.  Points and labels are dense 0-based integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import SchemaError, StructureError

__all__ = [
    "Scheme",
    "Violation",
    "ValidationReport",
    "IntersectionTensor",
    "Morphism",
    "validate",
    "intersection_numbers",
    "valencies",
    "transpose_map",
    "is_commutative",
    "is_symmetric",
    "check_morphism",
    "serialize",
    "parse",
]


class Scheme:
    """Immutable relation matrix plus label count.

    Construction only checks that the matrix is well formed (square, labels
    in range).  Use :func:`validate` for the scheme axioms.
    """

    __slots__ = ("_relation", "_num_relations", "_labels", "_hash")

    def __init__(self, relation, num_relations: Optional[int] = None,
                 labels: Optional[Sequence[str]] = None):
        try:
            arr = np.array(relation, dtype=np.int64)
        except (TypeError, ValueError) as exc:
            raise StructureError(f"relation matrix is not integral: {exc}") from None
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise StructureError(f"relation matrix must be square and non-empty, got shape {arr.shape}")
        if num_relations is None:
            num_relations = int(arr.max()) + 1
        if num_relations < 1:
            raise StructureError("num_relations must be positive")
        if arr.min() < 0 or arr.max() >= num_relations:
            bad = np.argwhere((arr < 0) | (arr >= num_relations))[0]
            raise StructureError(
                f"label {arr[tuple(bad)]} at cell {tuple(int(v) for v in bad)} "
                f"outside 0..{num_relations - 1}")
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != num_relations:
                raise StructureError(f"expected {num_relations} labels, got {len(labels)}")
        arr.setflags(write=False)
        self._relation = arr
        self._num_relations = int(num_relations)
        self._labels = labels
        self._hash = None

    @property
    def relation(self) -> np.ndarray:
        return self._relation

    @property
    def size(self) -> int:
        return self._relation.shape[0]

    @property
    def num_relations(self) -> int:
        return self._num_relations

    @property
    def labels(self):
        if self._labels is None:
            return tuple(str(i) for i in range(self._num_relations))
        return self._labels

    @property
    def has_labels(self) -> bool:
        return self._labels is not None

    def with_labels(self, labels) -> "Scheme":
        return Scheme(self._relation, self._num_relations, labels)

    def relabel_points(self, perm) -> "Scheme":
        """Scheme whose point ``perm[x]`` plays the role of old point ``x``."""
        perm = np.asarray(perm)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        return Scheme(self._relation[np.ix_(inv, inv)], self._num_relations, self._labels)

    def __eq__(self, other):
        if not isinstance(other, Scheme):
            return NotImplemented
        return (self._num_relations == other._num_relations
                and self._relation.shape == other._relation.shape
                and bool(np.array_equal(self._relation, other._relation))
                and self._labels == other._labels)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._num_relations, self._relation.shape,
                               self._relation.tobytes(), self._labels))
        return self._hash

    def __repr__(self):
        return f"Scheme(size={self.size}, num_relations={self.num_relations})"


@dataclass(frozen=True)
class Violation:
    axiom: str  # "(1)", "(2)", "(3)" or "surjectivity"
    witness: tuple
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def axioms(self) -> set:
        return {v.axiom for v in self.violations}

    def __bool__(self):
        return self.ok


def validate(raw) -> ValidationReport:
    """Check all scheme axioms and collect every violation.

    ``raw`` may be a :class:`Scheme` or anything accepted by its
    constructor.  Malformed matrices raise :class:`StructureError` instead
    of producing a report.
    """
    s = raw if isinstance(raw, Scheme) else Scheme(raw)
    R, n, r = s.relation, s.size, s.num_relations
    out = []

    diag = np.diagonal(R)
    for x in np.flatnonzero(diag != 0):
        out.append(Violation("(1)", (int(x), int(x)),
                             f"diagonal cell ({x},{x}) has label {diag[x]}, expected 0"))
    off = (R == 0) & ~np.eye(n, dtype=bool)
    for x, y in np.argwhere(off):
        out.append(Violation("(1)", (int(x), int(y)),
                             f"off-diagonal cell ({x},{y}) carries the identity label 0"))

    present = np.zeros(r, dtype=bool)
    present[np.unique(R)] = True
    for i in np.flatnonzero(~present):
        out.append(Violation("surjectivity", (int(i),), f"label {i} does not occur"))

    # transpose closure: every label must have a single transposed label
    for i in np.flatnonzero(present):
        cells = np.argwhere(R == i)
        t = R.T[R == i]
        for c in np.flatnonzero(t != t[0]):
            out.append(Violation(
                "(3)", (tuple(int(v) for v in cells[0]), tuple(int(v) for v in cells[c])),
                f"label {i} transposes to both {t[0]} and {t[c]}"))

    # closure under the matrix product: tally (R[x,y], R[y,z]) over y for each
    # cell (x,z); the tally may depend only on R[x,z]
    reference = {}
    codes_base = np.arange(n)[None, :] * (r * r)
    for x in range(n):
        codes = R[x, :, None] * r + R  # [y, z]
        counts = np.bincount((codes + codes_base).ravel(), minlength=n * r * r).reshape(n, r * r)
        for z in range(n):
            k = int(R[x, z])
            ref = reference.get(k)
            if ref is None:
                reference[k] = (counts[z], (x, z))
            elif not np.array_equal(ref[0], counts[z]):
                diff = int(np.flatnonzero(ref[0] != counts[z])[0])
                i, j = divmod(diff, r)
                out.append(Violation(
                    "(2)", (ref[1], (x, z), (i, j, k)),
                    f"p[{i}][{j}][{k}] is {ref[0][diff]} at cell {ref[1]} "
                    f"but {counts[z][diff]} at cell ({x}, {z})"))
    return ValidationReport(tuple(out))


@dataclass(frozen=True)
class IntersectionTensor:
    p: np.ndarray = field(repr=False)

    def __getitem__(self, idx):
        return self.p[idx]

    @property
    def valencies(self):
        return [int(v) for v in self.p[:, :, 0].sum(axis=1)]


def _row0_representatives(s: Scheme):
    """For each label k a point z with relation[0][z] == k."""
    row = s.relation[0]
    reps = np.full(s.num_relations, -1, dtype=np.int64)
    for z in range(s.size - 1, -1, -1):
        reps[row[z]] = z
    if (reps < 0).any():
        raise StructureError("some label does not occur in row 0; validate the scheme first")
    return reps


def intersection_numbers(s: Scheme) -> IntersectionTensor:
    R, r = s.relation, s.num_relations
    reps = _row0_representatives(s)
    p = np.zeros((r, r, r), dtype=np.int64)
    for k in range(r):
        counts = np.bincount(R[0, :] * r + R[:, reps[k]], minlength=r * r)
        p[:, :, k] = counts.reshape(r, r)
    p.setflags(write=False)
    return IntersectionTensor(p)


def valencies(s: Scheme) -> list:
    return [int(v) for v in np.bincount(s.relation[0], minlength=s.num_relations)]


def transpose_map(s: Scheme) -> list:
    """The involution i -> i' with relation[y][x] = (relation[x][y])'."""
    reps = _row0_representatives(s)
    return [int(s.relation[z, 0]) for z in reps]


def is_commutative(s: Scheme) -> bool:
    p = intersection_numbers(s).p
    return bool(np.array_equal(p, p.transpose(1, 0, 2)))


def is_symmetric(s: Scheme) -> bool:
    return transpose_map(s) == list(range(s.num_relations))


@dataclass(frozen=True)
class Morphism:
    """Point map ``f`` and index map ``sigma`` between two schemes."""

    f: tuple
    sigma: tuple

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(int(v) for v in self.f))
        object.__setattr__(self, "sigma", tuple(int(v) for v in self.sigma))

    def compose(self, first: "Morphism") -> "Morphism":
        """``self after first``."""
        return Morphism(tuple(self.f[v] for v in first.f),
                        tuple(self.sigma[v] for v in first.sigma))

    def is_surjective(self, n_dst: int) -> bool:
        return len(set(self.f)) == n_dst


def check_morphism(src: Scheme, dst: Scheme, m: Morphism) -> bool:
    if len(m.f) != src.size or len(m.sigma) != src.num_relations:
        raise ValueError(
            f"morphism shape (|f|={len(m.f)}, |sigma|={len(m.sigma)}) does not match "
            f"source scheme ({src.size} points, {src.num_relations} relations)")
    f = np.asarray(m.f, dtype=np.int64)
    sigma = np.asarray(m.sigma, dtype=np.int64)
    if f.size and (f.min() < 0 or f.max() >= dst.size):
        return False
    if sigma.min() < 0 or sigma.max() >= dst.num_relations or sigma[0] != 0:
        return False
    return bool(np.array_equal(sigma[src.relation], dst.relation[np.ix_(f, f)]))


def serialize(s: Scheme) -> str:
    doc = {"size": s.size, "num_relations": s.num_relations,
           "relation": s.relation.tolist()}
    if s.has_labels:
        doc["labels"] = list(s.labels)
    return json.dumps(doc, separators=(",", ":"))


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


_SCHEME_KEYS = {"size", "num_relations", "relation", "labels"}


def parse(doc, strict_identity: bool = True) -> Scheme:
    """Build a Scheme from a JSON string or an already decoded dict.

    With ``strict_identity`` (the default) label 0 must be exactly the
    diagonal; such inputs are rejected, never renumbered.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise SchemaError("scheme document must be a JSON object")
    unknown = set(doc) - _SCHEME_KEYS
    if unknown:
        raise SchemaError("unknown key", field=sorted(unknown)[0])
    for key in ("size", "num_relations", "relation"):
        if key not in doc:
            raise SchemaError("missing key", field=key)
    n, r, rel = doc["size"], doc["num_relations"], doc["relation"]
    if not _is_int(n) or n < 1:
        raise SchemaError("must be a positive integer", field="size")
    if not _is_int(r) or r < 1:
        raise SchemaError("must be a positive integer", field="num_relations")
    if not isinstance(rel, list) or len(rel) != n:
        raise SchemaError(f"must be a list of {n} rows", field="relation")
    for x, row in enumerate(rel):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"must be a list of {n} entries", field=f"relation[{x}]")
        for y, v in enumerate(row):
            if not _is_int(v):
                raise SchemaError("label must be an integer", field=f"relation[{x}][{y}]")
            if not 0 <= v < r:
                raise SchemaError(f"label {v} outside 0..{r - 1}", field=f"relation[{x}][{y}]")
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != r or not all(isinstance(v, str) for v in labels):
            raise SchemaError(f"must be a list of {r} strings", field="labels")
    s = Scheme(rel, r, labels)
    if strict_identity:
        R = s.relation
        zero = R == 0
        if not np.array_equal(zero, np.eye(n, dtype=bool)):
            x, y = (int(v) for v in np.argwhere(zero != np.eye(n, dtype=bool))[0])
            raise SchemaError("label 0 must be exactly the identity relation",
                              field=f"relation[{x}][{y}]")
    return s
