"""Finite groups as multiplication tables, Cayley schemes and S-rings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .autgroup import is_schurian
from .errors import SchemaError, SchemeError
from .scheme import Scheme, validate

__all__ = [
    "GroupTable",
    "ClassPartition",
    "SRingReport",
    "SRingRejected",
    "cyclic_group",
    "direct_product_group",
    "elementary_abelian",
    "symmetric_group",
    "thin_partition",
    "thin_scheme",
    "validate_sring",
    "cayley_scheme",
    "sring_wreath",
    "sring_direct",
    "is_schurian_sring",
    "parse_sring",
    "serialize_sring",
]


@dataclass(frozen=True, eq=False)
class GroupTable:
    """Group on ``0..order-1`` with identity 0."""

    mul: np.ndarray = field(repr=False)
    inv: np.ndarray = field(repr=False)

    def __post_init__(self):
        mul = np.array(self.mul, dtype=np.int64)
        inv = np.array(self.inv, dtype=np.int64)
        g = mul.shape[0]
        if mul.shape != (g, g) or inv.shape != (g,):
            raise ValueError("multiplication table must be g x g and inverse table of length g")
        mul.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "inv", inv)

    @classmethod
    def from_table(cls, mul) -> "GroupTable":
        mul = np.asarray(mul, dtype=np.int64)
        inv = np.argmax(mul == 0, axis=1)
        out = cls(mul, inv)
        problems = out.check()
        if problems:
            raise ValueError("; ".join(problems))
        return out

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    def check(self) -> list:
        m, g = self.mul, self.order
        problems = []
        if m.min() < 0 or m.max() >= g:
            return ["table entries out of range"]
        if not (np.array_equal(m[0], np.arange(g)) and np.array_equal(m[:, 0], np.arange(g))):
            problems.append("0 is not a two-sided identity")
        if not np.array_equal(m[np.arange(g), self.inv], np.zeros(g, dtype=np.int64)):
            problems.append("inverse table is wrong")
        if not np.array_equal(_assoc_left(m), _assoc_right(m)):
            problems.append("multiplication is not associative")
        return problems

    def __eq__(self, other):
        if not isinstance(other, GroupTable):
            return NotImplemented
        return np.array_equal(self.mul, other.mul) and np.array_equal(self.inv, other.inv)

    def __hash__(self):
        return hash(self.mul.tobytes())


def _assoc_left(m):
    # (a b) c
    return m[m[:, :, None], np.arange(m.shape[0])[None, None, :]]


def _assoc_right(m):
    # a (b c)
    return m[np.arange(m.shape[0])[:, None, None], m[None, :, :]]


def cyclic_group(n: int) -> GroupTable:
    if n < 1:
        raise ValueError("cyclic group needs n >= 1")
    a = np.arange(n)
    return GroupTable((a[:, None] + a[None, :]) % n, (-a) % n)


def direct_product_group(g1: GroupTable, g2: GroupTable) -> GroupTable:
    """Pair ``(a, b)`` is encoded as ``a * g2.order + b``."""
    n2 = g2.order
    mul = (g1.mul[:, None, :, None] * n2 + g2.mul[None, :, None, :]).reshape(g1.order * n2, -1)
    inv = (g1.inv[:, None] * n2 + g2.inv[None, :]).ravel()
    return GroupTable(mul, inv)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def elementary_abelian(p: int, k: int) -> GroupTable:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("rank must be at least 1")
    out = cyclic_group(p)
    for _ in range(k - 1):
        out = direct_product_group(out, cyclic_group(p))
    return out


def symmetric_group(n: int) -> GroupTable:
    """Permutations of ``0..n-1`` in lexicographic order (identity first);
    the product ``a b`` applies ``b`` first."""
    perms = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    mul = [[index[tuple(a[x] for x in b)] for b in perms] for a in perms]
    return GroupTable.from_table(mul)


@dataclass(frozen=True)
class ClassPartition:
    classes: tuple

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(tuple(sorted(int(v) for v in c)) for c in self.classes))

    def class_of(self, order: int) -> np.ndarray:
        out = np.full(order, -1, dtype=np.int64)
        for i, c in enumerate(self.classes):
            out[list(c)] = i
        return out

    def structure_problems(self, order: int) -> list:
        seen = [v for c in self.classes for v in c]
        problems = []
        if any(len(c) == 0 for c in self.classes):
            problems.append("empty class")
        if any(v < 0 or v >= order for v in seen):
            problems.append("element outside the group")
        elif len(seen) != len(set(seen)) or len(seen) != order:
            problems.append("classes do not partition the group")
        return problems


def thin_partition(g: GroupTable) -> ClassPartition:
    return ClassPartition([[x] for x in range(g.order)])


@dataclass(frozen=True)
class SRingReport:
    identity: bool      # {e} is a class of its own, and it is class 0
    product: bool       # span of class sums closed under the group-ring product
    inverse: bool       # classes closed under inversion
    witnesses: tuple = ()

    @property
    def ok(self) -> bool:
        return self.identity and self.product and self.inverse

    def __bool__(self):
        return self.ok

    def failed(self) -> list:
        names = {"identity": "(1)", "product": "(2)", "inverse": "(3)"}
        return [names[k] for k in ("identity", "product", "inverse") if not getattr(self, k)]


class SRingRejected(SchemeError):
    def __init__(self, report: SRingReport, message: str = None):
        self.report = report
        conds = ", ".join(report.failed()) or "structure"
        super().__init__(message or f"not an S-ring: condition {conds} fails; {list(report.witnesses)}")


def validate_sring(g: GroupTable, part: ClassPartition) -> SRingReport:
    """Check the three S-ring conditions by expanding class sums in the
    group ring."""
    problems = part.structure_problems(g.order)
    if problems:
        raise ValueError("; ".join(problems))
    cls = part.class_of(g.order)
    witnesses = []
    identity = part.classes[0] == (0,)
    if not identity:
        witnesses.append(("(1)", part.classes[0]))
    inverse = True
    for i, c in enumerate(part.classes):
        inv_classes = set(cls[g.inv[list(c)]].tolist())
        if len(inv_classes) != 1 or len(part.classes[inv_classes.pop()]) != len(c):
            inverse = False
            witnesses.append(("(3)", i))
    product = True
    for i, ci in enumerate(part.classes):
        for j, cj in enumerate(part.classes):
            coeff = np.bincount(g.mul[np.ix_(ci, cj)].ravel(), minlength=g.order)
            for k, ck in enumerate(part.classes):
                vals = coeff[list(ck)]
                if (vals != vals[0]).any():
                    product = False
                    witnesses.append(("(2)", (i, j, k), tuple(int(v) for v in vals)))
                    break
    return SRingReport(identity, product, inverse, tuple(witnesses))


_AXIOM_TO_CONDITION = {"(1)": "identity", "(2)": "product", "(3)": "inverse", "surjectivity": "identity"}


def cayley_scheme(g: GroupTable, part: ClassPartition) -> Scheme:
    """Scheme with ``relation[x][y]`` = class of ``x^-1 y``.

    Raises :class:`SRingRejected` (carrying the per-condition report) when
    the partition does not give an association scheme.
    """
    report = validate_sring(g, part)
    if not (report.identity and report.inverse):
        raise SRingRejected(report)
    cls = part.class_of(g.order)
    rel = cls[g.mul[g.inv[:, None], np.arange(g.order)[None, :]]]
    s = Scheme(rel, len(part.classes))
    scheme_report = validate(s)
    if not scheme_report.ok:
        failed = {_AXIOM_TO_CONDITION[v.axiom] for v in scheme_report.violations}
        mapped = SRingReport("identity" not in failed, "product" not in failed, "inverse" not in failed,
                             tuple(("scheme axiom " + v.axiom, v.witness) for v in scheme_report.violations[:5]))
        raise SRingRejected(mapped)
    return s


def thin_scheme(g: GroupTable) -> Scheme:
    return cayley_scheme(g, thin_partition(g))


def _require(g, part):
    report = validate_sring(g, part)
    if not report.ok:
        raise SRingRejected(report)


def sring_wreath(g1: GroupTable, part1: ClassPartition, g2: GroupTable, part2: ClassPartition):
    """Wreath product on ``G1 x G2``: classes ``D x G2`` for the non-identity
    classes ``D`` of the first factor, then ``{e} x C`` for those of the
    second, matching the wreath label order."""
    _require(g1, part1)
    _require(g2, part2)
    n2 = g2.order
    classes = [[0]]
    classes += [[a * n2 + b for a in d for b in range(n2)] for d in part1.classes[1:]]
    classes += [list(c) for c in part2.classes[1:]]
    return direct_product_group(g1, g2), ClassPartition(classes)


def sring_direct(g1: GroupTable, part1: ClassPartition, g2: GroupTable, part2: ClassPartition):
    """Classes ``C_i x D_j`` with index ``i * r2 + j``."""
    _require(g1, part1)
    _require(g2, part2)
    n2 = g2.order
    classes = [[a * n2 + b for a in c for b in d] for c in part1.classes for d in part2.classes]
    return direct_product_group(g1, g2), ClassPartition(classes)


def is_schurian_sring(g: GroupTable, part: ClassPartition) -> bool:
    _require(g, part)
    return is_schurian(cayley_scheme(g, part))


# -- JSON --------------------------------------------------------------------

def _group_from_json(doc, path="group"):
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SchemaError("group must be an object with a 'kind'", field=path)
    kind = doc["kind"]
    try:
        if kind == "cyclic":
            return cyclic_group(int(doc["n"]))
        if kind == "elementary_abelian":
            return elementary_abelian(int(doc["p"]), int(doc["k"]))
        if kind == "symmetric":
            return symmetric_group(int(doc["n"]))
        if kind == "direct":
            factors = doc["factors"]
            out = _group_from_json(factors[0], f"{path}.factors[0]")
            for i, f in enumerate(factors[1:], start=1):
                out = direct_product_group(out, _group_from_json(f, f"{path}.factors[{i}]"))
            return out
        if kind == "table":
            return GroupTable.from_table(doc["mul"])
    except KeyError as exc:
        raise SchemaError("missing key", field=f"{path}.{exc.args[0]}") from None
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc), field=path) from None
    raise SchemaError(f"unknown group kind {kind!r}", field=f"{path}.kind")


def parse_sring(doc):
    """``{"group": {...}, "classes": [[...], ...]}`` -> (GroupTable, ClassPartition)."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise SchemaError("S-ring document must be a JSON object")
    for key in ("group", "classes"):
        if key not in doc:
            raise SchemaError("missing key", field=key)
    g = _group_from_json(doc["group"])
    classes = doc["classes"]
    if not isinstance(classes, list) or not all(isinstance(c, list) for c in classes):
        raise SchemaError("must be a list of lists", field="classes")
    for i, c in enumerate(classes):
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in c):
            raise SchemaError("elements must be integers", field=f"classes[{i}]")
    part = ClassPartition(classes)
    problems = part.structure_problems(g.order)
    if problems:
        raise SchemaError("; ".join(problems), field="classes")
    return g, part


def serialize_sring(g: GroupTable, part: ClassPartition) -> str:
    doc = {"group": {"kind": "table", "mul": g.mul.tolist()},
           "classes": [list(c) for c in part.classes]}
    return json.dumps(doc, separators=(",", ":"))
