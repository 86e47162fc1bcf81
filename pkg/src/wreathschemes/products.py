"""Constructors: direct and wreath products, wreath powers, kernel schemes.

Index convention for ``X wr Y`` (``nx``, ``ny`` points, ``rx``, ``ry``
relations):

* point ``(a, b)`` is encoded as ``a * ny + b``;
* label 0 is the identity;
* labels ``1 .. rx-1`` are the front relations, i.e. the non-identity
  relations of ``X`` in their original order;
* labels ``rx .. rx+ry-2`` are the rear relations, the non-identity
  relations of ``Y`` in order.

With this ordering the front adjacency matrices are ``A_x kron J`` and the
rear ones ``I kron A_y`` for the standard Kronecker ordering, the product is
associative on the nose, and ``kernel_scheme(n, v)`` coincides with
``wreath_power(class_one(v), n)`` as matrices.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from .errors import ResourceCapError, StructureError
from .scheme import Morphism, Scheme

__all__ = [
    "DEFAULT_CAP",
    "one_point",
    "class_one",
    "direct_product",
    "wreath_product",
    "wreath_power",
    "wreath_product_many",
    "kernel_scheme",
    "projection_morphism",
    "wreath_factor",
]

DEFAULT_CAP = 4096


def _guard(n: int, cap):
    cap = DEFAULT_CAP if cap is None else cap
    if n > cap:
        raise ResourceCapError(f"scheme on {n} points exceeds the size cap of {cap}")


def one_point() -> Scheme:
    return Scheme([[0]], 1)


def class_one(v: int) -> Scheme:
    """H(1, v): identity plus one relation joining all distinct points."""
    if v < 2:
        raise ValueError("class_one needs v >= 2")
    return Scheme(1 - np.eye(v, dtype=np.int64), 2)


def direct_product(x: Scheme, y: Scheme, cap=None) -> Scheme:
    """Label of ``((a,b),(c,d))`` is ``Rx[a][c] * ry + Ry[b][d]``."""
    nx, ny = x.size, y.size
    _guard(nx * ny, cap)
    rel = x.relation[:, None, :, None] * y.num_relations + y.relation[None, :, None, :]
    return Scheme(rel.reshape(nx * ny, nx * ny), x.num_relations * y.num_relations)


def wreath_product(x: Scheme, y: Scheme, cap=None) -> Scheme:
    nx, ny = x.size, y.size
    _guard(nx * ny, cap)
    rx, ry = x.num_relations, y.num_relations
    rear = np.where(y.relation == 0, 0, y.relation + (rx - 1))
    same = np.eye(nx, dtype=bool)[:, None, :, None]
    rel = np.where(same, rear[None, :, None, :], x.relation[:, None, :, None])
    rel = np.broadcast_to(rel, (nx, ny, nx, ny)).reshape(nx * ny, nx * ny)
    return Scheme(rel, rx + ry - 1)


def wreath_product_many(factors, cap=None) -> Scheme:
    """Left-nested ``X1 wr X2 wr ... wr Xn``."""
    factors = list(factors)
    if not factors:
        raise ValueError("need at least one factor")
    _guard(int(np.prod([f.size for f in factors], dtype=object)), cap)
    return reduce(lambda a, b: wreath_product(a, b, cap), factors)


def wreath_power(x: Scheme, n: int, cap=None) -> Scheme:
    if n < 1:
        raise ValueError("wreath power needs n >= 1")
    _guard(x.size ** n, cap)
    out = x
    for _ in range(n - 1):
        out = wreath_product(out, x, cap)
    return out


def kernel_scheme(n: int, v: int, cap=None) -> Scheme:
    """Words of length ``n`` over ``v`` letters, labelled by the first
    differing coordinate (1-based); label 0 means equal words.

    Words are encoded base ``v`` with coordinate 1 most significant.
    """
    if n < 1 or v < 2:
        raise ValueError("kernel_scheme needs n >= 1 and v >= 2")
    N = v ** n
    _guard(N, cap)
    words = np.arange(N)
    rel = np.zeros((N, N), dtype=np.int64)
    for i in range(n, 0, -1):
        digit = (words // v ** (n - i)) % v
        rel = np.where(digit[:, None] != digit[None, :], i, rel)
    return Scheme(rel, n + 1)


def projection_morphism(x: Scheme, y: Scheme) -> Morphism:
    """The surjection ``X wr Y -> X``: drop the rear coordinate, send rear
    labels to the identity."""
    ny = y.size
    f = [p // ny for p in range(x.size * ny)]
    sigma = list(range(x.num_relations)) + [0] * (y.num_relations - 1)
    return Morphism(f, sigma)


def wreath_factor(s: Scheme):
    """Split ``s`` as ``X wr Y`` under the index convention, if possible.

    Tries rear sizes from the smallest proper divisor upwards and returns
    the first ``(X, Y)`` with ``wreath_product(X, Y) == s``, else ``None``.
    """
    n, r = s.size, s.num_relations
    R = s.relation
    for ny in range(2, n):
        if n % ny:
            continue
        block = R[:ny, :ny]
        rear_labels = np.unique(block)
        ry = len(rear_labels)
        rx = r - ry + 1
        if rx < 2 or not np.array_equal(rear_labels[1:], np.arange(rx, r)):
            continue
        try:
            y = Scheme(np.where(block == 0, 0, block - (rx - 1)), ry)
            x = Scheme(R[::ny, ::ny], rx)
        except StructureError:
            continue
        if wreath_product(x, y) == Scheme(R, r):
            return x, y
    return None
