"""Exact rational helpers for small dense matrices (object arrays of Fraction)."""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def is_exact(a) -> bool:
    return isinstance(a, np.ndarray) and a.dtype == object


def to_fractions(a) -> np.ndarray:
    a = np.asarray(a)
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = Fraction(v) if not isinstance(v, Fraction) else v
    return out


def to_numeric(a) -> np.ndarray:
    """Object arrays become float; numeric arrays pass through."""
    a = np.asarray(a)
    if a.dtype == object:
        return a.astype(float)
    return a


def exact_rank(rows) -> int:
    """Rank over the rationals by fraction Gaussian elimination."""
    m = [[Fraction(v) for v in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        for i in range(rank + 1, len(m)):
            if m[i][col] != 0:
                factor = m[i][col] / pv
                m[i] = [a - factor * b for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def exact_identity(n: int) -> np.ndarray:
    out = np.full((n, n), Fraction(0), dtype=object)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def exact_full(n: int, value) -> np.ndarray:
    return np.full((n, n), Fraction(value), dtype=object)
