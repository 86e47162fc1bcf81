"""Independent brute-force reference implementations and the shared catalog.

Nothing here calls into the package's algorithms beyond scheme
construction, so agreement with the package is a genuine cross-check.
"""

from __future__ import annotations

from collections import Counter
from itertools import permutations
from math import factorial

import numpy as np

from wreathschemes.cayley import ClassPartition, cayley_scheme, cyclic_group, thin_scheme
from wreathschemes.products import class_one, kernel_scheme


def catalog():
    return {
        "H12": class_one(2),
        "H13": class_one(3),
        "k22": kernel_scheme(2, 2),
        "Z3": thin_scheme(cyclic_group(3)),
        "Z4": thin_scheme(cyclic_group(4)),
        "Z4c": cayley_scheme(cyclic_group(4), ClassPartition([[0], [2], [1, 3]])),
    }


CATALOG_NAMES = ["H12", "H13", "k22", "Z3", "Z4", "Z4c"]
PAIRS = [(a, b) for a in CATALOG_NAMES for b in CATALOG_NAMES]


def brute_axioms(R, r=None) -> set:
    """Names of the violated axioms, from triple loops over points."""
    R = np.asarray(R)
    n = R.shape[0]
    r = int(R.max()) + 1 if r is None else r
    bad = set()
    for x in range(n):
        for y in range(n):
            if (R[x][y] == 0) != (x == y):
                bad.add("(1)")
    if set(R.ravel().tolist()) != set(range(r)):
        bad.add("surjectivity")
    tmap = {}
    for x in range(n):
        for y in range(n):
            tmap.setdefault(int(R[x][y]), set()).add(int(R[y][x]))
    if any(len(v) != 1 for v in tmap.values()):
        bad.add("(3)")
    p = {}
    for x in range(n):
        for z in range(n):
            c = Counter((int(R[x][y]), int(R[y][z])) for y in range(n))
            k = int(R[x][z])
            if k in p and p[k] != c:
                bad.add("(2)")
            p.setdefault(k, c)
    return bad


def all_permutations(n) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.int64).reshape(factorial(n), n)


def brute_aut(R, r):
    """Every bijection of the points, tested for being a (color-preserving
    or color-permuting) automorphism.  Returns (color list, full list)."""
    R = np.asarray(R)
    perms = all_permutations(R.shape[0])
    moved = R[perms[:, :, None], perms[:, None, :]]
    color = np.all(moved == R, axis=(1, 2))
    full = np.ones(len(perms), dtype=bool)
    images = []
    for i in range(r):
        vals = moved[:, R == i]
        full &= np.all(vals == vals[:, :1], axis=1)
        images.append(vals[:, 0])
    images = np.stack(images, axis=1)
    full &= np.array([len(set(row)) == r for row in images.tolist()])
    return perms[color], perms[full]


def brute_orbital_count(perms, n) -> int:
    """Orbits of the group (given by all its elements) on ordered pairs."""
    seen = set()
    count = 0
    for x in range(n):
        for y in range(n):
            if (x, y) in seen:
                continue
            count += 1
            seen.update((int(g[x]), int(g[y])) for g in perms)
    return count


def adjacency(R, r):
    return [(np.asarray(R) == i).astype(float) for i in range(r)]


def brute_p_polynomial(R, r) -> bool:
    """Some A_i whose matrix powers span the whole algebra."""
    A = adjacency(R, r)
    n = A[0].shape[0]
    for a in A[1:]:
        powers = [np.eye(n)]
        for _ in range(r - 1):
            powers.append(powers[-1] @ a)
        if np.linalg.matrix_rank(np.stack([m.ravel() for m in powers])) == r:
            return True
    return False


def brute_idempotents(R, r):
    """Primitive idempotents from the eigenspaces of a generic symmetric
    element (symmetric schemes only)."""
    A = adjacency(R, r)
    rng = np.random.default_rng(0)
    M = sum(c * a for c, a in zip(rng.normal(size=r), A))
    vals, vecs = np.linalg.eigh(M)
    out = []
    used = np.zeros(len(vals), dtype=bool)
    for i, v in enumerate(vals):
        if used[i]:
            continue
        idx = np.abs(vals - v) < 1e-7
        used |= idx
        U = vecs[:, idx]
        out.append(U @ U.T)
    return out


def brute_q_polynomial(R, r) -> bool:
    """Some E_j whose Hadamard powers span the whole algebra (symmetric)."""
    E = brute_idempotents(R, r)
    n = E[0].shape[0]
    for e in E:
        powers = [np.ones((n, n))]
        for _ in range(r - 1):
            powers.append(powers[-1] * e)
        if np.linalg.matrix_rank(np.stack([m.ravel() for m in powers]), tol=1e-8) == r:
            return True
    return False


def group_ring_product(mul, a, b) -> Counter:
    out = Counter()
    for x in a:
        for y in b:
            out[int(mul[x][y])] += 1
    return out


def brute_sring(mul, inv, classes):
    """(identity ok, product closure ok, inverse closure ok) by expanding
    class sums element by element."""
    classes = [sorted(c) for c in classes]
    identity = classes[0] == [0]
    inverse = all(sorted(int(inv[x]) for x in c) in classes for c in classes)
    product = True
    for a in classes:
        for b in classes:
            prod = group_ring_product(mul, a, b)
            for c in classes:
                if len({prod[x] for x in c}) != 1:
                    product = False
    return identity, product, inverse


def kron_adjacency_set(x_rel, rx, y_rel, ry):
    """{A_iX (x) J} for i != 0, {I (x) A_jY} for all j, as byte strings."""
    ny, nx = len(y_rel), len(x_rel)
    J = np.ones((ny, ny), dtype=np.int64)
    I = np.eye(nx, dtype=np.int64)
    front = [np.kron((np.asarray(x_rel) == i).astype(np.int64), J) for i in range(1, rx)]
    rear = [np.kron(I, (np.asarray(y_rel) == j).astype(np.int64)) for j in range(ry)]
    return {m.tobytes() for m in front + rear}
