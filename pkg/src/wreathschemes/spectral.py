"""Bose-Mesner algebra: adjacency matrices, primitive idempotents, first
eigenmatrices, P/Q-polynomial tests and the algebra embedding along
surjective morphisms.

Two routes produce a :class:`SpectralDecomposition`:

* :func:`primitive_idempotents_numeric` diagonalises a fixed linear
  combination of the adjacency matrices and works for any commutative
  scheme (eigenvalues may be complex);
* :func:`wreath_idempotents` / :func:`wreath_eigenmatrix` assemble the
  decomposition of ``X wr Y`` from those of the factors.  When the factors
  are exact (``Fraction`` object arrays) so is the result.

Eigenmatrix layout: ``P[i][j]`` is the eigenvalue of ``A_i`` on ``E_j``,
rows indexed by relations, columns by idempotents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg

from .errors import NumericalDegeneracyError, UnsupportedInputError
from .linalg import exact_full, exact_identity, exact_rank, is_exact, to_numeric
from .products import wreath_factor
from .scheme import (Morphism, Scheme, _row0_representatives, check_morphism,
                     intersection_numbers, is_commutative, valencies)

__all__ = [
    "SpectralDecomposition",
    "IdempotentCorrespondence",
    "AlgebraEmbedding",
    "adjacency_matrices",
    "primitive_idempotents_numeric",
    "one_point_decomposition",
    "class_one_decomposition",
    "wreath_idempotents",
    "wreath_eigenmatrix",
    "decompose",
    "decomposition_residuals",
    "match_columns",
    "is_p_polynomial",
    "is_q_polynomial",
    "convolution",
    "embed_algebra",
    "coefficients_of",
    "idempotent_correspondence",
    "decomposition_to_json",
]

DEFAULT_TOL = 1e-9
VERIFY_TOL = 1e-8
EXACT_LIMIT = 256


@dataclass(frozen=True)
class SpectralDecomposition:
    idempotents: tuple = field(repr=False)
    multiplicities: tuple
    eigenmatrix: np.ndarray = field(repr=False)
    j0_index: int = 0
    exact: bool = False

    @property
    def size(self) -> int:
        return self.idempotents[0].shape[0]

    def __len__(self):
        return len(self.idempotents)


@dataclass(frozen=True)
class IdempotentCorrespondence:
    """``blocks[j']`` lists the source idempotents summing to the image of
    target idempotent ``j'``."""

    blocks: tuple

    def is_disjoint(self) -> bool:
        seen = set()
        for b in self.blocks:
            if seen & set(b):
                return False
            seen |= set(b)
        return True

    def is_nonempty(self) -> bool:
        return all(len(b) > 0 for b in self.blocks)

    @property
    def covered(self) -> set:
        return {j for b in self.blocks for j in b}


def adjacency_matrices(s: Scheme) -> list:
    R = s.relation
    return [(R == i).astype(np.int64) for i in range(s.num_relations)]


# -- numeric route -----------------------------------------------------------

def _cluster(values, tol):
    """Group indices of (complex) values lying within ``tol`` of a group seed."""
    groups = []
    centres = []
    order = sorted(range(len(values)), key=lambda k: (values[k].real, values[k].imag))
    for k in order:
        for g, c in zip(groups, centres):
            if abs(values[k] - c) <= tol:
                g.append(k)
                break
        else:
            groups.append([k])
            centres.append(values[k])
    return groups


def _eig_normal(m):
    t, z = scipy.linalg.schur(m.astype(complex), output="complex")
    return np.diag(t), z


def _split_subspaces(A, M, tol):
    vals, vecs = _eig_normal(M)
    todo = [vecs[:, g] for g in _cluster(vals, tol)]
    done = []
    while todo:
        V = todo.pop()
        for Ai in A:
            B = V.conj().T @ Ai @ V
            m = B.shape[0]
            scalar = np.trace(B) / m
            if np.abs(B - scalar * np.eye(m)).max() > tol:
                bvals, bvecs = _eig_normal(B)
                todo.extend(V @ bvecs[:, g] for g in _cluster(bvals, tol))
                break
        else:
            done.append(V)
    return done


def _sort_columns(P, j0, r):
    rest = [j for j in range(P.shape[1]) if j != j0]
    if r > 1:
        row = P[1]
        rest.sort(key=lambda j: (-round(float(np.real(row[j])), 8),
                                 -round(float(np.imag(row[j])), 8), j))
    return [j0] + rest


def primitive_idempotents_numeric(s: Scheme, tol: float = DEFAULT_TOL) -> SpectralDecomposition:
    """Simultaneous eigenspace projectors of the adjacency matrices.

    Diagonalises ``M = sum_i A_i / (i + 2)``, groups eigenvalues within
    ``tol``, then re-splits any group on which some ``A_i`` is not scalar.
    Columns: ``j0`` first, then by descending ``P[1][j]`` (real part, then
    imaginary part, then index).
    """
    if not is_commutative(s):
        raise UnsupportedInputError("primitive idempotents need a commutative scheme")
    n, r = s.size, s.num_relations
    A = [a.astype(float) for a in adjacency_matrices(s)]
    M = sum(a / (i + 2) for i, a in enumerate(A))
    scale = tol * max(1.0, float(np.abs(M).sum(axis=1).max()))
    spaces = _split_subspaces(A, M, scale)
    if len(spaces) != r:
        raise NumericalDegeneracyError(
            f"found {len(spaces)} eigenspaces, expected {r}; try a smaller tolerance")
    E = [V @ V.conj().T for V in spaces]
    mult = [V.shape[1] for V in spaces]
    P = np.array([[np.trace(a @ e) / m for e, m in zip(E, mult)] for a in A])
    k = np.array(valencies(s), dtype=float)
    dist = np.abs(P - k[:, None]).max(axis=0)
    j0 = int(np.argmin(dist))
    if dist[j0] > 10 * scale:
        raise NumericalDegeneracyError("no eigenspace carries the valencies")
    imag = max(np.abs(P.imag).max(), max(np.abs(e.imag).max() for e in E))
    if imag <= 10 * scale:
        E = [e.real for e in E]
        P = P.real
    # entries known in closed form: A_0 = I, E_j0 = J/n, P[:, j0] = valencies
    P[0, :] = 1
    P[:, j0] = k
    E[j0] = np.full((n, n), 1.0 / n, dtype=E[j0].dtype)
    order = _sort_columns(P, j0, r)
    return SpectralDecomposition(
        idempotents=tuple(E[j] for j in order),
        multiplicities=tuple(mult[j] for j in order),
        eigenmatrix=P[:, order],
        j0_index=0,
        exact=False,
    )


# -- structural route --------------------------------------------------------

def one_point_decomposition() -> SpectralDecomposition:
    one = exact_identity(1)
    return SpectralDecomposition((one,), (1,), np.array([[Fraction(1)]], dtype=object), 0, True)


def class_one_decomposition(v: int) -> SpectralDecomposition:
    """Exact decomposition of H(1, v): ``J/v`` and ``I - J/v``."""
    e0 = exact_full(v, Fraction(1, v))
    e1 = exact_identity(v) - e0
    P = np.array([[Fraction(1), Fraction(1)], [Fraction(v - 1), Fraction(-1)]], dtype=object)
    return SpectralDecomposition((e0, e1), (1, v - 1), P, 0, True)


def _unify(*arrays):
    """Bring arrays to a common representation: exact if all exact."""
    if all(is_exact(a) for a in arrays):
        return arrays, True
    out = [to_numeric(a) for a in arrays]
    if any(np.iscomplexobj(a) for a in out):
        out = [a.astype(complex) for a in out]
    return out, False


def wreath_eigenmatrix(px, py, n_y: int, ky=None, j0_x: int = 0, j0_y: int = 0):
    """First eigenmatrix of ``X wr Y`` from those of the factors.

    Rows follow the wreath label order (identity, front, rear); columns are
    the front idempotents (``j0`` of ``X`` first) then the rear idempotents
    ``j != j0`` of ``Y``.
    """
    px, py = np.asarray(px), np.asarray(py)
    rx, jx = px.shape
    ry, jy = py.shape
    if ky is None:
        ky = py[:, j0_y]
    ky = list(ky)
    if len(ky) != ry:
        raise ValueError(f"valency list has length {len(ky)}, expected {ry}")
    (px, py), exact = _unify(px, py)
    ky = [Fraction(v) for v in ky] if exact else [complex(v) if np.iscomplexobj(px) else float(v) for v in ky]
    zero = Fraction(0) if exact else 0.0
    front_cols = [j0_x] + [j for j in range(jx) if j != j0_x]
    rear_cols = [j for j in range(jy) if j != j0_y]
    dtype = object if exact else px.dtype
    P = np.empty((rx + ry - 1, len(front_cols) + len(rear_cols)), dtype=dtype)
    rows = [("rear", 0)] + [("front", i) for i in range(1, rx)] + [("rear", i) for i in range(1, ry)]
    for a, (kind, i) in enumerate(rows):
        for b, j in enumerate(front_cols):
            P[a, b] = px[i, j] * n_y if kind == "front" else ky[i]
        for b, j in enumerate(rear_cols, start=len(front_cols)):
            P[a, b] = zero if kind == "front" else py[i, j]
    return P


def wreath_idempotents(sx: SpectralDecomposition, sy: SpectralDecomposition) -> SpectralDecomposition:
    """Front ``E_x kron J/ny`` for every ``E_x``, rear ``I kron E_y`` for
    ``E_y != E_j0``."""
    nx, ny = sx.size, sy.size
    parts, exact = _unify(*sx.idempotents, *sy.idempotents)
    ex, ey = parts[:len(sx)], parts[len(sx):]
    if exact:
        Jy, Ix = exact_full(ny, Fraction(1, ny)), exact_identity(nx)
    else:
        Jy, Ix = np.full((ny, ny), 1.0 / ny), np.eye(nx)
    front_cols = [sx.j0_index] + [j for j in range(len(sx)) if j != sx.j0_index]
    rear_cols = [j for j in range(len(sy)) if j != sy.j0_index]
    E = [np.kron(ex[j], Jy) for j in front_cols] + [np.kron(Ix, ey[j]) for j in rear_cols]
    mult = [sx.multiplicities[j] for j in front_cols] + [nx * sy.multiplicities[j] for j in rear_cols]
    P = wreath_eigenmatrix(sx.eigenmatrix, sy.eigenmatrix, ny,
                           j0_x=sx.j0_index, j0_y=sy.j0_index)
    return SpectralDecomposition(tuple(E), tuple(mult), P, 0, exact)


def decompose(s: Scheme, tol: float = DEFAULT_TOL, exact_limit: int = EXACT_LIMIT) -> SpectralDecomposition:
    """Decomposition via wreath factorisation where possible.

    Wreath products (recognised under the index convention) are assembled
    structurally, class-one factors exactly; any other commutative factor
    falls back to the numeric route.  Above ``exact_limit`` points the
    result is converted to floating point.
    """
    split = wreath_factor(s) if s.size > 2 else None
    if split is not None:
        dec = wreath_idempotents(decompose(split[0], tol, exact_limit),
                                 decompose(split[1], tol, exact_limit))
    elif s.num_relations == 1:
        dec = one_point_decomposition()
    elif s.num_relations == 2:
        dec = class_one_decomposition(s.size)
    else:
        dec = primitive_idempotents_numeric(s, tol)
    if dec.exact and dec.size > exact_limit:
        dec = SpectralDecomposition(tuple(e.astype(float) for e in dec.idempotents),
                                    dec.multiplicities, dec.eigenmatrix.astype(float),
                                    dec.j0_index, False)
    return dec


def decomposition_residuals(s: Scheme, dec: SpectralDecomposition) -> dict:
    """Largest entrywise deviations from the defining identities.

    Exact decompositions are checked in exact arithmetic, so every residual
    is then exactly 0 when the identities hold.
    """
    A = adjacency_matrices(s)
    E = list(dec.idempotents)
    n = s.size
    if dec.exact:
        A = [a.astype(object) for a in A]
        ident = exact_identity(n)
        absmax = lambda m: max((abs(v) for v in m.ravel()), default=0)  # noqa: E731
    else:
        ident = np.eye(n)
        absmax = lambda m: float(np.abs(m).max()) if m.size else 0.0  # noqa: E731
    total = E[0]
    for e in E[1:]:
        total = total + e
    res = {"sum": absmax(total - ident), "orthogonality": 0, "eigen": 0, "rank": 0}
    for j, ej in enumerate(E):
        for k, ek in enumerate(E):
            target = ej if j == k else 0 * ej
            res["orthogonality"] = max(res["orthogonality"], absmax(ej @ ek - target))
        for i, ai in enumerate(A):
            res["eigen"] = max(res["eigen"], absmax(ai @ ej - dec.eigenmatrix[i, j] * ej))
        tr = sum(ej[x, x] for x in range(n))
        res["rank"] = max(res["rank"], abs(tr - dec.multiplicities[j]))
    return res


def match_columns(reference, other):
    """Column permutation ``perm`` minimising ``|reference[:, j] - other[:, perm[j]]|``."""
    from scipy.optimize import linear_sum_assignment

    a, b = to_numeric(np.asarray(reference)), to_numeric(np.asarray(other))
    cost = np.abs(a[:, :, None] - b[:, None, :]).max(axis=0)
    rows, cols = linear_sum_assignment(cost)
    perm = [0] * a.shape[1]
    for i, j in zip(rows, cols):
        perm[i] = int(j)
    return perm


# -- polynomiality -----------------------------------------------------------

def is_p_polynomial(s: Scheme) -> bool:
    """True iff a single adjacency matrix generates the Bose-Mesner algebra.

    Works in the regular representation ``A_i A_k = sum_l p[i][k][l] A_l``
    and computes the exact dimension of the span of powers of ``A_i``.
    """
    p = intersection_numbers(s).p
    r = s.num_relations
    for i in range(r):
        L = p[i].T  # L[l][k] = p[i][k][l]
        v = np.zeros(r, dtype=object)
        v[0] = 1
        krylov = []
        for _ in range(r):
            krylov.append(list(v))
            v = L.astype(object) @ v
        if exact_rank(krylov) == r:
            return True
    return False


def is_q_polynomial(s: Scheme, dec: SpectralDecomposition = None, tol: float = VERIFY_TOL) -> bool:
    """True iff a single primitive idempotent generates the Bose-Mesner
    algebra under the Hadamard product.

    Elements of the algebra are functions on the relations and the Hadamard
    product is pointwise there, so the span of the Hadamard powers of
    ``E_j`` (starting from the all-ones unit) is the Krylov space of the
    diagonal matrix of its values.  Exact decompositions use exact rank; the
    numeric path counts distinct values, which is that same dimension.
    """
    if not is_commutative(s):
        raise UnsupportedInputError("the Q-polynomial test needs a commutative scheme")
    if dec is None:
        dec = decompose(s)
    r = s.num_relations
    reps = _row0_representatives(s)
    for e in dec.idempotents:
        vals = e[0, reps]
        if dec.exact:
            row = [Fraction(1)] * r
            krylov = []
            for _ in range(r):
                krylov.append(row)
                row = [a * b for a, b in zip(row, vals)]
            dim = exact_rank(krylov)
        else:
            dim = len(_cluster(np.asarray(vals, dtype=complex), tol))
        if dim == r:
            return True
    return False


# -- convolution and embedding -----------------------------------------------

def convolution(a, b, n: int = None):
    """``(1/n) a b``; exact when the inputs are object arrays."""
    a, b = np.asarray(a), np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ValueError(f"convolution needs equal square matrices, got {a.shape} and {b.shape}")
    if n is None:
        n = a.shape[0]
    if n != a.shape[0]:
        raise ValueError(f"size {n} does not match matrices of size {a.shape[0]}")
    prod = a @ b
    if prod.dtype == object:
        return prod * Fraction(1, n)
    return prod / n


def coefficients_of(s: Scheme, M) -> np.ndarray:
    """Coordinates of an algebra element in the adjacency basis.

    Raises ``ValueError`` when ``M`` is not constant on every relation.
    """
    M = np.asarray(M)
    c = M[0, _row0_representatives(s)]
    if not np.array_equal(c[s.relation], M):
        raise ValueError("matrix is not in the Bose-Mesner algebra")
    return c


@dataclass(frozen=True)
class AlgebraEmbedding:
    """Injection of the destination algebra into the source algebra along a
    surjective morphism: a function ``c`` on destination relations goes to
    ``c o sigma``."""

    src: Scheme = field(repr=False)
    dst: Scheme = field(repr=False)
    morphism: Morphism

    def __call__(self, coeffs):
        coeffs = np.asarray(coeffs)
        if coeffs.shape != (self.dst.num_relations,):
            raise ValueError(f"expected {self.dst.num_relations} coefficients")
        return coeffs[list(self.morphism.sigma)]

    def matrix(self, coeffs):
        """Image of ``sum_i coeffs[i] A_i`` as a source matrix."""
        return self(coeffs)[self.src.relation]

    def apply(self, M):
        """Matrix-level map: ``M[f(x)][f(y)]``."""
        f = list(self.morphism.f)
        return np.asarray(M)[np.ix_(f, f)]


def embed_algebra(src: Scheme, dst: Scheme, m: Morphism) -> AlgebraEmbedding:
    if not check_morphism(src, dst, m):
        raise ValueError("not a morphism of association schemes")
    if not m.is_surjective(dst.size):
        raise ValueError("the algebra embedding needs a surjective point map")
    return AlgebraEmbedding(src, dst, m)


def idempotent_correspondence(spec_src: SpectralDecomposition, spec_dst: SpectralDecomposition,
                              embedding: AlgebraEmbedding, tol: float = VERIFY_TOL) -> IdempotentCorrespondence:
    """Expand each ``Psi(n_dst E_j')`` in the source basis ``{n_src E_j}``."""
    n_src, n_dst = spec_src.size, spec_dst.size
    exact = spec_src.exact and spec_dst.exact
    blocks = []
    for e_dst in spec_dst.idempotents:
        image = embedding.apply(e_dst) * n_dst
        block = []
        recon = 0 * image
        for j, (e, m) in enumerate(zip(spec_src.idempotents, spec_src.multiplicities)):
            c = (image * e.T).sum() / (n_src * m)
            if exact:
                if c not in (0, 1):
                    raise NumericalDegeneracyError(f"expansion coefficient {c} is not 0 or 1")
                hit = c == 1
            elif abs(c - 1) <= tol:
                hit = True
            elif abs(c) <= tol:
                hit = False
            else:
                raise NumericalDegeneracyError(f"expansion coefficient {c} is not 0 or 1 within {tol}")
            if hit:
                block.append(j)
                recon = recon + n_src * e
        diff = recon - image
        err = max(abs(v) for v in diff.ravel()) if exact else float(np.abs(diff).max())
        if err > (0 if exact else tol * max(1, n_src)):
            raise NumericalDegeneracyError(f"image of a target idempotent is not a sum of source idempotents (error {err})")
        if not block:
            raise NumericalDegeneracyError("empty block in the idempotent correspondence")
        blocks.append(tuple(block))
    corr = IdempotentCorrespondence(tuple(blocks))
    if not corr.is_disjoint():
        raise NumericalDegeneracyError("idempotent blocks overlap")
    return corr


# -- export ------------------------------------------------------------------

def _encode(v, exact):
    if exact:
        return str(Fraction(v))
    v = complex(v)
    re, im = round(v.real, 12) + 0.0, round(v.imag, 12) + 0.0
    if im == 0.0:
        return re
    return {"re": re, "im": im}


def decomposition_to_json(dec: SpectralDecomposition, idempotents: bool = False) -> dict:
    enc = lambda m: [[_encode(v, dec.exact) for v in row] for row in m]  # noqa: E731
    doc = {"exact": dec.exact, "j0_index": dec.j0_index,
           "multiplicities": list(dec.multiplicities),
           "eigenmatrix": enc(dec.eigenmatrix)}
    if idempotents:
        doc["idempotents"] = [enc(e) for e in dec.idempotents]
    return doc
