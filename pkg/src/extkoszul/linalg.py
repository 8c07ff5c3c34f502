"""Exact dense linear algebra over QQ (object arrays of mpq) and GF(p) (int64).

Row-vector convention throughout: a matrix ``A`` with ``s`` rows represents
``s`` vectors; ``left_kernel(A)`` is ``{x : x @ A == 0}``. Pivots are chosen as
the first nonzero column, first eligible row, so results are deterministic.
"""

from __future__ import annotations

import numpy as np
from gmpy2 import mpq

from .fields import FieldSpec

__all__ = ["matrix", "zeros", "identity", "rref", "rank", "left_kernel",
           "reduce_mod", "complement", "inverse", "nullspace"]

_ZERO = mpq(0)


def _dtype(field: FieldSpec):
    return object if field.p is None else np.int64


def zeros(shape, field: FieldSpec) -> np.ndarray:
    if field.p is None:
        out = np.empty(shape, dtype=object)
        out.fill(_ZERO)
        return out
    return np.zeros(shape, dtype=np.int64)


def identity(n: int, field: FieldSpec) -> np.ndarray:
    out = zeros((n, n), field)
    for i in range(n):
        out[i, i] = field.one
    return out


def matrix(rows, ncols: int, field: FieldSpec) -> np.ndarray:
    """Build an array from a list of rows (lists or ``{col: value}`` dicts)."""
    out = zeros((len(rows), ncols), field)
    for i, row in enumerate(rows):
        items = row.items() if isinstance(row, dict) else enumerate(row)
        for j, v in items:
            out[i, j] = field(v)
    return out


def _nonzero(v: np.ndarray) -> np.ndarray:
    if v.dtype == object:
        return np.flatnonzero(v != 0)
    return np.flatnonzero(v)


def rref(M: np.ndarray, field: FieldSpec):
    """Reduced row echelon form. Returns ``(R, pivots)`` with zero rows dropped."""
    A = np.array(M, dtype=_dtype(field), copy=True)
    if A.ndim != 2:
        raise ValueError("rref needs a 2-d array")
    m, n = A.shape
    p = field.p
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = _nonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = field.inv(A[r, c])
        cols = _nonzero(A[r])
        if p is None:
            A[r, cols] = A[r, cols] * inv
        else:
            A[r, cols] = (A[r, cols] * inv) % p
        rows = _nonzero(A[:, c])
        rows = rows[rows != r]
        if rows.size:
            block = np.ix_(rows, cols)
            upd = A[block] - np.outer(A[rows, c], A[r, cols])
            A[block] = upd if p is None else upd % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M: np.ndarray, field: FieldSpec) -> int:
    if M.size == 0:
        return 0
    return len(rref(M, field)[1])


def left_kernel(A: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Basis (as rows) of ``{x : x @ A == 0}``, in reduced form on free coordinates."""
    s, t = A.shape
    if t == 0 or s == 0:
        return identity(s, field)
    R, pivots = rref(A.T, field)
    free = [c for c in range(s) if c not in set(pivots)]
    K = zeros((len(free), s), field)
    p = field.p
    for k, f in enumerate(free):
        K[k, f] = field.one
        for row, pc in enumerate(pivots):
            v = R[row, f]
            if v:
                K[k, pc] = -v if p is None else (-v) % p
    return K


def nullspace(A: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Basis (as rows) of ``{x : A @ x == 0}``."""
    return left_kernel(A.T, field)


def reduce_mod(K: np.ndarray, R: np.ndarray, pivots, field: FieldSpec) -> np.ndarray:
    """Reduce the rows of ``K`` modulo the row space of the rref matrix ``R``."""
    if K.shape[0] == 0 or not pivots:
        return np.array(K, copy=True)
    coeffs = K[:, pivots]
    out = K - coeffs.dot(R)
    return out if field.p is None else out % field.p


def complement(V: np.ndarray, P: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Rows spanning a complement of ``rowspace(P)`` inside ``rowspace(P) + rowspace(V)``."""
    if V.shape[0] == 0:
        return V
    if P.shape[0]:
        R, piv = rref(P, field)
        V = reduce_mod(V, R, piv, field)
    return rref(V, field)[0]


def inverse(rows, field: FieldSpec):
    """Inverse of a square matrix given as nested sequences; returns nested lists."""
    n = len(rows)
    A = matrix(rows, n, field)
    aug = np.concatenate([A, identity(n, field)], axis=1)
    R, piv = rref(aug, field)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    return [[field(R[i, n + j]) for j in range(n)] for i in range(n)]
