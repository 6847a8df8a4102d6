"""Exact dense linear algebra over a prime field F_p.

Matrices are ``numpy.int64`` arrays with entries in ``[0, p)``.  Row
reduction, the one hot loop, runs in the compiled ``_kernels`` extension
when it is importable and falls back to a numpy implementation otherwise.
Set ``HIGHTORS_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _fallback

if os.environ.get("HIGHTORS_PURE"):
    _rref_kernel = _fallback.rref_inplace
    BACKEND = "python"
else:
    try:
        from ._kernels import rref_inplace as _rref_kernel

        BACKEND = "cython"
    except ImportError:  # extension not built
        _rref_kernel = _fallback.rref_inplace
        BACKEND = "python"


class DimensionError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


def as_matrix(A, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    M = np.array(A, dtype=np.int64)
    if shape is not None:
        M = M.reshape(shape)
    elif M.ndim == 1:
        M = M.reshape(-1, 1)
    return np.ascontiguousarray(M % p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    if A.size == 0 or B.size == 0:
        return zeros(A.shape[0], B.shape[1])
    return (A @ B) % p


def rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A`` and its pivot columns.

    The rank is ``len(pivots)``.  ``A`` is not modified.
    """
    R = np.ascontiguousarray(np.array(A, dtype=np.int64) % p)
    if R.size == 0:
        return R, []
    pivots = list(_rref_kernel(R, p))
    return R, pivots


def rank(A: np.ndarray, p: int) -> int:
    return len(rref(A, p)[1])


def row_basis(A: np.ndarray, p: int) -> np.ndarray:
    R, piv = rref(A, p)
    return R[: len(piv)]


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning the right kernel of ``A`` (shape ``cols x k``)."""
    m, n = A.shape
    R, piv = rref(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    K = zeros(n, len(free))
    for k, f in enumerate(free):
        K[f, k] = 1
        for i, pc in enumerate(piv):
            K[pc, k] = (-R[i, f]) % p
    return K


def solve(A: np.ndarray, B: np.ndarray, p: int) -> tuple[np.ndarray | None, np.ndarray]:
    """Solve ``A X = B``.

    Returns ``(particular, kernel)`` where ``kernel`` has columns spanning
    ``ker A`` and ``particular`` is ``None`` when the system is inconsistent.
    """
    if A.shape[0] != B.shape[0]:
        raise DimensionError(f"row mismatch: A has {A.shape[0]}, B has {B.shape[0]}")
    m, n = A.shape
    K = nullspace(A, p)
    if B.shape[1] == 0:
        return zeros(n, 0), K
    aug = np.hstack([A % p, B % p])
    R, piv = rref(aug, p)
    if any(c >= n for c in piv):
        return None, K
    X = zeros(n, B.shape[1])
    for i, pc in enumerate(piv):
        X[pc] = R[i, n:]
    return X, K


def inverse(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionError("inverse of a non-square matrix")
    X, K = solve(A, identity(n), p)
    if X is None or K.shape[1]:
        raise SingularMatrixError("matrix is singular")
    return X


def col_basis(A: np.ndarray, p: int) -> np.ndarray:
    """Columns of the RREF basis of the column span of ``A``."""
    return row_basis(A.T, p).T.copy()


def span_sum(U: np.ndarray, V: np.ndarray, p: int) -> np.ndarray:
    if U.shape[0] != V.shape[0]:
        raise DimensionError("ambient dimensions differ")
    return col_basis(np.hstack([U, V]), p)


def intersect(U: np.ndarray, V: np.ndarray, p: int) -> np.ndarray:
    if U.shape[0] != V.shape[0]:
        raise DimensionError("ambient dimensions differ")
    if U.shape[1] == 0 or V.shape[1] == 0:
        return zeros(U.shape[0], 0)
    K = nullspace(np.hstack([U, (-V) % p]), p)
    return col_basis(matmul(U, K[: U.shape[1]], p), p)


def intersect_and_sum(U: np.ndarray, V: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    return intersect(U, V, p), span_sum(U, V, p)


def complement(U: np.ndarray, p: int) -> np.ndarray:
    """Standard basis columns completing the column span of ``U`` to the ambient space."""
    n = U.shape[0]
    piv = set(rref(U.T, p)[1]) if U.shape[1] else set()
    cols = [c for c in range(n) if c not in piv]
    C = zeros(n, len(cols))
    for k, c in enumerate(cols):
        C[c, k] = 1
    return C


def in_span(U: np.ndarray, v: np.ndarray, p: int) -> bool:
    return solve(U, v.reshape(-1, 1), p)[0] is not None


def coordinates(U: np.ndarray, V: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of the columns of ``V`` in the (independent) columns of ``U``."""
    X, _ = solve(U, V, p)
    if X is None:
        raise ValueError("vectors not in span")
    return X


def projective_points(dim: int, p: int):
    """Yield one representative of every line in F_p^dim (first nonzero entry 1)."""
    for lead in range(dim):
        rest = dim - lead - 1
        for k in range(p**rest):
            v = np.zeros(dim, dtype=np.int64)
            v[lead] = 1
            x = k
            for j in range(rest):
                v[lead + 1 + j] = x % p
                x //= p
            yield v


def subspaces(dim: int, p: int):
    """Yield an RREF basis (as columns) of every subspace of F_p^dim."""
    from itertools import combinations

    for k in range(dim + 1):
        for piv in combinations(range(dim), k):
            free = [
                (i, c) for i, pc in enumerate(piv) for c in range(pc + 1, dim) if c not in piv
            ]
            for code in range(p ** len(free)):
                R = zeros(k, dim)
                for i, pc in enumerate(piv):
                    R[i, pc] = 1
                x = code
                for i, c in free:
                    R[i, c] = x % p
                    x //= p
                yield R.T.copy()


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True
