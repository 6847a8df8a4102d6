# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled row reduction over a prime field."""


cdef long long _inv_mod(long long a, long long p):
    cdef long long result = 1, base = a % p, e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def rref_inplace(long long[:, ::1] A, long long p):
    """Reduce ``A`` (entries in ``[0, p)``) to RREF in place; return pivot columns."""
    cdef Py_ssize_t m = A.shape[0], n = A.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef long long inv, f, tmp
    pivots = []
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, n):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        inv = _inv_mod(A[r, c], p)
        if inv != 1:
            for j in range(c, n):
                A[r, j] = (A[r, j] * inv) % p
        for i in range(m):
            if i != r and A[i, c] != 0:
                f = p - A[i, c]
                for j in range(c, n):
                    if A[r, j] != 0:
                        A[i, j] = (A[i, j] + f * A[r, j]) % p
        pivots.append(c)
        r += 1
    return pivots

