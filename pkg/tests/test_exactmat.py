import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hightors import _fallback
from hightors import exactmat as em

PRIMES = [2, 3, 5, 7]


@st.composite
def matrices(draw, max_rows=4, max_cols=4):
    p = draw(st.sampled_from(PRIMES))
    m = draw(st.integers(0, max_rows))
    n = draw(st.integers(0, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=m * n, max_size=m * n))
    return np.array(vals, dtype=np.int64).reshape(m, n), p


def brute_rank(A, p):
    """log_p of the number of distinct vectors ``A x``."""
    m, n = A.shape
    if n == 0 or m == 0:
        return 0
    images = {tuple((A @ np.array(x)) % p) for x in itertools.product(range(p), repeat=n)}
    return round(np.log(len(images)) / np.log(p))


@settings(max_examples=150, deadline=None)
@given(matrices(3, 3))
def test_rank_matches_brute_force(Ap):
    A, p = Ap
    assert em.rank(A, p) == brute_rank(A, p)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(Ap):
    A, p = Ap
    N = em.nullspace(A, p)
    assert em.rank(A, p) + N.shape[1] == A.shape[1]
    assert not np.any(em.matmul(A, N, p))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_is_idempotent_and_row_equivalent(Ap):
    A, p = Ap
    R, piv = em.rref(A, p)
    R2, piv2 = em.rref(R, p)
    assert np.array_equal(R, R2) and piv == piv2
    assert em.rank(np.vstack([A, R]), p) == len(piv)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_backends_agree(Ap):
    A, p = Ap
    a, b = A.copy(), A.copy()
    piv_a = _fallback.rref_inplace(a, p)
    if em.BACKEND == "cython":
        from hightors._kernels import rref_inplace

        piv_b = rref_inplace(b, p)
        assert piv_a == list(piv_b) and np.array_equal(a, b)


@settings(max_examples=150, deadline=None)
@given(matrices(), st.integers(0, 10**6))
def test_solve_consistent_systems(Ap, seed):
    A, p = Ap
    rng = np.random.default_rng(seed)
    x = rng.integers(0, p, size=(A.shape[1], 1))
    B = em.matmul(A, x, p)
    sol, K = em.solve(A, B, p)
    assert sol is not None
    assert np.array_equal(em.matmul(A, sol, p), B)
    assert K.shape[1] == A.shape[1] - em.rank(A, p)


def test_solve_inconsistent():
    A = em.as_matrix([[1, 0], [0, 0]], 5, (2, 2))
    sol, _ = em.solve(A, em.as_matrix([0, 1], 5), 5)
    assert sol is None


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(1, 4), st.integers(0, 10**6))
def test_inverse(p, n, seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, p, size=(n, n))
    if em.rank(A, p) < n:
        with pytest.raises(em.SingularMatrixError):
            em.inverse(A, p)
        return
    assert np.array_equal(em.matmul(A, em.inverse(A, p), p), em.identity(n))


@settings(max_examples=80, deadline=None)
@given(matrices(4, 3), matrices(4, 3))
def test_dimension_formula(Up, Vp):
    (U, p), (V, _) = Up, Vp
    V = V % p
    if U.shape[0] != V.shape[0]:
        return
    s = em.span_sum(U, V, p).shape[1]
    i = em.intersect(U, V, p).shape[1]
    assert s + i == em.rank(U, p) + em.rank(V, p)


def gaussian_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("dim", [0, 1, 2, 3])
def test_subspace_enumeration_counts(p, dim):
    subs = list(em.subspaces(dim, p))
    assert len(subs) == sum(gaussian_binomial(dim, k, p) for k in range(dim + 1))
    keys = {tuple(map(tuple, em.rref(S.T, p)[0])) for S in subs}
    assert len(keys) == len(subs)


@pytest.mark.parametrize("p", [2, 5])
@pytest.mark.parametrize("dim", [1, 2, 3])
def test_projective_points(p, dim):
    pts = list(em.projective_points(dim, p))
    assert len(pts) == (p**dim - 1) // (p - 1)
    assert all(v[np.flatnonzero(v)[0]] == 1 for v in pts)


def test_is_prime():
    assert [q for q in range(20) if em.is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_complement_and_coordinates():
    p = 5
    U = em.as_matrix([[1, 0], [2, 0], [0, 1]], p, (3, 2))
    C = em.complement(U, p)
    assert C.shape[1] == 1
    assert em.rank(np.hstack([U, C]), p) == 3
    V = em.matmul(U, em.as_matrix([[3], [4]], p, (2, 1)), p)
    assert np.array_equal(em.coordinates(U, V, p), em.as_matrix([[3], [4]], p, (2, 1)))
