import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hightors.algebra import (
    AlgebraError,
    Module,
    ModuleMap,
    cokernel,
    direct_sum,
    dual_dual_iso,
    dual_module,
    identity_map,
    image,
    kernel,
    make_algebra,
)
from hightors.modcat import hom_basis

P5 = 5


def gamma_alg():
    return make_algebra(3, [("a", 0, 1), ("b", 1, 2)], [[(1, ["a", "b"])]], n=2)


def a3():
    return make_algebra(3, [("a", 0, 1), ("b", 1, 2)])


A3 = a3()


def test_gamma_basis():
    A = gamma_alg()
    # e1, e2, e3, a, b: the path b.a vanishes
    assert A.dim == 5
    assert A.projective(0).dims == (1, 1, 0)
    assert A.projective(1).dims == (0, 1, 1)
    assert A.projective(2).dims == (0, 0, 1)


def test_hereditary_a3_basis():
    A = a3()
    assert A.dim == 6
    assert A.projective(0).dims == (1, 1, 1)


def test_injectives_are_duals():
    A = gamma_alg()
    assert A.injective(0).dims == (1, 0, 0)
    assert A.injective(1).dims == (1, 1, 0)
    assert A.injective(2).dims == (0, 1, 1)


def test_commutativity_relation():
    # square 1 -> 2 -> 4, 1 -> 3 -> 4 with b.a - d.c = 0
    A = make_algebra(4, [("a", 0, 1), ("b", 1, 3), ("c", 0, 2), ("d", 2, 3)], [[(1, ["a", "b"]), (-1, ["c", "d"])]])
    assert A.dim == 4 + 4 + 1
    assert A.projective(0).dims == (1, 1, 1, 1)


def test_opposite_involution():
    A = gamma_alg()
    op = A.opposite()
    assert op.opposite() is A
    assert op.dim == A.dim
    assert op.projective(2).dims == (0, 1, 1)


def test_relations_enforced():
    A = gamma_alg()
    one = np.ones((1, 1), dtype=np.int64)
    with pytest.raises(AlgebraError):
        Module(A, (1, 1, 1), [one, one])
    Module(A, (1, 1, 1), [one, np.zeros((1, 1), dtype=np.int64)])


def test_bad_presentation():
    with pytest.raises(AlgebraError):
        make_algebra(2, [("a", 0, 5)])
    with pytest.raises(AlgebraError):
        make_algebra(2, [("a", 0, 1)], p=4)


def test_non_natural_map_rejected():
    A = gamma_alg()
    P1, S2 = A.projective(0), A.simple(1)
    with pytest.raises(AlgebraError):
        ModuleMap(P1, S2, [np.zeros((0, 1)), np.ones((1, 1)), np.zeros((0, 0))], check=True)


@st.composite
def a3_modules(draw):
    A = A3
    dims = tuple(draw(st.integers(0, 2)) for _ in range(3))
    mats = []
    for a in A.arrows:
        r, c = dims[a.target], dims[a.source]
        vals = draw(st.lists(st.integers(0, P5 - 1), min_size=r * c, max_size=r * c))
        mats.append(np.array(vals, dtype=np.int64).reshape(r, c))
    return Module(A, dims, mats)


@settings(max_examples=60, deadline=None)
@given(a3_modules())
def test_kernel_image_cokernel_dimensions(X):
    for f in hom_basis(X, X)[:3]:
        K, i = kernel(f)
        Im, _ = image(f)
        C, q = cokernel(f)
        assert K.dim + Im.dim == X.dim
        assert Im.dim + C.dim == X.dim
        assert (f @ i).is_zero() and (q @ f).is_zero()
        assert i.is_injective() and q.is_surjective()


@settings(max_examples=60, deadline=None)
@given(a3_modules())
def test_double_dual(X):
    D = dual_module(X)
    assert D.dims == X.dims
    assert dual_dual_iso(X).is_iso()


@settings(max_examples=40, deadline=None)
@given(a3_modules(), a3_modules())
def test_direct_sum_projections(X, Y):
    ds = direct_sum([X, Y])
    assert ds.module.dims == tuple(x + y for x, y in zip(X.dims, Y.dims))
    for i, (inj, pr) in enumerate(zip(ds.injections, ds.projections)):
        assert (pr @ inj).equals(identity_map([X, Y][i]))
    assert (ds.projections[1] @ ds.injections[0]).is_zero()


@settings(max_examples=40, deadline=None)
@given(a3_modules(), a3_modules(), a3_modules())
def test_composition_associative(X, Y, Z):
    F, G = hom_basis(X, Y), hom_basis(Y, Z)
    H = hom_basis(Z, X)
    for f in F[:2]:
        for g in G[:2]:
            for h in H[:2]:
                assert ((h @ g) @ f).equals(h @ (g @ f))
