import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hightors.algebra import Module, direct_sum, make_algebra
from hightors.modcat import (
    RepresentationInfinite,
    cartan_form,
    decompose,
    ext,
    extension_middle,
    fac_membership,
    global_dimension,
    hom_basis,
    hom_dim,
    indecomposables,
    injective_envelope,
    is_indecomposable,
    isomorphic,
    minimal_projective_resolution,
    projective_cover,
    projective_dimension,
    quotients,
    registry,
    set_seed,
    submodule_lattice,
    syzygy,
    tau_n_minus,
    transpose,
    yoneda_pull,
    yoneda_push,
)


def ext_by_dimension_shift(i, X, Y):
    """Oracle: Ext^i(X, Y) from Hom dimensions along 0 -> syz -> P -> X -> 0 only."""
    if i == 0:
        return hom_dim(X, Y)
    if i > 1:
        return ext_by_dimension_shift(i - 1, syzygy(X, 1), Y)
    cover = projective_cover(X)
    K = syzygy(X, 1)
    return hom_dim(K, Y) - hom_dim(cover.source, Y) + hom_dim(X, Y)


def test_yoneda_oracle(gamma):
    A, _, _ = gamma
    for v in range(3):
        P, I = A.projective(v), A.injective(v)
        for x in indecomposables(A):
            X = registry(A).module(x)
            assert hom_dim(P, X) == X.dims[v]
            assert hom_dim(X, I) == X.dims[v]


def test_gamma_indecomposables(gamma):
    A, _, L = gamma
    assert sorted(L) == ["1", "1/2", "2", "2/3", "3"]
    assert len(indecomposables(A)) == 5


def test_gamma_ext_values(gamma):
    A, _, L = gamma
    reg = registry(A)
    S1, S2, S3 = (reg.module(L[k]) for k in ("1", "2", "3"))
    assert ext(2, S1, S3).dim == 1
    assert ext(1, S1, S2).dim == 1
    assert ext(1, S1, S3).dim == 0
    assert global_dimension(A) == 2


@pytest.mark.parametrize("name", ["gamma", "a2", "a3", "a5_rad2"])
def test_ext_matches_dimension_shift(load, name):
    A, _ = load(name)
    reg = registry(A)
    ind = indecomposables(A)
    for x, y in itertools.product(ind, ind):
        X, Y = reg.module(x), reg.module(y)
        for i in range(1, 4):
            assert ext(i, X, Y).dim == ext_by_dimension_shift(i, X, Y), (reg.label(x), reg.label(y), i)


@pytest.mark.parametrize("name", ["gamma", "a3"])
def test_euler_form(load, name):
    A, _ = load(name)
    reg = registry(A)
    gd = global_dimension(A)
    for x, y in itertools.product(indecomposables(A), repeat=2):
        X, Y = reg.module(x), reg.module(y)
        alt = hom_dim(X, Y) + sum((-1) ** i * ext(i, X, Y).dim for i in range(1, gd + 1))
        assert alt == cartan_form(A, X.dims, Y.dims)


@pytest.mark.parametrize(
    "name,count",
    [("a2", 3), ("a3", 6), ("gamma", 5), ("a5_rad2", 9), ("semisimple1", 1), ("semisimple2", 2)],
)
def test_indecomposable_counts(load, name, count):
    # Gabriel for hereditary A_m: m(m+1)/2; radical square zero A_m: 2m - 1
    A, _ = load(name)
    assert len(indecomposables(A)) == count


def test_kronecker_is_flagged():
    # a P^1-family already sits in dimension 2; the search must not run away
    A = make_algebra(2, [("a", 0, 1), ("b", 0, 1)])
    with pytest.raises(RepresentationInfinite):
        indecomposables(A, cap=3)


def test_resolution_of_s1(gamma):
    A, _, L = gamma
    S1 = registry(A).module(L["1"])
    res = minimal_projective_resolution(S1, 5)
    assert [P.tops for P in res.terms] == [(0,), (1,), (2,)]
    assert projective_dimension(S1) == 2
    assert syzygy(S1, 1).dims == (0, 1, 0)


def test_regular_decomposition(gamma):
    A, _, _ = gamma
    reg = registry(A)
    d = decompose(A.regular())
    assert sorted(reg.label(i) for i in d.indices) == ["1/2", "2/3", "3"]
    assert d.iso.is_iso()


def test_tau_and_transpose(gamma):
    A, _, L = gamma
    reg = registry(A)
    assert isomorphic(tau_n_minus(reg.module(L["3"])), reg.module(L["1"]))
    assert transpose(A.projective(0)).is_zero()


def test_envelope_and_lattice(gamma):
    A, _, L = gamma
    assert injective_envelope(A.simple(2)).target.dims == (0, 1, 1)
    lattice = submodule_lattice(A.projective(0))
    assert sorted(sum(b.shape[1] for b in sub) for sub in lattice) == [0, 1, 2]
    qs = [Q.dims for Q, _ in quotients(A.projective(0))]
    assert sorted(qs) == [(0, 0, 0), (1, 0, 0), (1, 1, 0)]


def test_fac(gamma):
    A, _, L = gamma
    reg = registry(A)
    assert fac_membership(reg.module(L["1/2"]), reg.module(L["1"]))
    assert not fac_membership(reg.module(L["1/2"]), reg.module(L["2"]))


def test_extension_middle_of_ext1(gamma):
    A, _, L = gamma
    reg = registry(A)
    e = next(iter(ext(1, reg.module(L["1"]), reg.module(L["2"])).classes()))
    E, i, q = extension_middle(e)
    assert isomorphic(E, reg.module(L["1/2"]))
    assert (q @ i).is_zero() and i.is_injective() and q.is_surjective()


def test_yoneda_functoriality(gamma):
    A, _, L = gamma
    reg = registry(A)
    S1, S3, P2 = reg.module(L["1"]), reg.module(L["3"]), reg.module(L["2/3"])
    e = next(iter(ext(2, S1, S3).classes()))
    # pushing along the inclusion 3 -> 2/3 kills the class, since Ext^2(1, 2/3) = 0
    incl = hom_basis(S3, P2)[0]
    assert yoneda_push(incl, e).is_zero()
    # pulling back along the identity is the identity
    assert not yoneda_pull(e, hom_basis(S1, S1)[0]).is_zero()


A3 = make_algebra(3, [("a", 0, 1), ("b", 1, 2)])


@st.composite
def a3_modules(draw):
    dims = tuple(draw(st.integers(0, 2)) for _ in range(3))
    mats = []
    for a in A3.arrows:
        r, c = dims[a.target], dims[a.source]
        vals = draw(st.lists(st.integers(0, 4), min_size=r * c, max_size=r * c))
        mats.append(np.array(vals, dtype=np.int64).reshape(r, c))
    return Module(A3, dims, mats)


@settings(max_examples=60, deadline=None)
@given(a3_modules())
def test_decomposition_is_faithful(X):
    reg = registry(A3)
    d = decompose(X)
    assert d.iso.is_iso()
    assert tuple(map(sum, zip(*[reg.module(i).dims for i in d.indices]))) == X.dims or X.is_zero()
    for i in d.indices:
        assert is_indecomposable(reg.module(i))


@settings(max_examples=30, deadline=None)
@given(a3_modules(), st.integers(0, 1000))
def test_decomposition_seed_invariant(X, seed):
    reg = registry(A3)
    first = sorted(decompose(X).indices)
    set_seed(seed)
    try:
        assert sorted(decompose(X).indices) == first
    finally:
        set_seed(0)


@settings(max_examples=40, deadline=None)
@given(a3_modules(), a3_modules(), a3_modules())
def test_hom_additive(X, Y, Z):
    S = direct_sum([X, Y]).module
    assert hom_dim(S, Z) == hom_dim(X, Z) + hom_dim(Y, Z)
    assert hom_dim(Z, S) == hom_dim(Z, X) + hom_dim(Z, Y)


@settings(max_examples=40, deadline=None)
@given(a3_modules())
def test_hereditary_has_no_ext2(X):
    for v in range(3):
        assert ext(2, X, A3.simple(v)).dim == 0
