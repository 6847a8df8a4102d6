import pytest

from hightors.higher import (
    NCokernelError,
    cluster_tilting_subcategory,
    is_exact_sequence,
    is_U_exact,
    n_cokernel,
    n_kernel,
    verify_n_cluster_tilting,
)
from hightors.modcat import decompose, hom_basis, indecomposables, registry


def labels(A, X):
    reg = registry(A)
    return [reg.label(i) for i in decompose(X).indices] if not X.is_zero() else []


def test_gamma_cluster_tilting(gamma):
    A, M, L = gamma
    assert sorted(registry(A).label(m) for m in M) == ["1", "1/2", "2/3", "3"]
    assert verify_n_cluster_tilting(A, M)
    rep = verify_n_cluster_tilting(A, [L["3"], L["2/3"], L["1/2"]])
    assert not rep and "injective 1" in rep.reason


def test_declared_labels_must_match(gamma):
    A, _, _ = gamma
    with pytest.raises(ValueError):
        cluster_tilting_subcategory(A, {"x": (1, 1, 1)})


def test_simple_2_is_excluded(gamma):
    A, M, L = gamma
    rep = verify_n_cluster_tilting(A, M + [L["2"]])
    assert not rep


@pytest.mark.parametrize("name,size", [("a2", 3), ("a3", 6), ("a5_rad2", 7), ("semisimple2", 2)])
def test_corpus_cluster_tilting(load, name, size):
    A, M = load(name)
    assert len(M) == size
    assert verify_n_cluster_tilting(A, M)


def test_n_cokernel_golden(gamma):
    A, M, L = gamma
    reg = registry(A)
    theta = hom_basis(reg.module(L["3"]), reg.module(L["2/3"]))[0]
    seq = n_cokernel(theta, M)
    assert [labels(A, X) for X in seq.objects] == [["3"], ["2/3"], ["1/2"], ["1"]]
    assert is_exact_sequence(seq)


def test_n_cokernel_rejects_non_mono(gamma):
    A, M, L = gamma
    reg = registry(A)
    f = hom_basis(reg.module(L["1/2"]), reg.module(L["1"]))[0]
    with pytest.raises(NCokernelError):
        n_cokernel(f, M)


def test_n_kernel_golden(gamma):
    A, M, L = gamma
    reg = registry(A)
    f = hom_basis(reg.module(L["1/2"]), reg.module(L["1"]))[0]
    seq = n_kernel(f, M)
    assert [X.dims for X in seq.objects] == [(0, 0, 1), (0, 1, 1), (1, 1, 0), (1, 0, 0)]
    assert is_exact_sequence(seq)


def test_every_mono_in_M_has_an_n_cokernel(gamma):
    A, M, _ = gamma
    reg = registry(A)
    for a in M:
        for b in M:
            for f in hom_basis(reg.module(a), reg.module(b)):
                if not f.is_injective():
                    continue
                seq = n_cokernel(f, M)
                assert is_exact_sequence(seq)
                assert len(seq.objects) == A.n + 2


def test_U_exact_tail(gamma):
    A, M, L = gamma
    reg = registry(A)
    theta = hom_basis(reg.module(L["3"]), reg.module(L["2/3"]))[0]
    seq = n_cokernel(theta, M)
    assert is_U_exact(seq.objects[2:], seq.maps[2:], [L["3"]])
    assert is_U_exact(seq.objects[2:], seq.maps[2:], [L["1/2"]])
    # Hom(1, 1/2) = 0 but Hom(1, 1) != 0
    assert not is_U_exact(seq.objects[2:], seq.maps[2:], [L["1"]])
