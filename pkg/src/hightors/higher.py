"""n-cluster tilting checks and n-cokernels in an n-cluster tilting subcategory."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exactmat as em
from .algebra import Module, ModuleMap, PathAlgebra, cokernel, dual_map, dual_module
from .approx import left_approx
from .modcat import decompose, ext, hom_basis, indecomposables, index_of, registry, tau_n_minus


class NCokernelError(ValueError):
    pass


@dataclass
class NExactSeq:
    """``0 -> objects[0] -> objects[1] -> ... -> objects[-1] -> 0`` with ``maps[i]: objects[i] -> objects[i+1]``."""

    objects: list[Module]
    maps: list[ModuleMap]

    def tail(self) -> list[Module]:
        """The terms after the first map, ``v^1 .. v^n`` for an n-cokernel."""
        return self.objects[2:]


@dataclass
class ClusterTiltingReport:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_n_cluster_tilting(A: PathAlgebra, M, n: int | None = None) -> ClusterTiltingReport:
    """Check that ``add`` of the registry indices ``M`` is n-cluster tilting in mod(A)."""
    n = A.n if n is None else n
    reg = registry(A)
    M = sorted(set(M))
    if not M:
        return ClusterTiltingReport(False, "empty subcategory")
    allind = indecomposables(A)
    for v in range(A.num_vertices):
        for kind, X in (("projective", A.projective(v)), ("injective", A.injective(v))):
            i = index_of(X)
            if i not in M:
                return ClusterTiltingReport(False, f"{kind} {reg.label(i)} is missing")
    for a in M:
        for b in M:
            for i in range(1, n):
                if ext(i, reg.module(a), reg.module(b)).dim:
                    return ClusterTiltingReport(
                        False, f"Ext^{i}({reg.label(a)}, {reg.label(b)}) is nonzero"
                    )
    for d in allind:
        if d in M:
            continue
        D = reg.module(d)
        right = all(ext(i, reg.module(m), D).dim == 0 for m in M for i in range(1, n))
        left = all(ext(i, D, reg.module(m)).dim == 0 for m in M for i in range(1, n))
        if right:
            return ClusterTiltingReport(False, f"{reg.label(d)} is Ext-orthogonal from the right but not in M")
        if left:
            return ClusterTiltingReport(False, f"{reg.label(d)} is Ext-orthogonal from the left but not in M")
    return ClusterTiltingReport(True)


def cluster_tilting_subcategory(A: PathAlgebra, declared=None) -> list[int]:
    """Registry indices of ``M``.

    ``declared`` maps labels to dimension vectors; each is matched to the
    unique indecomposable with that dimension vector and relabelled.
    Otherwise ``M`` is the closure of the indecomposable projectives under
    ``tau_n^-``.  The result is verified to be n-cluster tilting.
    """
    reg = registry(A)
    allind = indecomposables(A)
    if declared:
        M = []
        for label, dims in declared.items():
            hits = [i for i in allind if reg.module(i).dims == tuple(dims)]
            if len(hits) != 1:
                raise ValueError(f"dimension vector {tuple(dims)} does not single out an indecomposable")
            reg.relabel(hits[0], label)
            M.append(hits[0])
    else:
        M = set()
        frontier = [index_of(A.projective(v)) for v in range(A.num_vertices)]
        while frontier:
            i = frontier.pop()
            if i in M:
                continue
            M.add(i)
            T = tau_n_minus(reg.module(i))
            if not T.is_zero():
                frontier.extend(decompose(T).indices)
    M = sorted(M)
    report = verify_n_cluster_tilting(A, M)
    if not report:
        raise ValueError(f"subcategory is not {A.n}-cluster tilting: {report.reason}")
    return M


def n_cokernel(theta: ModuleMap, M, n: int | None = None) -> NExactSeq:
    """Complete a monomorphism ``u -> m`` in add(M) to ``0 -> u -> m -> v^1 -> ... -> v^n -> 0``.

    Each ``v^i`` is a minimal left M-approximation of the previous cokernel.
    """
    A = theta.source.algebra
    n = A.n if n is None else n
    if not theta.is_injective():
        raise NCokernelError("map is not a monomorphism")
    objects = [theta.source, theta.target]
    maps = [theta]
    c, q = cokernel(theta)
    for _ in range(n):
        ap = left_approx(M, c)
        phi = ap.map
        if not phi.is_injective():
            raise NCokernelError("left approximation of a cokernel is not monic; M is not n-cluster tilting")
        maps.append(phi @ q)
        objects.append(phi.target)
        c, q = cokernel(phi)
    if not c.is_zero():
        raise NCokernelError("final cokernel is nonzero; M is not n-cluster tilting")
    return NExactSeq(objects, maps)


def n_kernel(theta: ModuleMap, M, n: int | None = None) -> NExactSeq:
    """Dual of :func:`n_cokernel` for an epimorphism ``m -> u``, computed over the opposite algebra."""
    reg = registry(theta.source.algebra)
    Mop = [index_of(dual_module(reg.module(i))) for i in M]
    seq = n_cokernel(dual_map(theta), Mop, n)
    objs = [dual_module(X) for X in reversed(seq.objects)]
    maps = []
    for k, f in enumerate(reversed(seq.maps)):
        maps.append(ModuleMap(objs[k], objs[k + 1], [m.T.copy() for m in f.mats]))
    return NExactSeq(objs, maps)


def _post_rank(u: Module, f: ModuleMap) -> int:
    H = hom_basis(u, f.source)
    if not H:
        return 0
    return em.rank(np.column_stack([(f @ h).vec() for h in H]), f.p)


def is_U_exact(objects: list[Module], maps: list[ModuleMap], U) -> bool:
    """``0 -> Hom(u, v^1) -> ... -> Hom(u, v^k) -> 0`` is exact for each ``u`` in ``U``."""
    if not objects:
        return True
    A = objects[0].algebra
    reg = registry(A)
    for i in sorted(set(U)):
        u = reg.module(i)
        ranks = [0] + [_post_rank(u, f) for f in maps] + [0]
        for k, X in enumerate(objects):
            if len(hom_basis(u, X)) != ranks[k] + ranks[k + 1]:
                return False
    return True


def is_exact_sequence(seq: NExactSeq) -> bool:
    """Exactness of ``0 -> X_0 -> ... -> X_k -> 0`` in mod(A), checked vertexwise by ranks."""
    p = seq.objects[0].p
    nv = len(seq.objects[0].dims)
    for v in range(nv):
        ranks = [0] + [em.rank(f.mats[v], p) if f.mats[v].size else 0 for f in seq.maps] + [0]
        for k, X in enumerate(seq.objects):
            if X.dims[v] != ranks[k] + ranks[k + 1]:
                return False
    for f, g in zip(seq.maps, seq.maps[1:]):
        if not (g @ f).is_zero():
            return False
    return True
