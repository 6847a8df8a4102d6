"""Minimal right and left approximations by ``add`` of a set of indecomposables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exactmat as em
from .algebra import Module, ModuleMap, PathAlgebra, column_map, row_map, zero_map
from .modcat import decompose, hom_basis, registry


@dataclass
class Approximation:
    """``map`` is ``s -> X`` (right) or ``X -> s`` (left) with ``s`` the sum of ``summands``.

    ``components[j]`` is the restriction to (right) or projection onto (left)
    the ``j``-th summand.
    """

    side: str
    module: Module
    summands: list[int]
    components: list[ModuleMap]
    map: ModuleMap

    @property
    def object(self) -> Module:
        return self.map.source if self.side == "right" else self.map.target


def _canon(A: PathAlgebra, i: int) -> Module:
    return registry(A).module(i)


def _in_span(vecs: list[np.ndarray], v: np.ndarray, p: int) -> bool:
    if not np.any(v):
        return True
    if not vecs:
        return False
    return em.in_span(np.column_stack(vecs), v, p)


def _strip(A: PathAlgebra, side: str, summands: list[int], comps: list[ModuleMap]):
    """Greedily drop components that factor through the others."""
    p = A.p
    summands, comps = list(summands), list(comps)
    changed = True
    while changed:
        changed = False
        for j in range(len(comps)):
            sj = _canon(A, summands[j])
            gens = []
            for k in range(len(comps)):
                if k == j:
                    continue
                sk = _canon(A, summands[k])
                if side == "right":
                    gens += [(comps[k] @ h).vec() for h in hom_basis(sj, sk)]
                else:
                    gens += [(h @ comps[k]).vec() for h in hom_basis(sk, sj)]
            if _in_span(gens, comps[j].vec(), p):
                del summands[j], comps[j]
                changed = True
                break
    return summands, comps


def _assemble(X: Module, side: str, summands, comps) -> Approximation:
    if side == "right":
        _, f = row_map(comps, X)
    else:
        _, f = column_map(comps, X)
    return Approximation(side, X, list(summands), list(comps), f)


def right_approx(S, X: Module, minimal: bool = True) -> Approximation:
    """Right ``add(S)``-approximation of ``X``; ``S`` is a collection of registry indices."""
    A = X.algebra
    summands, comps = [], []
    for i in sorted(set(S)):
        for h in hom_basis(_canon(A, i), X):
            summands.append(i)
            comps.append(h)
    if minimal:
        summands, comps = _strip(A, "right", summands, comps)
    return _assemble(X, "right", summands, comps)


def left_approx(S, X: Module, minimal: bool = True) -> Approximation:
    A = X.algebra
    summands, comps = [], []
    for i in sorted(set(S)):
        for h in hom_basis(X, _canon(A, i)):
            summands.append(i)
            comps.append(h)
    if minimal:
        summands, comps = _strip(A, "left", summands, comps)
    return _assemble(X, "left", summands, comps)


def minimize(f: ModuleMap, side: str) -> Approximation:
    """Minimal version of a pre-approximation ``f`` (``side`` is ``left`` or ``right``)."""
    A = f.source.algebra
    if side == "right":
        d = decompose(f.source)
        comps = [f @ inc for inc in d.summand_inclusions]
        X = f.target
    elif side == "left":
        d = decompose(f.target)
        comps = [pr @ f for pr in d.summand_projections]
        X = f.source
    else:
        raise ValueError("side must be 'left' or 'right'")
    summands, comps = _strip(A, side, d.indices, comps)
    return _assemble(X, side, summands, comps)


def is_minimal(ap: Approximation) -> bool:
    """Every ``g`` in ``End(s)`` with ``f g = f`` (resp. ``g f = f``) is an automorphism.

    The solutions are ``1 + h`` with ``f h = 0``; they are all invertible
    exactly when each such ``h`` lies in the radical of ``End(s)``, which is
    checked blockwise on the indecomposable summands.
    """
    A = ap.module.algebra
    p = A.p
    m = len(ap.summands)
    mods = [_canon(A, i) for i in ap.summands]
    for j in range(m):
        # all h with column (right) or row (left) j supported, killed by f
        blocks, cols = [], []
        for k in range(m):
            if ap.side == "right":
                H = hom_basis(mods[j], mods[k])
                blocks += [(k, h) for h in H]
                cols += [(ap.components[k] @ h).vec() for h in H]
            else:
                H = hom_basis(mods[k], mods[j])
                blocks += [(k, h) for h in H]
                cols += [(h @ ap.components[k]).vec() for h in H]
        if not cols:
            continue
        K = em.nullspace(np.column_stack(cols), p)
        for c in range(K.shape[1]):
            for k in range(m):
                if ap.summands[k] != ap.summands[j]:
                    continue
                acc = None
                for coef, (kk, h) in zip(K[:, c], blocks):
                    if kk == k and coef:
                        acc = h.scale(int(coef)) if acc is None else acc + h.scale(int(coef))
                if acc is not None and acc.is_iso():
                    return False
    return True


def factors_through(g: ModuleMap, f: ModuleMap, side: str = "right") -> ModuleMap | None:
    """``h`` with ``f h = g`` (right) or ``h f = g`` (left), or ``None``."""
    p = g.p
    if side == "right":
        H = hom_basis(g.source, f.source)
        cols = [(f @ h).vec() for h in H]
    else:
        H = hom_basis(f.target, g.target)
        cols = [(h @ f).vec() for h in H]
    target = g.vec()
    if not cols:
        if np.any(target):
            return None
        return zero_map(g.source, f.source) if side == "right" else zero_map(f.target, g.target)
    x, _ = em.solve(np.column_stack(cols), target.reshape(-1, 1), p)
    if x is None:
        return None
    acc = None
    for c, h in zip(x[:, 0], H):
        t = h.scale(int(c))
        acc = t if acc is None else acc + t
    return acc


def in_add(S, X: Module) -> bool:
    """``X`` is a direct sum of modules from ``S``."""
    return set(decompose(X).indices) <= set(S)
