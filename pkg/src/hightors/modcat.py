"""Hom spaces, Krull-Schmidt decomposition, resolutions and Ext in mod(A).

Indecomposables are kept in a per-algebra registry (see :func:`registry`)
so that every part of the library refers to them by a stable integer.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import exactmat as em
from .algebra import (
    AlgebraError,
    Module,
    ModuleMap,
    PathAlgebra,
    cokernel,
    direct_sum,
    dual_map,
    dual_module,
    generator_position,
    identity_map,
    image_bases,
    kernel,
    map_from_generators,
    projective_sum,
    quotient,
    submodule,
    summand_rows,
    zero_map,
)


class SchurError(RuntimeError):
    """Raised when a summand's endomorphism ring is not certified local with residue field k."""


class CapError(RuntimeError):
    """A configured enumeration cap was exceeded."""


class RepresentationInfinite(CapError):
    pass


# Hom -------------------------------------------------------------------------


def _unpack(X: Module, Y: Module, vec: np.ndarray) -> ModuleMap:
    mats, off = [], 0
    for v in range(len(X.dims)):
        sz = Y.dims[v] * X.dims[v]
        mats.append(vec[off : off + sz].reshape(Y.dims[v], X.dims[v]))
        off += sz
    return ModuleMap(X, Y, mats)


def _offsets(X: Module, Y: Module) -> list[int]:
    out, s = [], 0
    for v in range(len(X.dims)):
        out.append(s)
        s += Y.dims[v] * X.dims[v]
    out.append(s)
    return out


def hom_basis(X: Module, Y: Module) -> list[ModuleMap]:
    """Basis of ``Hom(X, Y)``.

    For a projective sum the space is ``Y_{t_1} + ... + Y_{t_r}`` via the
    generator images; otherwise the naturality squares are solved as one
    linear system (row-major ``vec(A F B) = (A kron B^T) vec(F)``).
    """
    if X.algebra is not Y.algebra:
        raise AlgebraError("modules over different algebras")
    p = X.p
    if X.tops is not None:
        out = []
        for j, t in enumerate(X.tops):
            for r in range(Y.dims[t]):
                imgs = [np.zeros(Y.dims[tt], dtype=np.int64) for tt in X.tops]
                imgs[j][r] = 1
                out.append(map_from_generators(X, Y, imgs))
        return out
    off = _offsets(X, Y)
    nvar = off[-1]
    if nvar == 0:
        return []
    blocks = []
    for ai, a in enumerate(X.algebra.arrows):
        s, t = a.source, a.target
        nrows = Y.dims[t] * X.dims[s]
        if nrows == 0:
            continue
        E = em.zeros(nrows, nvar)
        # Y_a f_s - f_t X_a = 0
        E[:, off[s] : off[s + 1]] += np.kron(Y.mats[ai], em.identity(X.dims[s]))
        E[:, off[t] : off[t + 1]] -= np.kron(em.identity(Y.dims[t]), X.mats[ai].T)
        blocks.append(E % p)
    if not blocks:
        K = em.identity(nvar)
    else:
        K = em.nullspace(np.vstack(blocks), p)
    return [_unpack(X, Y, K[:, k].copy()) for k in range(K.shape[1])]


def hom_dim(X: Module, Y: Module) -> int:
    return len(hom_basis(X, Y))


def hom_matrix(maps: list[ModuleMap], X: Module | None = None, Y: Module | None = None) -> np.ndarray:
    """Columns = vectorised maps."""
    if not maps:
        size = _offsets(X, Y)[-1] if X is not None else 0
        return em.zeros(size, 0)
    return np.column_stack([f.vec() for f in maps])


def find_iso(X: Module, Y: Module) -> ModuleMap | None:
    """An isomorphism ``X -> Y`` among the Hom basis, for ``X`` indecomposable.

    Non-isomorphisms between isomorphic indecomposables form a proper
    subspace, so some basis element is invertible whenever ``X`` is ``Y``.
    """
    if X.dims != Y.dims:
        return None
    for f in hom_basis(X, Y):
        if f.is_iso():
            return f
    return None


def compose_vec(X: Module, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Vectorised ``f . g`` for endomorphisms of ``X``."""
    p = X.p
    out, off = [], 0
    for d in X.dims:
        sz = d * d
        out.append(em.matmul(f[off : off + sz].reshape(d, d), g[off : off + sz].reshape(d, d), p).reshape(-1))
        off += sz
    return np.concatenate(out) if out else np.zeros(0, np.int64)


# decomposition -----------------------------------------------------------------


def _power(phi: ModuleMap, N: int) -> ModuleMap:
    out = identity_map(phi.source)
    base = phi
    while N:
        if N & 1:
            out = out @ base
        base = base @ base
        N >>= 1
    return out


_SEED = 0


def set_seed(seed: int) -> None:
    """Seed for the random endomorphisms tried when splitting modules."""
    global _SEED
    _SEED = int(seed)


def _try_split(X: Module, phi: ModuleMap, ident: ModuleMap, N: int):
    """``(ker, im)`` of ``(phi - lam)^N`` for an eigenvalue giving a proper splitting, else None."""
    p = X.p
    for lam in range(p):
        psi = phi - ident.scale(lam)
        if psi.is_iso():
            continue
        psiN = _power(psi, N)
        if psiN.is_zero():
            continue
        return [em.nullspace(m, p) for m in psiN.mats], image_bases(psiN)
    return None


def _local_certificate(X: Module, E: list[ModuleMap], ident: ModuleMap, N: int):
    """Basis of ``rad End(X)`` when ``End(X)`` is local, else a reason string."""
    p = X.p
    rad = []
    for phi in E:
        for lam in range(p):
            psi = phi - ident.scale(lam)
            if _power(psi, N).is_zero():
                rad.append(psi.vec())
                break
        else:
            return "an endomorphism has no eigenvalue in the prime field"
    R = em.col_basis(np.column_stack(rad), p) if rad else em.zeros(len(ident.vec()), 0)
    if R.shape[1] != len(E) - 1:
        return "End/rad is not one-dimensional"
    power = R
    for _ in range(N + 1):
        if power.shape[1] == 0:
            return R
        prods = [compose_vec(X, power[:, i], R[:, j]) for i in range(power.shape[1]) for j in range(R.shape[1])]
        power = em.col_basis(np.column_stack(prods), p) if prods else em.zeros(R.shape[0], 0)
        if not all(em.in_span(R, power[:, k], p) for k in range(power.shape[1])):
            return "radical candidate is not an ideal"
    return "radical candidate is not nilpotent"


def _fitting_split(X: Module, seed: int | None = None):
    """Try to split ``X``; return ``(ker, im)`` submodule bases or ``(None, rad)``.

    Basis endomorphisms are tried first, then the local certificate, and
    only when both fail a batch of seeded random endomorphisms.
    """
    p = X.p
    E = hom_basis(X, X)
    ident = identity_map(X)
    N = X.dim
    for phi in E:
        got = _try_split(X, phi, ident, N)
        if got is not None:
            return got
    cert = _local_certificate(X, E, ident, N)
    if not isinstance(cert, str):
        return None, cert
    rng = np.random.default_rng(_SEED if seed is None else seed)
    for _ in range(64):
        coeffs = rng.integers(0, p, size=len(E))
        acc = zero_map(X, X)
        for c, f in zip(coeffs, E):
            acc = acc + f.scale(int(c))
        got = _try_split(X, acc, ident, N)
        if got is not None:
            return got
    raise SchurError(f"module with dims {X.dims}: {cert}")


def _split_rec(X: Module, incl: ModuleMap, out: list):
    if X.is_zero():
        return
    ker, img = _fitting_split(X)
    if ker is None:
        out.append((X, incl, img))
        return
    for bases in (ker, img):
        U, i = submodule(X, bases)
        _split_rec(U, incl @ i, out)


@dataclass
class Decomposition:
    """``X`` is isomorphic to the direct sum of registry entries ``indices``.

    ``iso`` maps the direct sum of the canonical modules (in the order of
    ``indices``) isomorphically onto ``X``.
    """

    module: Module
    indices: list[int]
    iso: ModuleMap
    inverse: ModuleMap

    def multiset(self) -> Counter:
        return Counter(self.indices)

    @property
    def summand_inclusions(self) -> list[ModuleMap]:
        ds = direct_sum([registry(self.module.algebra).module(i) for i in self.indices], self.module.algebra)
        return [self.iso @ inj for inj in ds.injections]

    @property
    def summand_projections(self) -> list[ModuleMap]:
        ds = direct_sum([registry(self.module.algebra).module(i) for i in self.indices], self.module.algebra)
        return [pr @ self.inverse for pr in ds.projections]


def decompose(X: Module) -> Decomposition:
    """Split ``X`` into indecomposables registered in the algebra's registry."""
    A = X.algebra
    reg = registry(A)
    pieces: list = []
    _split_rec(X, identity_map(X), pieces)
    indices, maps = [], []
    for U, incl, rad in pieces:
        idx, iso = reg.add(U, radical=rad)  # iso: canonical -> U
        indices.append(idx)
        maps.append(incl @ iso)
    # sort by registry index for a canonical order
    order = sorted(range(len(indices)), key=lambda k: indices[k])
    indices = [indices[k] for k in order]
    maps = [maps[k] for k in order]
    ds = direct_sum([reg.module(i) for i in indices], A)
    iso = zero_map(ds.module, X)
    for f, pr in zip(maps, ds.projections):
        iso = iso + f @ pr
    if not iso.is_iso():
        raise SchurError("assembled decomposition map is not an isomorphism")
    inv = ModuleMap(X, ds.module, [em.inverse(m, X.p) if m.size else m.T.copy() for m in iso.mats])
    return Decomposition(X, indices, iso, inv)


def is_indecomposable(X: Module) -> bool:
    return not X.is_zero() and len(decompose(X).indices) == 1


def isomorphic(X: Module, Y: Module) -> bool:
    if X.dims != Y.dims:
        return False
    return decompose(X).multiset() == decompose(Y).multiset()


# registry -----------------------------------------------------------------------


def loewy_label(X: Module) -> str:
    """Radical layers as vertex labels, top first (e.g. ``2/3``)."""
    A = X.algebra
    p = X.p
    layers = []
    cur = [em.identity(d) for d in X.dims]
    while any(B.shape[1] for B in cur):
        rad = []
        for v in range(A.num_vertices):
            imgs = [em.matmul(X.mats[ai], cur[a.source], p) for ai, a in enumerate(A.arrows) if a.target == v]
            imgs = [M for M in imgs if M.shape[1]]
            rad.append(em.col_basis(np.hstack(imgs), p) if imgs else em.zeros(X.dims[v], 0))
        top = [cur[v].shape[1] - rad[v].shape[1] for v in range(A.num_vertices)]
        labels = [A.label(v) for v in range(A.num_vertices) for _ in range(top[v])]
        sep = "" if all(len(s) == 1 for s in labels) else ","
        layers.append(sep.join(labels))
        cur = rad
    return "/".join(layers) if layers else "0"


@dataclass
class RegistryEntry:
    module: Module
    label: str
    radical: np.ndarray | None = None


class Registry:
    """Append-only list of pairwise non-isomorphic indecomposables."""

    def __init__(self, algebra: PathAlgebra):
        self.algebra = algebra
        self._entries: list[RegistryEntry] = []
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self._entries)

    def module(self, i: int) -> Module:
        return self._entries[i].module

    def label(self, i: int) -> str:
        return self._entries[i].label

    def entries(self) -> list[RegistryEntry]:
        return list(self._entries)

    def find(self, U: Module) -> tuple[int, ModuleMap] | None:
        for i, e in enumerate(self._entries):
            f = find_iso(e.module, U)
            if f is not None:
                return i, f
        return None

    def add(self, U: Module, radical=None) -> tuple[int, ModuleMap]:
        """Index of ``U`` (assumed indecomposable) and an iso canonical -> ``U``."""
        with self._lock:
            hit = self.find(U)
            if hit is not None:
                return hit
            label = loewy_label(U)
            taken = {e.label for e in self._entries}
            if label in taken:
                k = 2
                while f"{label}#{k}" in taken:
                    k += 1
                label = f"{label}#{k}"
            canon = Module(U.algebra, U.dims, U.mats, tops=U.tops, name=U.name or label, check=False)
            self._entries.append(RegistryEntry(canon, label, radical))
            return len(self._entries) - 1, ModuleMap(canon, U, [em.identity(d) for d in U.dims])

    def index_of(self, U: Module) -> int:
        return self.add(U)[0]

    def relabel(self, i: int, label: str) -> None:
        with self._lock:
            self._entries[i].label = label

    def by_label(self, label: str) -> int:
        for i, e in enumerate(self._entries):
            if e.label == label:
                return i
        raise KeyError(label)


_REG_LOCK = threading.Lock()


def registry(A: PathAlgebra) -> Registry:
    with _REG_LOCK:
        reg = getattr(A, "_registry", None)
        if reg is None:
            reg = Registry(A)
            A._registry = reg
        return reg


def index_of(X: Module) -> int:
    """Registry index of an indecomposable module."""
    d = decompose(X)
    if len(d.indices) != 1:
        raise ValueError("module is not indecomposable")
    return d.indices[0]


def sum_of(A: PathAlgebra, indices) -> Module:
    """Direct sum of registry entries (with repetition)."""
    reg = registry(A)
    return direct_sum([reg.module(i) for i in indices], A).module


# radical, covers, resolutions ---------------------------------------------------


def radical_bases(X: Module) -> list[np.ndarray]:
    A = X.algebra
    p = X.p
    out = []
    for v in range(A.num_vertices):
        imgs = [X.mats[ai] for ai, a in enumerate(A.arrows) if a.target == v and X.mats[ai].shape[1]]
        out.append(em.col_basis(np.hstack(imgs), p) if imgs else em.zeros(X.dims[v], 0))
    return out


def top_dims(X: Module) -> tuple[int, ...]:
    return tuple(X.dims[v] - B.shape[1] for v, B in enumerate(radical_bases(X)))


def projective_cover(X: Module) -> ModuleMap:
    """Epimorphism ``P -> X`` with ``P`` a projective sum and kernel in ``rad P``."""
    A = X.algebra
    rad = radical_bases(X)
    tops, images = [], []
    for v in range(A.num_vertices):
        C = em.complement(rad[v], X.p)
        for k in range(C.shape[1]):
            tops.append(v)
            images.append(C[:, k])
    P = projective_sum(A, tuple(tops))
    return map_from_generators(P, X, images)


@dataclass
class Resolution:
    """Minimal projective resolution ``... -> P_1 -> P_0 -> X``.

    ``diffs[i]`` is ``d_{i+1}: P_{i+1} -> P_i``; ``syzygies[i]`` is
    ``Omega^i X`` with its inclusion into ``P_{i-1}`` (``X`` itself for i = 0).
    """

    module: Module
    terms: list[Module]
    augmentation: ModuleMap
    diffs: list[ModuleMap]
    syzygies: list[Module]
    complete: bool

    def term(self, i: int) -> Module:
        if i < len(self.terms):
            return self.terms[i]
        return projective_sum(self.module.algebra, ())

    def diff(self, i: int) -> ModuleMap:
        """``d_i: P_i -> P_{i-1}`` (zero map outside the computed range)."""
        if 1 <= i <= len(self.diffs):
            return self.diffs[i - 1]
        return zero_map(self.term(i), self.term(i - 1))


def minimal_projective_resolution(X: Module, length: int) -> Resolution:
    """Terms ``P_0 .. P_length`` (fewer if the resolution stops)."""
    eps = projective_cover(X)
    terms, diffs, syz = [eps.source], [], [X]
    K, inc = kernel(eps)
    prev = eps.source
    complete = K.is_zero()
    while not complete and len(terms) <= length:
        syz.append(K)
        cov = projective_cover(K)
        d = inc @ cov
        diffs.append(ModuleMap(cov.source, prev, d.mats))
        terms.append(cov.source)
        K, inc2 = kernel(cov)
        inc = ModuleMap(K, cov.source, inc2.mats)
        prev = cov.source
        complete = K.is_zero()
    if complete:
        syz.append(K)
    return Resolution(X, terms, eps, diffs, syz, complete)


def syzygy(X: Module, k: int) -> Module:
    if k == 0:
        return X
    res = minimal_projective_resolution(X, k)
    if k < len(res.syzygies):
        return res.syzygies[k]
    return X.algebra.zero_module()


def projective_dimension(X: Module, cap: int = 50) -> int:
    res = minimal_projective_resolution(X, cap)
    if not res.complete:
        raise CapError(f"projective dimension exceeds {cap}")
    return len(res.terms) - 1 if not X.is_zero() else -1


def global_dimension(A: PathAlgebra, cap: int = 50) -> int:
    return max(projective_dimension(A.simple(v), cap) for v in range(A.num_vertices))


def injective_envelope(X: Module) -> ModuleMap:
    """Essential monomorphism ``X -> I`` with ``I`` injective (``D`` of a projective cover)."""
    cov = projective_cover(dual_module(X))
    d = dual_map(cov)
    I = d.target
    tops = cov.source.tops
    if len(tops) == 1:
        I.name = f"I{X.algebra.label(tops[0])}"
    return ModuleMap(X, I, d.mats)


def is_projective(X: Module) -> bool:
    return projective_cover(X).is_injective()


def is_injective_module(X: Module) -> bool:
    return injective_envelope(X).is_surjective()


# Ext ------------------------------------------------------------------------------


def _proj_coords(P: Module, Y: Module) -> int:
    return sum(Y.dims[t] for t in P.tops)


def _coord_offsets(P: Module, Y: Module) -> list[int]:
    out, s = [], 0
    for t in P.tops:
        out.append(s)
        s += Y.dims[t]
    out.append(s)
    return out


def precompose_matrix(d: ModuleMap, Y: Module) -> np.ndarray:
    """Matrix of ``Hom(Q, Y) -> Hom(P, Y)``, ``h -> h . d`` for ``d: P -> Q`` between projective sums.

    Coordinates on both sides are generator images.
    """
    P, Q = d.source, d.target
    p = Y.p
    ro, co = _coord_offsets(P, Y), _coord_offsets(Q, Y)
    M = em.zeros(ro[-1], co[-1])
    for j in range(len(P.tops)):
        v, row = generator_position(P, j)
        x = d.mats[v][:, row]
        for r, (jj, k) in enumerate(summand_rows(Q, v)):
            if x[r]:
                M[ro[j] : ro[j + 1], co[jj] : co[jj + 1]] += x[r] * Y.act(k)
    return M % p


def postcompose_matrix(P: Module, f: ModuleMap) -> np.ndarray:
    """Matrix of ``Hom(P, Y) -> Hom(P, Y')``, ``h -> f . h`` for a projective sum ``P``."""
    Y, Z = f.source, f.target
    ro, co = _coord_offsets(P, Z), _coord_offsets(P, Y)
    M = em.zeros(ro[-1], co[-1])
    for j, t in enumerate(P.tops):
        M[ro[j] : ro[j + 1], co[j] : co[j + 1]] = f.mats[t]
    return M


def coords_of_map(h: ModuleMap) -> np.ndarray:
    P = h.source
    parts = []
    for j in range(len(P.tops)):
        v, row = generator_position(P, j)
        parts.append(h.mats[v][:, row])
    return np.concatenate(parts) if parts else np.zeros(0, np.int64)


def map_of_coords(P: Module, Y: Module, c: np.ndarray) -> ModuleMap:
    off = _coord_offsets(P, Y)
    return map_from_generators(P, Y, [c[off[j] : off[j + 1]] for j in range(len(P.tops))])


@dataclass
class ExtSpace:
    """``Ext^i(X, Y)`` as cocycles ``P_i -> Y`` modulo coboundaries."""

    degree: int
    source: Module
    target: Module
    resolution: Resolution
    cocycles: np.ndarray
    coboundaries: np.ndarray
    basis: np.ndarray  # columns: cocycle representatives of a basis

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def coords(self, c: np.ndarray) -> np.ndarray:
        """Coordinates of the class of cocycle ``c`` in :attr:`basis`."""
        p = self.target.p
        if self.dim == 0:
            return np.zeros(0, np.int64)
        M = np.hstack([self.basis, self.coboundaries])
        x, _ = em.solve(M, c.reshape(-1, 1), p)
        if x is None:
            raise ValueError("not a cocycle")
        return x[: self.dim, 0].copy()

    def is_zero_class(self, c: np.ndarray) -> bool:
        return not np.any(self.coords(c))

    def element(self, coeffs) -> "ExtClass":
        c = em.matmul(self.basis, np.asarray(coeffs, dtype=np.int64).reshape(-1, 1), self.target.p)[:, 0]
        return ExtClass(self, c)

    def classes(self):
        """One representative of every class up to nonzero scalar."""
        for v in em.projective_points(self.dim, self.target.p):
            yield self.element(v)


@dataclass
class ExtClass:
    space: ExtSpace
    cocycle: np.ndarray

    @property
    def degree(self) -> int:
        return self.space.degree

    def coords(self) -> np.ndarray:
        return self.space.coords(self.cocycle)

    def is_zero(self) -> bool:
        return self.space.dim == 0 or not np.any(self.coords())

    def cocycle_map(self) -> ModuleMap:
        return map_of_coords(self.space.resolution.term(self.degree), self.space.target, self.cocycle)


def _ext_from_resolution(i: int, res: Resolution, Y: Module) -> ExtSpace:
    p = Y.p
    Pi = res.term(i)
    n = _proj_coords(Pi, Y)
    if n == 0:
        z = em.zeros(0, 0)
        return ExtSpace(i, res.module, Y, res, z, z, z)
    nxt = res.diff(i + 1)
    if res.term(i + 1).tops:
        Z = em.nullspace(precompose_matrix(nxt, Y).reshape(-1, n), p)
    else:
        Z = em.identity(n)
    prev = precompose_matrix(res.diff(i), Y)
    B = em.col_basis(prev, p) if prev.shape[1] else em.zeros(n, 0)
    # complete B to a basis of Z
    Bz = em.col_basis(np.hstack([B, Z]), p) if Z.shape[1] else em.zeros(n, 0)
    basis = []
    cur = B
    for k in range(Bz.shape[1]):
        v = Bz[:, k : k + 1]
        if cur.shape[1] == 0 or not em.in_span(cur, v[:, 0], p):
            basis.append(v)
            cur = np.hstack([cur, v])
    basis_m = np.hstack(basis) if basis else em.zeros(n, 0)
    return ExtSpace(i, res.module, Y, res, Z, B, basis_m)


def ext(i: int, X: Module, Y: Module, res: Resolution | None = None) -> ExtSpace:
    if i < 1:
        raise ValueError("ext degree must be at least 1")
    if res is None:
        res = minimal_projective_resolution(X, i + 1)
    return _ext_from_resolution(i, res, Y)


def ext_dim(i: int, X: Module, Y: Module) -> int:
    return ext(i, X, Y).dim


def yoneda_push(f: ModuleMap, e: ExtClass) -> ExtClass:
    """Class of ``f . e`` in ``Ext^i(X, Y')`` for ``f: Y -> Y'``."""
    sp = e.space
    P = sp.resolution.term(sp.degree)
    new = _ext_from_resolution(sp.degree, sp.resolution, f.target)
    c = em.matmul(postcompose_matrix(P, f), e.cocycle.reshape(-1, 1), f.p)[:, 0]
    return ExtClass(new, c)


def lift_to_projective(P: Module, target_map: ModuleMap, rhs: ModuleMap) -> ModuleMap:
    """Some ``h: P -> M`` with ``target_map . h = rhs`` (``target_map: M -> N`` must hit ``rhs``)."""
    M = target_map.source
    images = []
    for j in range(len(P.tops)):
        v, row = generator_position(P, j)
        y = rhs.mats[v][:, row].reshape(-1, 1)
        x, _ = em.solve(target_map.mats[v], y, P.p)
        if x is None:
            raise ValueError("map does not factor")
        images.append(x[:, 0])
    return map_from_generators(P, M, images)


def comparison_maps(g: ModuleMap, src: Resolution, tgt: Resolution, upto: int) -> list[ModuleMap]:
    """Chain maps ``g_k: P'_k -> P_k`` lifting ``g: X' -> X`` (``src`` resolves ``X'``)."""
    out = [lift_to_projective(src.term(0), tgt.augmentation, g @ src.augmentation)]
    for k in range(1, upto + 1):
        Pk_src = src.term(k)
        rhs = out[-1] @ src.diff(k)
        out.append(lift_to_projective(Pk_src, tgt.diff(k), rhs))
    return out


def yoneda_pull(e: ExtClass, g: ModuleMap, res: Resolution | None = None) -> ExtClass:
    """Class of ``e . g`` in ``Ext^i(X', Y)`` for ``g: X' -> X``."""
    sp = e.space
    i = sp.degree
    if res is None:
        res = minimal_projective_resolution(g.source, i + 1)
    new = _ext_from_resolution(i, res, sp.target)
    if new.dim == 0 and _proj_coords(res.term(i), sp.target) == 0:
        return ExtClass(new, np.zeros(0, np.int64))
    gk = comparison_maps(g, res, sp.resolution, i)[i]
    c = em.matmul(precompose_matrix(gk, sp.target), e.cocycle.reshape(-1, 1), g.p)[:, 0]
    return ExtClass(new, c)


def extension_middle(e: ExtClass) -> tuple[Module, ModuleMap, ModuleMap]:
    """For ``e`` in ``Ext^1(X, Y)``: the sequence ``0 -> Y -> E -> X -> 0``.

    ``E`` is the pushout of ``P_1 -> P_0`` along the cocycle.
    """
    sp = e.space
    if sp.degree != 1:
        raise ValueError("extension_middle needs a degree one class")
    res = sp.resolution
    Y, X = sp.target, sp.source
    c = e.cocycle_map()
    d1 = res.diff(1)
    ds = direct_sum([Y, res.term(0)], X.algebra)
    phi = ds.injections[0] @ c - ds.injections[1] @ d1
    E, q = cokernel(phi)
    incl = q @ ds.injections[0]
    # X = coker(d1); the projection E -> X is induced by (0, eps)
    eps = res.augmentation
    mats = []
    for v in range(len(X.dims)):
        # q_v restricted to the P_0 part is surjective onto a complement; solve
        S = q.mats[v]
        Ybl = S[:, : Y.dims[v]]
        Pbl = S[:, Y.dims[v] :]
        # find M with M . S = (0 | eps_v)
        target = np.hstack([em.zeros(X.dims[v], Y.dims[v]), eps.mats[v]])
        sol, _ = em.solve(S.T.copy(), target.T.copy(), X.p)
        if sol is None:
            raise ArithmeticError("inconsistent extension data")
        mats.append(sol.T.copy())
        del Ybl, Pbl
    proj = ModuleMap(E, X, mats)
    return E, incl, proj


# submodules, trace ----------------------------------------------------------------


def _canon(bases, p) -> tuple:
    return tuple(em.row_basis(B.T, p).tobytes() + bytes([B.shape[1]]) if B.shape[1] else b"" for B in bases)


def maximal_submodules(X: Module) -> list[list[np.ndarray]]:
    """Kernels of the nonzero maps ``X -> S_v``, up to scalar."""
    A = X.algebra
    out = []
    for v in range(A.num_vertices):
        H = hom_basis(X, A.simple(v))
        for coeffs in em.projective_points(len(H), X.p):
            f = zero_map(X, A.simple(v))
            for c, h in zip(coeffs, H):
                f = f + h.scale(int(c))
            out.append([em.nullspace(m, X.p) for m in f.mats])
    return out


def submodule_lattice(X: Module, cap: int = 8) -> list[list[np.ndarray]]:
    """All submodules of ``X`` as per-vertex column bases (``X`` first, zero last)."""
    if X.dim > cap:
        raise CapError(f"module dimension {X.dim} exceeds the lattice cap {cap}")
    p = X.p
    seen = {}
    stack = [[em.identity(d) for d in X.dims]]
    while stack:
        bases = stack.pop()
        key = _canon(bases, p)
        if key in seen:
            continue
        seen[key] = bases
        U, inc = submodule(X, bases)
        for sub in maximal_submodules(U):
            stack.append([em.matmul(inc.mats[v], sub[v], p) if sub[v].shape[1] else em.zeros(X.dims[v], 0) for v in range(len(X.dims))])
    out = list(seen.values())
    out.sort(key=lambda b: -sum(B.shape[1] for B in b))
    return out


def quotients(X: Module, cap: int = 8) -> list[tuple[Module, ModuleMap]]:
    return [quotient(X, bases) for bases in submodule_lattice(X, cap)]


def trace(T: Module, X: Module) -> tuple[Module, ModuleMap]:
    """Sum of the images of all maps ``T -> X``."""
    p = X.p
    bases = []
    H = hom_basis(T, X)
    for v in range(len(X.dims)):
        cols = [h.mats[v] for h in H if h.mats[v].shape[1]]
        bases.append(em.col_basis(np.hstack(cols), p) if cols else em.zeros(X.dims[v], 0))
    return submodule(X, bases)


def fac_membership(T: Module, X: Module) -> bool:
    U, _ = trace(T, X)
    return U.dims == X.dims


# transpose, tau -------------------------------------------------------------------


def transpose(X: Module) -> Module:
    """Auslander-Bridger transpose, a module over the opposite algebra."""
    A = X.algebra
    op = A.opposite()
    res = minimal_projective_resolution(X, 1)
    P0, P1 = res.term(0), res.term(1)
    d1 = res.diff(1)
    if not P1.tops:
        return op.zero_module()
    Q0 = projective_sum(op, P0.tops)
    Q1 = projective_sum(op, P1.tops)
    # generator j of Q0 maps to sum_k D[k][j], the P0-summand-j part of d1(gen_k)
    images = []
    for j, a in enumerate(P0.tops):
        img = np.zeros(Q1.dims[a], dtype=np.int64)
        rows_q = {jk: r for r, jk in enumerate(summand_rows(Q1, a))}
        for k in range(len(P1.tops)):
            v, row = generator_position(P1, k)
            x = d1.mats[v][:, row]
            for r, (jj, path) in enumerate(summand_rows(P0, v)):
                if jj == j and x[r]:
                    img[rows_q[(k, path)]] += x[r]
        images.append(img % X.p)
    f = map_from_generators(Q0, Q1, images)
    T, _ = cokernel(f)
    return T


def tau_n_minus(X: Module, n: int | None = None) -> Module:
    """``Tr . Omega^{n-1} . D``."""
    A = X.algebra
    n = A.n if n is None else n
    return transpose(syzygy(dual_module(X), n - 1))


# indecomposables ------------------------------------------------------------------


def indecomposables(A: PathAlgebra, cap: int = 12) -> list[int]:
    """Registry indices of all indecomposables, for a representation-finite algebra.

    Level ``d`` is built from the non-split extensions between a simple and
    an indecomposable of dimension ``d - 1``; the search stops at the first
    empty level.
    """
    reg = registry(A)
    cached = getattr(A, "_all_indec", None)
    if cached is not None:
        return list(cached)
    simples = [index_of(A.simple(v)) for v in range(A.num_vertices)]
    for v in range(A.num_vertices):
        index_of(A.projective(v))
        index_of(A.injective(v))
    levels = {1: set(simples)}
    d = 1
    while True:
        d += 1
        if d > cap:
            raise RepresentationInfinite(f"indecomposables of dimension above {cap} keep appearing")
        new = set()
        for K in levels[d - 1]:
            KM = reg.module(K)
            for s in simples:
                S = reg.module(s)
                for X, Y in ((S, KM), (KM, S)):
                    E1 = ext(1, X, Y)
                    for cls in E1.classes():
                        E, _, _ = extension_middle(cls)
                        for i in decompose(E).indices:
                            if reg.module(i).dim == d:
                                new.add(i)
        if not new:
            break
        levels[d] = new
    found = sorted(set().union(*levels.values()) | {i for i in range(len(reg)) if reg.module(i).dim > 0})
    A._all_indec = tuple(found)
    return found


def cartan_form(A: PathAlgebra, x, y) -> int:
    """Euler form ``<x, y>`` of dimension vectors, from the projective resolutions of simples."""
    nv = A.num_vertices
    # column j of C is dim P_j, and <dim P_j, y> = y_j
    C = np.array([[A.projective(j).dims[i] for j in range(nv)] for i in range(nv)], dtype=float)
    coeffs = np.linalg.solve(C, np.asarray(x, dtype=float))
    return int(round(float(coeffs @ np.asarray(y, dtype=float))))
