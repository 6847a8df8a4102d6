"""Bounded complexes over A, with Hom in the derived category via complexes of projectives.

Grading is cohomological: ``d[k]: C[k] -> C[k+1]``.  ``suspend(C, k)`` is
``Sigma^k C`` with ``(Sigma^k C)[j] = C[j+k]`` and differential multiplied
by ``(-1)^k``.  ``shift(C, s)`` moves terms ``s`` degrees up, so it equals
``suspend(C, -s)`` and ``Hom(resolve(X), shift(resolve(Y), -i)) = Ext^i(X, Y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exactmat as em
from .algebra import (
    Module,
    ModuleMap,
    PathAlgebra,
    cokernel,
    direct_sum,
    identity_map,
    kernel,
    quotient,
    zero_map,
)
from .modcat import (
    _coord_offsets,
    coords_of_map,
    map_of_coords,
    minimal_projective_resolution,
    postcompose_matrix,
    precompose_matrix,
    projective_cover,
)


class ComplexError(ValueError):
    pass


@dataclass
class Complex:
    """Terms ``terms[k]`` and differentials ``diffs[k]: terms[k] -> terms[k+1]``.

    Missing degrees are zero.  A complex whose terms are all projective sums
    (``Module.tops`` set) is *perfect* and can be used as the source of
    :func:`hom_d`.
    """

    algebra: PathAlgebra
    terms: dict[int, Module] = field(default_factory=dict)
    diffs: dict[int, ModuleMap] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {k: X for k, X in self.terms.items() if not X.is_zero()}
        self.diffs = {k: d for k, d in self.diffs.items() if k in self.terms and k + 1 in self.terms}

    def term(self, k: int) -> Module:
        X = self.terms.get(k)
        if X is None:
            return self.algebra.shared_zero()
        return X

    def diff(self, k: int) -> ModuleMap:
        d = self.diffs.get(k)
        if d is None:
            return zero_map(self.term(k), self.term(k + 1))
        return d

    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    @property
    def lo(self) -> int | None:
        return min(self.terms) if self.terms else None

    @property
    def hi(self) -> int | None:
        return max(self.terms) if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms

    def is_perfect(self) -> bool:
        return all(X.tops is not None for X in self.terms.values())

    def check(self) -> None:
        for k in self.degrees:
            if not (self.diff(k + 1) @ self.diff(k)).is_zero():
                raise ComplexError(f"d^{k + 1} d^{k} is nonzero")
            if not self.diff(k).is_natural():
                raise ComplexError(f"d^{k} is not a module map")

    def __repr__(self) -> str:
        parts = [f"{k}:{self.terms[k].dims}" for k in self.degrees]
        return f"<Complex {' '.join(parts) or '0'}>"


@dataclass
class ChainMap:
    source: Complex
    target: Complex
    maps: dict[int, ModuleMap] = field(default_factory=dict)

    def at(self, k: int) -> ModuleMap:
        f = self.maps.get(k)
        if f is None:
            return zero_map(self.source.term(k), self.target.term(k))
        return f

    def degrees(self) -> list[int]:
        return sorted(set(self.source.degrees) & set(self.target.degrees))

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        ks = set(other.source.degrees) & set(self.target.degrees)
        return ChainMap(other.source, self.target, {k: self.at(k) @ other.at(k) for k in ks})

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target, {k: self.at(k) + other.at(k) for k in self.degrees()})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target, {k: self.at(k) - other.at(k) for k in self.degrees()})

    def scale(self, c: int) -> "ChainMap":
        return ChainMap(self.source, self.target, {k: f.scale(c) for k, f in self.maps.items()})

    def is_chain_map(self) -> bool:
        ks = set(self.source.degrees) | {k + 1 for k in self.source.degrees}
        for k in ks:
            lhs = self.target.diff(k) @ self.at(k)
            rhs = self.at(k + 1) @ self.source.diff(k)
            if not (lhs - rhs).is_zero():
                return False
        return True

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.maps.values())


def identity_chain(C: Complex) -> ChainMap:
    return ChainMap(C, C, {k: identity_map(C.term(k)) for k in C.degrees})


def zero_chain(C: Complex, D: Complex) -> ChainMap:
    return ChainMap(C, D, {})


# constructions ----------------------------------------------------------------


def complex_from_module(X: Module, degree: int = 0) -> Complex:
    return Complex(X.algebra, {degree: X}, {})


def resolve(X: Module) -> Complex:
    """Minimal projective resolution of ``X`` placed in degrees ``<= 0``."""
    res = minimal_projective_resolution(X, 10**6)
    terms = {-i: P for i, P in enumerate(res.terms)}
    diffs = {-i: d for i, d in enumerate(res.diffs, start=1)}
    return Complex(X.algebra, terms, diffs)


def resolve_with_map(X: Module) -> tuple[Complex, ChainMap]:
    """``resolve(X)`` with the quasi-isomorphism onto ``X`` in degree 0."""
    res = minimal_projective_resolution(X, 10**6)
    P = Complex(X.algebra, {-i: T for i, T in enumerate(res.terms)}, {-i: d for i, d in enumerate(res.diffs, start=1)})
    return P, ChainMap(P, complex_from_module(X), {0: res.augmentation})


def suspend(C: Complex, k: int) -> Complex:
    """``Sigma^k C`` with ``(Sigma^k C)[j] = C[j + k]`` and differentials scaled by ``(-1)^k``."""
    sign = -1 if k % 2 else 1
    terms = {j - k: X for j, X in C.terms.items()}
    diffs = {j - k: d.scale(sign) for j, d in C.diffs.items()}
    return Complex(C.algebra, terms, diffs)


def suspend_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(suspend(f.source, k), suspend(f.target, k), {j - k: g for j, g in f.maps.items()})


def shift(C: Complex, s: int) -> Complex:
    """Move every term ``s`` degrees up: ``shift(C, s)[j] = C[j - s]``, i.e. ``Sigma^{-s} C``."""
    return suspend(C, -s)


def shift_map(f: ChainMap, s: int) -> ChainMap:
    return suspend_map(f, -s)


def direct_sum_complex(parts: list[Complex], algebra: PathAlgebra) -> tuple[Complex, list[ChainMap], list[ChainMap]]:
    """Direct sum with injections and projections."""
    degs = sorted(set().union(*[set(C.degrees) for C in parts])) if parts else []
    sums = {k: direct_sum([C.term(k) for C in parts], algebra) for k in degs}
    diffs = {}
    for k in degs:
        if k + 1 not in sums:
            continue
        acc = zero_map(sums[k].module, sums[k + 1].module)
        for i, C in enumerate(parts):
            acc = acc + sums[k + 1].injections[i] @ C.diff(k) @ sums[k].projections[i]
        diffs[k] = acc
    S = Complex(algebra, {k: s.module for k, s in sums.items()}, diffs)
    injs = [ChainMap(C, S, {k: sums[k].injections[i] for k in degs if k in C.terms}) for i, C in enumerate(parts)]
    projs = [ChainMap(S, C, {k: sums[k].projections[i] for k in degs if k in C.terms}) for i, C in enumerate(parts)]
    return S, injs, projs


@dataclass
class Triangle:
    """``source --f--> target --g--> cone --h--> suspend(source, 1)``."""

    f: ChainMap
    g: ChainMap
    h: ChainMap

    @property
    def cone(self) -> Complex:
        return self.g.target


def cone(f: ChainMap) -> Triangle:
    """Mapping cone ``cone[j] = D[j] + C[j+1]`` with ``d = [[d_D, f], [0, -d_C]]``."""
    C, D = f.source, f.target
    A = C.algebra
    degs = sorted(set(D.degrees) | {k - 1 for k in C.degrees})
    sums = {k: direct_sum([D.term(k), C.term(k + 1)], A) for k in degs}
    diffs = {}
    for k in degs:
        if k + 1 not in sums:
            continue
        s, t = sums[k], sums[k + 1]
        acc = t.injections[0] @ D.diff(k) @ s.projections[0]
        acc = acc + t.injections[0] @ f.at(k + 1) @ s.projections[1]
        acc = acc - t.injections[1] @ C.diff(k + 1) @ s.projections[1]
        diffs[k] = acc
    Cn = Complex(A, {k: s.module for k, s in sums.items()}, diffs)
    g = ChainMap(D, Cn, {k: sums[k].injections[0] for k in D.degrees if k in Cn.terms})
    SC = suspend(C, 1)
    h = ChainMap(Cn, SC, {k: sums[k].projections[1] for k in SC.degrees if k in Cn.terms})
    return Triangle(f, g, h)


# Hom in the homotopy category -----------------------------------------------------


def _offsets_deg(C: Complex, D: Complex, shift_by: int, degs: list[int]) -> dict[int, tuple[int, int]]:
    out, s = {}, 0
    for k in degs:
        n = _coord_offsets(C.term(k), D.term(k + shift_by))[-1]
        out[k] = (s, s + n)
        s += n
    out[None] = (s, s)
    return out


@dataclass
class HomD:
    """``Hom(C, D)`` in the homotopy category for perfect ``C``."""

    source: Complex
    target: Complex
    degs: list[int]
    offsets: dict
    cycles: np.ndarray
    boundaries: np.ndarray
    basis_vecs: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis_vecs.shape[1]

    def to_map(self, vec: np.ndarray) -> ChainMap:
        maps = {}
        for k in self.degs:
            a, b = self.offsets[k]
            if b > a:
                maps[k] = map_of_coords(self.source.term(k), self.target.term(k), vec[a:b])
        return ChainMap(self.source, self.target, maps)

    def to_vec(self, f: ChainMap) -> np.ndarray:
        v = np.zeros(self.offsets[None][0], dtype=np.int64)
        for k in self.degs:
            a, b = self.offsets[k]
            if b > a and k in f.maps:
                v[a:b] = coords_of_map(f.at(k))
        return v

    def basis(self) -> list[ChainMap]:
        return [self.to_map(self.basis_vecs[:, i]) for i in range(self.dim)]

    def coords(self, f: ChainMap) -> np.ndarray:
        """Coordinates of the homotopy class of ``f`` in :meth:`basis`."""
        p = self.source.algebra.p
        v = self.to_vec(f)
        if self.dim == 0:
            return np.zeros(0, np.int64)
        M = np.hstack([self.basis_vecs, self.boundaries])
        x, _ = em.solve(M, v.reshape(-1, 1), p)
        if x is None:
            raise ComplexError("not a chain map")
        return x[: self.dim, 0].copy()

    def is_null(self, f: ChainMap) -> bool:
        return self.dim == 0 or not np.any(self.coords(f))

    def element(self, coeffs) -> ChainMap:
        p = self.source.algebra.p
        v = em.matmul(self.basis_vecs, np.asarray(coeffs, dtype=np.int64).reshape(-1, 1), p)[:, 0]
        return self.to_map(v)


def hom_d(C: Complex, D: Complex) -> HomD:
    """Chain maps ``C -> D`` modulo null-homotopic ones; ``C`` must be perfect."""
    if not C.is_perfect():
        raise ComplexError("source complex must consist of projective modules")
    p = C.algebra.p
    degs = [k for k in C.degrees if k in D.terms]
    off = _offsets_deg(C, D, 0, degs)
    nvar = off[None][0]
    # cycle equations live in Hom(C^k, D^{k+1}) for every k where either side is nonzero
    rows = []
    for k in C.degrees:
        if k + 1 not in D.terms and k not in D.terms:
            continue
        nrow = _coord_offsets(C.term(k), D.term(k + 1))[-1]
        if nrow == 0:
            continue
        E = em.zeros(nrow, nvar)
        if k in off and off[k][1] > off[k][0]:
            E[:, off[k][0] : off[k][1]] += postcompose_matrix(C.term(k), D.diff(k))
        if k + 1 in off and off[k + 1][1] > off[k + 1][0]:
            E[:, off[k + 1][0] : off[k + 1][1]] -= precompose_matrix(C.diff(k), D.term(k + 1))
        rows.append(E % p)
    if nvar == 0:
        Z = em.zeros(0, 0)
    elif rows:
        Z = em.nullspace(np.vstack(rows), p)
    else:
        Z = em.identity(nvar)
    # homotopies h^k: C^k -> D^{k-1}
    hdegs = [k for k in C.degrees if k - 1 in D.terms]
    hoff, s = {}, 0
    for k in hdegs:
        n = _coord_offsets(C.term(k), D.term(k - 1))[-1]
        hoff[k] = (s, s + n)
        s += n
    Bm = em.zeros(nvar, s)
    for k in hdegs:
        a, b = hoff[k]
        if b == a:
            continue
        # f^k = d_D^{k-1} h^k + h^{k+1} d_C^k ; h^k contributes to degrees k and k-1
        if k in off and off[k][1] > off[k][0]:
            Bm[off[k][0] : off[k][1], a:b] += postcompose_matrix(C.term(k), D.diff(k - 1))
        if k - 1 in off and off[k - 1][1] > off[k - 1][0]:
            Bm[off[k - 1][0] : off[k - 1][1], a:b] += precompose_matrix(C.diff(k - 1), D.term(k - 1))
    Bm %= p
    B = em.col_basis(Bm, p) if Bm.shape[1] and nvar else em.zeros(nvar, 0)
    basis = []
    cur = B
    for i in range(Z.shape[1]):
        v = Z[:, i]
        if cur.shape[1] == 0 or not em.in_span(cur, v, p):
            basis.append(v)
            cur = np.hstack([cur, v.reshape(-1, 1)])
    bv = np.column_stack(basis) if basis else em.zeros(nvar, 0)
    return HomD(C, D, degs, off, Z, B, bv)


def homotopic(f: ChainMap, g: ChainMap) -> bool:
    return hom_d(f.source, f.target).is_null(f - g)


# cohomology and truncation ---------------------------------------------------------


def cohomology(C: Complex, i: int) -> Module:
    Zi, inc = kernel(C.diff(i))
    prev = C.diff(i - 1)
    bases = []
    p = C.algebra.p
    for v in range(C.algebra.num_vertices):
        img = prev.mats[v]
        if img.shape[1] == 0 or Zi.dims[v] == 0:
            bases.append(em.zeros(Zi.dims[v], 0))
            continue
        B = em.col_basis(img, p)
        bases.append(em.coordinates(inc.mats[v], B, p))
    H, _ = quotient(Zi, bases)
    return H


def is_acyclic(C: Complex) -> bool:
    return all(cohomology(C, k).is_zero() for k in C.degrees)


def resolve_complex(Y: Complex, cap: int = 64) -> tuple[Complex, ChainMap]:
    """A perfect complex ``P`` with a quasi-isomorphism ``P -> Y``.

    Built from the top degree down: ``P^k`` covers the cycles of the cone of
    the part already built, which makes the cone exact in degree ``k``.
    """
    A = Y.algebra
    if Y.is_zero():
        return Complex(A), ChainMap(Complex(A), Y, {})
    terms: dict[int, Module] = {}
    diffs: dict[int, ModuleMap] = {}
    phis: dict[int, ModuleMap] = {}
    empty = A.zero_module()
    empty.tops = ()
    k = Y.hi
    steps = 0
    while True:
        steps += 1
        if steps > cap:
            raise ComplexError("resolution does not terminate; global dimension may be infinite")
        Pn = terms.get(k + 1, empty)
        Pnn = terms.get(k + 2, empty)
        src = direct_sum([Y.term(k), Pn], A)
        tgt = direct_sum([Y.term(k + 1), Pnn], A)
        dP = diffs.get(k + 1, zero_map(Pn, Pnn))
        phi = phis.get(k + 1, zero_map(Pn, Y.term(k + 1)))
        cd = (
            tgt.injections[0] @ Y.diff(k) @ src.projections[0]
            + tgt.injections[0] @ phi @ src.projections[1]
            + tgt.injections[1] @ dP @ src.projections[1]
        )
        Z, inc = kernel(cd)
        if Z.is_zero():
            if k < Y.lo:
                break
            k -= 1
            continue
        cov = projective_cover(Z)
        pi = inc @ cov
        terms[k] = cov.source
        phis[k] = src.projections[0] @ pi
        diffs[k] = (src.projections[1] @ pi).scale(-1)
        k -= 1
    P = Complex(A, terms, {j: ModuleMap(terms[j], terms[j + 1], d.mats) for j, d in diffs.items() if j + 1 in terms})
    return P, ChainMap(P, Y, {j: ModuleMap(terms[j], Y.term(j), f.mats) for j, f in phis.items() if j in Y.terms})


def lift_along_quasi_iso(f: ChainMap, q: ChainMap) -> ChainMap:
    """``g: C -> P`` with ``q g`` homotopic to ``f``, for ``q: P -> D`` a quasi-isomorphism and ``C`` perfect."""
    C, P = f.source, q.source
    p = C.algebra.p
    HP = hom_d(C, P)
    HD = hom_d(C, f.target)
    if HP.cycles.shape[1] == 0:
        if HD.is_null(f):
            return zero_chain(C, P)
        raise ComplexError("map does not lift")
    cols = [HD.to_vec(q @ HP.to_map(HP.cycles[:, i])) for i in range(HP.cycles.shape[1])]
    M = np.hstack([np.column_stack(cols), HD.boundaries])
    x, _ = em.solve(M, HD.to_vec(f).reshape(-1, 1), p)
    if x is None:
        raise ComplexError("map does not lift")
    vec = em.matmul(HP.cycles, x[: HP.cycles.shape[1]], p)[:, 0]
    return HP.to_map(vec)


@dataclass
class Truncation:
    """``low -> C -> high -> suspend(low, 1)`` with ``low`` in degrees ``<= -1`` and ``high`` in ``>= 0``."""

    low: Complex
    high: Complex
    to_c: ChainMap
    from_c: ChainMap


def _module_truncations(C: Complex, k: int):
    """Smart truncations ``tau^{<= k-1} C`` and ``tau^{>= k} C`` as module complexes."""
    A = C.algebra
    p = A.p
    Zk, zinc = kernel(C.diff(k - 1))
    low_terms = {j: X for j, X in C.terms.items() if j < k - 1}
    low_terms[k - 1] = Zk
    low_diffs = {j: d for j, d in C.diffs.items() if j < k - 2}
    if k - 2 in C.terms:
        d = C.diff(k - 2)
        mats = [em.coordinates(zinc.mats[v], d.mats[v], p) if zinc.mats[v].shape[1] else em.zeros(0, d.mats[v].shape[1]) for v in range(A.num_vertices)]
        low_diffs[k - 2] = ModuleMap(C.term(k - 2), Zk, mats)
    low = Complex(A, low_terms, low_diffs)
    to_c = ChainMap(low, C, {j: (zinc if j == k - 1 else identity_map(C.term(j))) for j in low.degrees})
    Q, q = cokernel(C.diff(k - 1))
    high_terms = {j: X for j, X in C.terms.items() if j > k}
    high_terms[k] = Q
    high_diffs = {j: d for j, d in C.diffs.items() if j > k}
    if k + 1 in C.terms:
        d = C.diff(k)
        # induced Q -> C^{k+1}: solve M q = d vertexwise
        mats = []
        for v in range(A.num_vertices):
            sol, _ = em.solve(q.mats[v].T.copy(), d.mats[v].T.copy(), p) if q.mats[v].size else (em.zeros(Q.dims[v], C.term(k + 1).dims[v]), None)
            mats.append(sol.T.copy())
        high_diffs[k] = ModuleMap(Q, C.term(k + 1), mats)
    high = Complex(A, high_terms, high_diffs)
    from_c = ChainMap(C, high, {j: (q if j == k else identity_map(C.term(j))) for j in high.degrees})
    return low, high, to_c, from_c


def truncate(C: Complex, k: int = 0) -> Truncation:
    """Standard truncation triangle at ``k`` with perfect replacements of both ends."""
    low_m, high_m, to_c, from_c = _module_truncations(C, k)
    low, ql = resolve_complex(low_m)
    high, qh = resolve_complex(high_m)
    if not C.is_perfect():
        raise ComplexError("truncate expects a perfect complex")
    i = ChainMap(low, C, {j: to_c.at(j) @ ql.at(j) for j in low.degrees if j in C.terms})
    pmap = lift_along_quasi_iso(from_c, qh)
    return Truncation(low, high, i, pmap)


def truncate_geq0(C: Complex) -> Complex:
    return truncate(C, 0).high


def truncate_leq(C: Complex, k: int = -1) -> Complex:
    return truncate(C, k + 1).low


def isomorphic_in_d(f: ChainMap) -> bool:
    """``f`` is an isomorphism in the derived category (its cone is acyclic)."""
    return is_acyclic(cone(f).cone)
