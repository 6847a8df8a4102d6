"""The (n+2)-angulated category ``C = add{Sigma^{in} M}`` inside the derived category.

An object is a multiset of pairs ``(m, i)`` standing for ``Sigma^{in} m``
with ``m`` a registry index in ``M``.  Everything is computed on perfect
complexes: ``(m, i)`` is realized as ``suspend(resolve(m), i * n)``.
Angles are built by the standard tower: cone, minimal left C-envelope,
cone again, until the last cone already lies in C.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product

import numpy as np

from . import exactmat as em
from .algebra import PathAlgebra
from .derived import (
    ChainMap,
    Complex,
    HomD,
    cone,
    direct_sum_complex,
    hom_d,
    identity_chain,
    is_acyclic,
    resolve,
    suspend,
    suspend_map,
    zero_chain,
)
from .modcat import ext, hom_dim, projective_dimension, registry

CObject = tuple  # tuple of (index, shift) pairs, sorted


class AngleError(RuntimeError):
    pass


class PreconditionError(ValueError):
    pass


def cobj(*pairs) -> CObject:
    return tuple(sorted(pairs))


def sigma_n(x: CObject, k: int = 1) -> CObject:
    """``Sigma^{kn}`` on objects."""
    return tuple(sorted((m, i + k) for m, i in x))


@dataclass(frozen=True)
class CSubcat:
    """``add`` of ``objects`` together with every ``(m, i)`` with ``i >= tail_from``."""

    objects: frozenset = frozenset()
    tail_from: int | None = None

    def contains(self, pair) -> bool:
        m, i = pair
        return pair in self.objects or (self.tail_from is not None and i >= self.tail_from)

    def contains_object(self, x: CObject) -> bool:
        return all(self.contains(p) for p in x)

    def in_window(self, M, lo: int, hi: int) -> list[tuple[int, int]]:
        return [(m, i) for i in range(lo, hi + 1) for m in sorted(M) if self.contains((m, i))]


@dataclass
class HomC:
    kind: str  # "Hom", "Ext^n" or "zero"
    dim: int


@dataclass
class Envelope:
    source: Complex
    target: CObject
    complex: Complex
    map: ChainMap


@dataclass
class NAngle:
    """``objects[0] -> objects[1] -> ... -> objects[n+1] -> Sigma^n objects[0]``.

    ``complexes`` realize the objects (the last inner term is the final
    cone, isomorphic to ``objects[n+1]``), ``maps`` are the consecutive
    chain maps and ``connecting`` is the map into ``Sigma^n`` of the first term.
    """

    objects: list[CObject]
    complexes: list[Complex]
    maps: list[ChainMap]
    connecting: ChainMap

    def inner(self) -> list[CObject]:
        return self.objects[1:-1]


class AngulatedCategory:
    """Caches realizations and Hom spaces for ``C(A)`` with cluster tilting ``M``."""

    def __init__(self, A: PathAlgebra, M):
        self.algebra = A
        self.n = A.n
        self.M = sorted(set(M))
        self.reg = registry(A)
        self._real: dict = {}
        self._homs: dict = {}
        self._sums: dict = {}
        self._pd = {m: projective_dimension(self.reg.module(m)) for m in self.M}
        self._lock = threading.Lock()

    # realizations -----------------------------------------------------------
    def realize_pair(self, m: int, i: int) -> Complex:
        key = (m, i)
        C = self._real.get(key)
        if C is None:
            base = self._real.get((m, 0))
            if base is None:
                base = resolve(self.reg.module(m))
                self._real[(m, 0)] = base
            C = base if i == 0 else suspend(base, i * self.n)
            self._real[key] = C
        return C

    def realize(self, x: CObject) -> tuple[Complex, list[ChainMap], list[ChainMap]]:
        """Realization of ``x`` with its summand injections and projections."""
        x = tuple(x)
        out = self._sums.get(x)
        if out is None:
            parts = [self.realize_pair(m, i) for m, i in x]
            if len(parts) == 1:
                C = parts[0]
                out = (C, [identity_chain(C)], [identity_chain(C)])
            else:
                out = direct_sum_complex(parts, self.algebra)
            self._sums[x] = out
        return out

    def hom_pairs(self, a, b) -> HomD:
        key = (a, b)
        H = self._homs.get(key)
        if H is None:
            H = hom_d(self.realize_pair(*a), self.realize_pair(*b))
            self._homs[key] = H
        return H

    # Hom in C -----------------------------------------------------------------
    def hom_C(self, a, b) -> HomC:
        (x, i), (y, j) = a, b
        if j == i:
            return HomC("Hom", hom_dim(self.reg.module(x), self.reg.module(y)))
        if j == i + 1:
            return HomC("Ext^n", ext(self.n, self.reg.module(x), self.reg.module(y)).dim)
        return HomC("zero", 0)

    def label(self, pair) -> str:
        m, i = pair
        lab = self.reg.label(m)
        return lab if i == 0 else f"S^{i}({lab})"

    def label_object(self, x: CObject) -> str:
        if not x:
            return "0"
        return " + ".join(self.label(p) for p in x)

    # candidate shifts for maps out of / into a complex ---------------------------------
    def _shift_range_out(self, d: Complex) -> range:
        """Shifts ``i`` with ``Sigma^{in} m`` sharing a degree with ``d``."""
        if d.is_zero():
            return range(0)
        n = self.n
        pd = max(self._pd.values())
        lo = math.ceil((-d.hi - pd) / n)
        hi = math.floor(-d.lo / n)
        return range(lo, hi + 1)

    # envelopes and covers --------------------------------------------------------------
    def minimal_envelope(self, d: Complex) -> Envelope:
        """Minimal left C-approximation ``d -> c``."""
        comps, pairs, homs = [], [], {}
        for i in self._shift_range_out(d):
            for m in self.M:
                H = hom_d(d, self.realize_pair(m, i))
                if H.dim:
                    homs[(m, i)] = H
                for f in H.basis():
                    comps.append(f)
                    pairs.append((m, i))

        def gens(j, k):
            Hj = homs[pairs[j]]
            Rj = self.realize_pair(*pairs[j])
            return [Hj.coords(_retarget(h, Rj) @ comps[k]) for h in self.hom_pairs(pairs[k], pairs[j]).basis()]

        keep = self._strip(comps, pairs, homs, gens)
        return self._assemble_env(d, [pairs[j] for j in keep], [comps[j] for j in keep])

    def _strip(self, comps, pairs, homs, gens) -> list[int]:
        """Indices surviving a single greedy pass; ``gens(j, k)`` spans the part of ``j`` through ``k``.

        One pass suffices: a component dropped because it factors through
        others still factors through whatever survives them.
        """
        p = self.algebra.p
        keep = list(range(len(comps)))
        for j in reversed(range(len(comps))):
            v = homs[pairs[j]].coords(comps[j])
            cols = [g for k in keep if k != j for g in gens(j, k)]
            if not np.any(v) or (cols and em.in_span(np.column_stack(cols), v, p)):
                keep.remove(j)
        return keep

    def _assemble_env(self, d, pairs, comps) -> Envelope:
        order = sorted(range(len(pairs)), key=lambda k: pairs[k])
        pairs = [pairs[k] for k in order]
        comps = [comps[k] for k in order]
        target = tuple(pairs)
        if not pairs:
            Z = Complex(self.algebra)
            return Envelope(d, (), Z, zero_chain(d, Z))
        E, injs, _ = self.realize(target)
        acc = None
        for inj, f in zip(injs, comps):
            g = _compose(inj, f, d, E)
            acc = g if acc is None else acc + g
        return Envelope(d, target, E, acc)

    def right_approx(self, X: CSubcat, c: CObject, window: tuple[int, int]):
        """Minimal right X-approximation of ``c`` (pairs, components, assembled map)."""
        C, _, _ = self.realize(c)
        shifts = sorted({i for _, i in c} | {i - 1 for _, i in c})
        comps, pairs, homs = [], [], {}
        for i in shifts:
            for m in self.M:
                if not X.contains((m, i)):
                    continue
                H = hom_d(self.realize_pair(m, i), C)
                if H.dim:
                    homs[(m, i)] = H
                for f in H.basis():
                    comps.append(f)
                    pairs.append((m, i))

        def gens(j, k):
            return [homs[pairs[j]].coords(comps[k] @ h) for h in self.hom_pairs(pairs[j], pairs[k]).basis()]

        keep = self._strip(comps, pairs, homs, gens)
        pairs = [pairs[j] for j in keep]
        comps = [comps[j] for j in keep]
        order = sorted(range(len(pairs)), key=lambda k: pairs[k])
        pairs = [pairs[k] for k in order]
        comps = [comps[k] for k in order]
        if not pairs:
            Z = Complex(self.algebra)
            return (), Z, zero_chain(Z, C)
        S, _, projs = self.realize(tuple(pairs))
        acc = None
        for pr, f in zip(projs, comps):
            g = ChainMap(S, C, {k: f.at(k) @ pr.at(k) for k in S.degrees if k in C.terms})
            acc = g if acc is None else acc + g
        return tuple(pairs), S, acc

    # angles ---------------------------------------------------------------------------
    def tower(self, f: ChainMap, first: CObject, second: CObject) -> NAngle:
        """Complete ``f: first -> second`` to an (n+2)-angle."""
        n = self.n
        tri = cone(f)
        objects = [first, second]
        complexes = [f.source, f.target]
        maps = [f]
        w, conn, g = tri.cone, tri.h, tri.g
        for _ in range(1, n):
            env = self.minimal_envelope(w)
            objects.append(env.target)
            complexes.append(env.complex)
            maps.append(_compose(env.map, g, g.source, env.complex))
            tri = cone(env.map)
            # connecting maps compose to w^{k+1} -> Sigma^{k+1} x^0
            conn = _compose(suspend_map(conn, 1), tri.h, tri.cone, None)
            w, g = tri.cone, tri.g
        env = self.minimal_envelope(w)
        if not is_acyclic(cone(env.map).cone):
            raise AngleError("final envelope is not an isomorphism")
        objects.append(env.target)
        complexes.append(w)
        maps.append(g)
        return NAngle(objects, complexes, maps, conn)

    def complete_angle(self, x2: CObject, x1: CObject, delta: ChainMap) -> NAngle:
        """Angle ``x1 -> c^1 -> ... -> c^n -> x2 -> Sigma^n x1`` for ``delta: x2 -> Sigma^n x1``."""
        f = suspend_map(delta, -self.n)
        X1, _, _ = self.realize(x1)
        f = ChainMap(f.source, X1, {k: g for k, g in f.maps.items() if k in X1.terms})
        ang = self.tower(f, sigma_n(x2, -1), x1)
        # rotate: drop Sigma^{-n} x2 in front, append x2 at the end
        objs = ang.objects[1:] + [x2]
        return NAngle(objs, ang.complexes[1:], ang.maps[1:], delta)

    def delta_space(self, x2: CObject, x1: CObject):
        """Block description of ``C(x2, Sigma^n x1)``: list of (row, col, HomD)."""
        blocks = []
        for r, a in enumerate(x2):
            for c, b in enumerate(x1):
                b1 = (b[0], b[1] + 1)
                if b1[1] not in (a[1], a[1] + 1):
                    continue
                H = self.hom_pairs(a, b1)
                if H.dim:
                    blocks.append((r, c, H))
        return blocks

    def delta_from_coeffs(self, x2: CObject, x1: CObject, blocks, coeffs) -> ChainMap:
        S2, _, pr2 = self.realize(x2)
        S1s, inj1, _ = self.realize(sigma_n(x1, 1))
        acc = zero_chain(S2, S1s)
        pos = 0
        for r, c, H in blocks:
            v = np.asarray(coeffs[pos : pos + H.dim], dtype=np.int64)
            pos += H.dim
            if not np.any(v):
                continue
            g = H.element(v)
            term = _compose(inj1[c], _compose(g, pr2[r], S2, None), S2, S1s)
            acc = _add(acc, term)
        return acc


# helpers ---------------------------------------------------------------------------


def _retarget(f: ChainMap, target: Complex) -> ChainMap:
    return ChainMap(f.source, target, dict(f.maps))


def _compose(g: ChainMap, f: ChainMap, source: Complex | None, target: Complex | None) -> ChainMap:
    """``g . f`` with explicit ends (complexes with equal content may be distinct objects)."""
    src = f.source if source is None else source
    tgt = g.target if target is None else target
    maps = {}
    for k in src.degrees:
        if k in tgt.terms and k in f.maps and k in g.maps:
            maps[k] = g.maps[k] @ f.maps[k]
    return ChainMap(src, tgt, maps)


def _add(f: ChainMap, g: ChainMap) -> ChainMap:
    maps = dict(f.maps)
    for k, h in g.maps.items():
        maps[k] = maps[k] + h if k in maps else h
    return ChainMap(f.source, f.target, maps)


def _multisets(objs, cap: int):
    for r in range(1, cap + 1):
        yield from combinations_with_replacement(objs, r)


# deciders ----------------------------------------------------------------------------


@dataclass
class LeftClosedResult:
    left_closed: bool
    closed: bool
    left_witness: NAngle | None = None
    closed_witness: NAngle | None = None
    scope: str = "bounded-scope"
    caps: dict = field(default_factory=dict)


def _nonzero_vectors(total: int, p: int, scalar_reduction: bool):
    if scalar_reduction:
        yield from em.projective_points(total, p)
        return
    for v in product(range(p), repeat=total):
        if any(v):
            yield np.array(v, dtype=np.int64)


def left_closed_test(
    cat: AngulatedCategory,
    X: CSubcat,
    mult_cap: int = 2,
    window=(-2, 2),
    stop_early: bool = False,
    scalar_reduction: bool = True,
) -> LeftClosedResult:
    """Complete every ``delta: x'' -> Sigma^n x'`` between capped X-objects with minimal envelopes.

    ``delta`` runs over nonzero elements up to scalar whose blocks leave no
    summand of ``x'`` or ``x''`` untouched; a summand met only by zero
    blocks splits off a trivial angle that cannot affect the verdict.
    """
    p = cat.algebra.p
    objs = X.in_window(cat.M, *window)
    res = LeftClosedResult(True, True, caps={"multiplicity": mult_cap, "window": list(window)})
    for x2 in _multisets(objs, mult_cap):
        for x1 in _multisets(objs, mult_cap):
            blocks = cat.delta_space(x2, x1)
            rows = {r for r, _, _ in blocks}
            cols = {c for _, c, _ in blocks}
            if len(rows) < len(x2) or len(cols) < len(x1):
                continue
            dims = [H.dim for _, _, H in blocks]
            total = sum(dims)
            for v in _nonzero_vectors(total, p, scalar_reduction):
                pos = 0
                touched_r, touched_c = set(), set()
                for (r, c, H), dm in zip(blocks, dims):
                    if np.any(v[pos : pos + dm]):
                        touched_r.add(r)
                        touched_c.add(c)
                    pos += dm
                if len(touched_r) < len(x2) or len(touched_c) < len(x1):
                    continue
                delta = cat.delta_from_coeffs(x2, x1, blocks, v)
                ang = cat.complete_angle(x2, x1, delta)
                inner = ang.inner()
                if res.left_closed and not X.contains_object(inner[0]):
                    res.left_closed, res.left_witness = False, ang
                if res.closed and not all(X.contains_object(c) for c in inner):
                    res.closed, res.closed_witness = False, ang
                if stop_early and not res.left_closed:
                    return res
    return res


def closed_under_n_extensions_test(cat: AngulatedCategory, X: CSubcat, mult_cap: int = 2, window=(-2, 2)) -> bool:
    return left_closed_test(cat, X, mult_cap, window).closed


@dataclass
class AngulatedTorsionResult:
    ok: bool
    witness: dict | None = None
    scope: str = "window-scope"


def _cover_angle(cat: AngulatedCategory, X: CSubcat, c: CObject, window):
    pairs, S, xi = cat.right_approx(X, c, window)
    if not pairs:
        return pairs, None
    ang = cat.tower(xi, tuple(pairs), c)
    return pairs, ang


def torsion_test_angulated(cat: AngulatedCategory, X: CSubcat, window=(-2, 2)) -> AngulatedTorsionResult:
    """For every indecomposable ``c`` in the window: cover, complete, and check ``C(x~, phi) = 0``."""
    test_objs = X.in_window(cat.M, window[0] - 1, window[1] + 1)
    for i in range(window[0], window[1] + 1):
        for m in cat.M:
            c = ((m, i),)
            if X.contains((m, i)):
                continue
            pairs, ang = _cover_angle(cat, X, c, window)
            if ang is None:
                continue
            yn = ang.complexes[-1]
            phi = ang.connecting
            target = phi.target
            for xt in test_objs:
                R = cat.realize_pair(*xt)
                H = hom_d(R, yn)
                if H.dim == 0:
                    continue
                Ht = hom_d(R, target)
                if Ht.dim == 0:
                    continue
                for h in H.basis():
                    if not Ht.is_null(_compose(phi, h, R, target)):
                        return AngulatedTorsionResult(False, {"object": cat.label((m, i)), "test": cat.label(xt)})
    return AngulatedTorsionResult(True)


def wakamatsu_check(
    cat: AngulatedCategory, X: CSubcat, c: CObject, window=(-2, 2), require_left_closed: dict | None = None
) -> bool:
    """The tail ``y^1 -> ... -> y^n`` of the completed X-cover of ``c`` is X-exact.

    Exactness of ``0 -> C(x~, y^1) -> ... -> C(x~, y^n) -> 0`` is checked by
    ranks of the induced maps on homotopy classes.  With
    ``require_left_closed`` (keyword arguments for :func:`left_closed_test`)
    the hypothesis is checked first and :class:`PreconditionError` raised
    when it fails.
    """
    if require_left_closed is not None and not left_closed_test(cat, X, stop_early=True, **require_left_closed).left_closed:
        raise PreconditionError("subcategory is not left closed under n-extensions")
    pairs, ang = _cover_angle(cat, X, c, window)
    if ang is None:
        return True
    p = cat.algebra.p
    ys = ang.complexes[2:]
    ymaps = ang.maps[2:]
    for xt in X.in_window(cat.M, window[0] - 1, window[1] + 1):
        R = cat.realize_pair(*xt)
        Hs = [hom_d(R, Y) for Y in ys]
        ranks = [0]
        for H0, H1, g in zip(Hs, Hs[1:], ymaps):
            if H0.dim == 0 or H1.dim == 0:
                ranks.append(0)
                continue
            cols = [H1.coords(_compose(g, h, R, H1.target)) for h in H0.basis()]
            ranks.append(em.rank(np.column_stack(cols), p))
        ranks.append(0)
        for k, H in enumerate(Hs):
            if H.dim != ranks[k] + ranks[k + 1]:
                return False
    return True


# aisles and the bijection ---------------------------------------------------------------


def make_XU(U) -> CSubcat:
    return CSubcat(frozenset((u, 0) for u in U), tail_from=1)


def is_intermediate(cat: AngulatedCategory, X: CSubcat) -> bool:
    """``C^{<= -n} <= X <= C^{<= 0}``: contains every shift >= 1 and nothing below shift 0."""
    if X.tail_from is None or X.tail_from > 1:
        if not all(X.contains((m, 1)) for m in cat.M):
            return False
        if X.tail_from is None or X.tail_from > 2:
            return False
    if X.tail_from is not None and X.tail_from < 0:
        return False
    return all(i >= 0 for _, i in X.objects)


def torsion_from_aisle(cat: AngulatedCategory, X: CSubcat) -> list[int]:
    if not is_intermediate(cat, X):
        raise ValueError("subcategory is not intermediate")
    return [m for m in cat.M if X.contains((m, 0))]


def is_aisle(cat: AngulatedCategory, X: CSubcat, window=(-2, 2)) -> bool:
    stable = all(X.contains((m, i + 1)) for m, i in X.objects)
    return stable and torsion_test_angulated(cat, X, window).ok


def enumerate_aisles(cat: AngulatedCategory, window=(-2, 2)) -> list[tuple[int, ...]]:
    """Shift-zero slices ``U`` for which ``make_XU(U)`` is an aisle."""
    out = []
    for r in range(len(cat.M) + 1):
        for U in combinations_with_replacement(cat.M, r):
            if len(set(U)) != r:
                continue
            if is_aisle(cat, make_XU(U), window):
                out.append(tuple(U))
    return sorted(out)
