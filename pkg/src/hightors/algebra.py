"""Bound quiver algebras and their finite dimensional representations.

Conventions
-----------
Vertices are numbered from 0 internally.  A path is a tuple of arrow
indices in the order they are traversed.  Left modules are
representations: arrow ``a: s -> t`` acts by a matrix of shape
``(dim_t, dim_s)``, so the indecomposable projective ``P_v`` is spanned by
the paths starting at ``v``.  The product ``x * y`` in the algebra means
"traverse ``y``, then ``x``"; the helper :meth:`PathAlgebra.concat` takes its
arguments in traversal order instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
import numpy as np

from . import exactmat as em


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


Term = tuple[int, tuple[int, ...]]  # (coefficient, path)


@dataclass(frozen=True)
class QuiverPresentation:
    """Quiver with relations, the field characteristic and the fixed integer ``n``."""

    num_vertices: int
    arrows: tuple[Arrow, ...]
    relations: tuple[tuple[Term, ...], ...] = ()
    p: int = 5
    n: int = 1
    vertex_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not em.is_prime(self.p):
            raise AlgebraError(f"characteristic {self.p} is not prime")
        if self.n < 1:
            raise AlgebraError("n must be at least 1")
        for a in self.arrows:
            if not (0 <= a.source < self.num_vertices and 0 <= a.target < self.num_vertices):
                raise AlgebraError(f"arrow {a.name} has a dangling endpoint")
        for rel in self.relations:
            ends = set()
            for _, path in rel:
                if len(path) < 2:
                    raise AlgebraError("relations must lie in the square of the arrow ideal")
                for x, y in zip(path, path[1:]):
                    if self.arrows[x].target != self.arrows[y].source:
                        raise AlgebraError(f"path {self.path_name(path)} is not composable")
                ends.add((self.arrows[path[0]].source, self.arrows[path[-1]].target))
            if len(ends) > 1:
                raise AlgebraError("relation terms are not parallel")

    def label(self, v: int) -> str:
        return self.vertex_labels[v] if self.vertex_labels else str(v + 1)

    def path_name(self, path: tuple[int, ...]) -> str:
        if not path:
            return "e"
        return ".".join(self.arrows[a].name for a in reversed(path))

    def opposite(self) -> "QuiverPresentation":
        arrows = tuple(Arrow(a.name + "*", a.target, a.source) for a in self.arrows)
        rels = tuple(tuple((c, tuple(reversed(path))) for c, path in rel) for rel in self.relations)
        return QuiverPresentation(self.num_vertices, arrows, rels, self.p, self.n, self.vertex_labels)


@dataclass(frozen=True)
class BasisPath:
    source: int
    target: int
    arrows: tuple[int, ...]


class PathAlgebra:
    """A finite dimensional quotient ``kQ/I`` with a basis of irreducible paths.

    The basis consists of the paths that are not leading terms of the
    ideal, where paths are compared longest first and then lexicographically
    on arrow indices.  Construction fails if no power of the arrow ideal
    falls into ``I`` within ``length_cap``.
    """

    def __init__(self, pres: QuiverPresentation, length_cap: int = 12):
        self.pres = pres
        self.p = pres.p
        self.n = pres.n
        self.num_vertices = pres.num_vertices
        self.arrows = pres.arrows
        self._opposite: PathAlgebra | None = None
        self._is_op = False
        self._build(length_cap)

    # construction -------------------------------------------------------
    def _paths_up_to(self, L: int) -> list[BasisPath]:
        out = [BasisPath(v, v, ()) for v in range(self.num_vertices)]
        frontier = list(out)
        for _ in range(L):
            nxt = []
            for path in frontier:
                for ai, a in enumerate(self.arrows):
                    if a.source == path.target:
                        nxt.append(BasisPath(path.source, a.target, path.arrows + (ai,)))
            out.extend(nxt)
            frontier = nxt
        return out

    def _build(self, cap: int) -> None:
        p = self.p
        rels = self.pres.relations
        start = max([1] + [len(path) for rel in rels for _, path in rel])
        for L in range(start, cap + 1):
            paths = self._paths_up_to(L)
            # leading-term order: longest first, then larger arrow tuples first
            paths.sort(key=lambda q: (-len(q.arrows), tuple(-a for a in q.arrows), q.source))
            index = {(q.source, q.arrows): i for i, q in enumerate(paths)}
            rows = []
            for rel in rels:
                src = self.arrows[rel[0][1][0]].source
                tgt = self.arrows[rel[0][1][-1]].target
                for pre in paths:
                    if pre.target != src:
                        continue
                    for suf in paths:
                        if suf.source != tgt:
                            continue
                        row = np.zeros(len(paths), dtype=np.int64)
                        hit = False
                        for c, rp in rel:
                            full = pre.arrows + rp + suf.arrows
                            if len(full) <= L:
                                row[index[(pre.source, full)]] += c
                                hit = True
                        if hit:
                            rows.append(row % p)
            if rows:
                R, piv = em.rref(np.array(rows), p)
                R = R[: len(piv)]
            else:
                R, piv = em.zeros(0, len(paths)), []
            pivset = set(piv)
            top_len = [i for i, q in enumerate(paths) if len(q.arrows) == L]
            if all(i in pivset for i in top_len):
                self._finish(paths, R, piv)
                return
        raise AlgebraError(
            f"ideal is not admissible or algebra too large: paths of length {cap} survive"
        )

    def _finish(self, paths: list[BasisPath], R: np.ndarray, piv: list[int]) -> None:
        pivset = set(piv)
        free = [i for i in range(len(paths)) if i not in pivset]
        # basis ordered by source, then length, then arrows
        free.sort(key=lambda i: (paths[i].source, len(paths[i].arrows), paths[i].arrows))
        self.basis: list[BasisPath] = [paths[i] for i in free]
        pos = {i: k for k, i in enumerate(free)}
        self._path_index = {(q.source, q.arrows): i for i, q in enumerate(paths)}
        self._nf: dict[int, np.ndarray] = {}
        dim = len(free)
        for i in range(len(paths)):
            v = np.zeros(dim, dtype=np.int64)
            if i in pos:
                v[pos[i]] = 1
            self._nf[i] = v
        for r, pc in enumerate(piv):
            v = np.zeros(dim, dtype=np.int64)
            for i in free:
                if R[r, i]:
                    v[pos[i]] = (-R[r, i]) % self.p
            self._nf[pc] = v
        self._max_len = max(len(q.arrows) for q in paths)
        self.basis_index = {(b.source, b.arrows): k for k, b in enumerate(self.basis)}

    # basic data ---------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.basis)

    def label(self, v: int) -> str:
        return self.pres.label(v)

    def normal_form(self, source: int, arrows: tuple[int, ...]) -> np.ndarray:
        """Coordinates of a path (traversal order) in the basis."""
        if self._is_op:
            orig = self._opposite
            return orig.normal_form(self._op_source(source, arrows), tuple(reversed(arrows)))
        if len(arrows) > self._max_len:
            return np.zeros(self.dim, dtype=np.int64)
        return self._nf[self._path_index[(source, arrows)]]

    def _op_source(self, source: int, arrows: tuple[int, ...]) -> int:
        return self.arrows[arrows[-1]].target if arrows else source

    def concat(self, i: int, j: int) -> np.ndarray:
        """Basis path ``i`` followed by basis path ``j``, in normal form."""
        return self._mult[i, j]

    @cached_property
    def _mult(self) -> np.ndarray:
        T = np.zeros((self.dim, self.dim, self.dim), dtype=np.int64)
        for i, a in enumerate(self.basis):
            for j, b in enumerate(self.basis):
                if a.target == b.source:
                    T[i, j] = self.normal_form(a.source, a.arrows + b.arrows)
        return T

    @cached_property
    def multiplication_table(self) -> np.ndarray:
        """``T[i, j]`` = coordinates of ``b_i * b_j`` (traverse ``b_j`` then ``b_i``)."""
        return np.transpose(self._mult, (1, 0, 2)).copy()

    def paths_between(self, source: int, target: int) -> list[int]:
        return self._between[(source, target)]

    @cached_property
    def _between(self) -> dict[tuple[int, int], list[int]]:
        d: dict[tuple[int, int], list[int]] = {
            (s, t): [] for s in range(self.num_vertices) for t in range(self.num_vertices)
        }
        for k, b in enumerate(self.basis):
            d[(b.source, b.target)].append(k)
        return d

    def basis_name(self, k: int) -> str:
        b = self.basis[k]
        if not b.arrows:
            return f"e{self.label(b.source)}"
        return self.pres.path_name(b.arrows)

    # opposite -----------------------------------------------------------
    def opposite(self) -> "PathAlgebra":
        """The opposite algebra, sharing basis indices with ``self`` (paths reversed)."""
        if self._opposite is None:
            op = PathAlgebra.__new__(PathAlgebra)
            op.pres = self.pres.opposite()
            op.p, op.n = self.p, self.n
            op.num_vertices = self.num_vertices
            op.arrows = op.pres.arrows
            op._opposite = self
            op._is_op = True
            op.basis = [BasisPath(b.target, b.source, tuple(reversed(b.arrows))) for b in self.basis]
            op.basis_index = {(b.source, b.arrows): k for k, b in enumerate(op.basis)}
            op._max_len = self._max_len
            self._opposite = op
        return self._opposite

    # module constructors ------------------------------------------------
    def projective(self, v: int) -> "Module":
        self._check_vertex(v)
        return projective_sum(self, (v,))

    def simple(self, v: int) -> "Module":
        self._check_vertex(v)
        dims = tuple(1 if w == v else 0 for w in range(self.num_vertices))
        return Module(self, dims, name=f"S{self.label(v)}")

    def injective(self, v: int) -> "Module":
        self._check_vertex(v)
        I = dual_module(self.opposite().projective(v))
        I.name = f"I{self.label(v)}"
        return I

    def regular(self) -> "Module":
        return projective_sum(self, tuple(range(self.num_vertices)))

    def zero_module(self) -> "Module":
        return Module(self, (0,) * self.num_vertices, tops=())

    def shared_zero(self) -> "Module":
        """A cached zero module; callers must not mutate it."""
        Z = getattr(self, "_zero", None)
        if Z is None:
            Z = self._zero = self.zero_module()
        return Z

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.num_vertices:
            raise AlgebraError(f"no vertex {v}")

    def __repr__(self) -> str:
        return f"PathAlgebra(vertices={self.num_vertices}, dim={self.dim}, p={self.p}, n={self.n})"


class Module:
    """A representation: one dimension per vertex, one matrix per arrow.

    ``tops`` is set for direct sums of indecomposable projectives built by
    :func:`projective_sum`; it lists the vertex of each summand's generator.
    """

    def __init__(self, algebra: PathAlgebra, dims, mats=None, *, tops=None, name=None, check=True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        p = algebra.p
        if mats is None:
            mats = [em.zeros(self.dims[a.target], self.dims[a.source]) for a in algebra.arrows]
        self.mats = tuple(np.ascontiguousarray(np.asarray(m, dtype=np.int64) % p) for m in mats)
        self.tops = tops
        self.name = name
        for a, m in zip(algebra.arrows, self.mats):
            if m.shape != (self.dims[a.target], self.dims[a.source]):
                raise AlgebraError(f"arrow {a.name}: matrix shape {m.shape} mismatches dimensions")
        self._act_cache: dict[int, np.ndarray] = {}
        if check:
            self.check_relations()

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.dim == 0

    def path_matrix(self, arrows: tuple[int, ...], source: int) -> np.ndarray:
        M = em.identity(self.dims[source])
        for a in arrows:
            M = em.matmul(self.mats[a], M, self.p)
        return M

    def act(self, k: int) -> np.ndarray:
        """Matrix of basis path ``k`` acting from its source space to its target space."""
        M = self._act_cache.get(k)
        if M is None:
            b = self.algebra.basis[k]
            M = self.path_matrix(b.arrows, b.source)
            self._act_cache[k] = M
        return M

    def check_relations(self) -> None:
        pres = self.algebra.pres
        for rel in pres.relations:
            src = pres.arrows[rel[0][1][0]].source
            acc = None
            for c, path in rel:
                M = self.path_matrix(path, src) * c
                acc = M if acc is None else acc + M
            if acc is not None and np.any(acc % self.p):
                raise AlgebraError("module does not satisfy the relations")

    def offsets(self) -> list[int]:
        out, s = [], 0
        for d in self.dims:
            out.append(s)
            s += d
        return out

    def __repr__(self) -> str:
        nm = f" {self.name}" if self.name else ""
        return f"<Module{nm} dims={self.dims}>"


class ModuleMap:
    """A morphism given by one matrix per vertex."""

    def __init__(self, source: Module, target: Module, mats, check: bool = False):
        self.source = source
        self.target = target
        p = source.p
        self.mats = tuple(np.ascontiguousarray(np.asarray(m, dtype=np.int64) % p) for m in mats)
        for v, m in enumerate(self.mats):
            if m.shape != (target.dims[v], source.dims[v]):
                raise AlgebraError(f"vertex {v}: matrix shape {m.shape} mismatches")
        if check and not self.is_natural():
            raise AlgebraError("map does not commute with the arrows")

    @classmethod
    def _raw(cls, source: Module, target: Module, mats) -> "ModuleMap":
        """Trusted constructor: ``mats`` are already reduced int64 arrays of the right shapes."""
        f = cls.__new__(cls)
        f.source, f.target, f.mats = source, target, tuple(mats)
        return f

    @property
    def p(self) -> int:
        return self.source.p

    def is_natural(self) -> bool:
        p = self.p
        for ai, a in enumerate(self.source.algebra.arrows):
            lhs = em.matmul(self.target.mats[ai], self.mats[a.source], p)
            rhs = em.matmul(self.mats[a.target], self.source.mats[ai], p)
            if np.any((lhs - rhs) % p):
                return False
        return True

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        if other.target is not self.source and other.target.dims != self.source.dims:
            raise AlgebraError("maps are not composable")
        p = self.p
        return ModuleMap._raw(other.source, self.target, [em.matmul(a, b, p) for a, b in zip(self.mats, other.mats)])

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        p = self.p
        return ModuleMap._raw(self.source, self.target, [(a + b) % p for a, b in zip(self.mats, other.mats)])

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        p = self.p
        return ModuleMap._raw(self.source, self.target, [(a - b) % p for a, b in zip(self.mats, other.mats)])

    def scale(self, c: int) -> "ModuleMap":
        p = self.p
        return ModuleMap._raw(self.source, self.target, [(m * c) % p for m in self.mats])

    def is_zero(self) -> bool:
        return all(not np.any(m) for m in self.mats)

    def is_injective(self) -> bool:
        return all(em.rank(m, self.p) == m.shape[1] for m in self.mats)

    def is_surjective(self) -> bool:
        return all(em.rank(m, self.p) == m.shape[0] for m in self.mats)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_injective()

    def rank(self) -> int:
        return sum(em.rank(m, self.p) for m in self.mats)

    def vec(self) -> np.ndarray:
        return np.concatenate([m.reshape(-1) for m in self.mats]) if self.mats else np.zeros(0, np.int64)

    def equals(self, other: "ModuleMap") -> bool:
        return (self - other).is_zero()

    def __repr__(self) -> str:
        return f"<ModuleMap {self.source!r} -> {self.target!r}>"


def zero_map(X: Module, Y: Module) -> ModuleMap:
    return ModuleMap._raw(X, Y, [em.zeros(Y.dims[v], X.dims[v]) for v in range(len(X.dims))])


def identity_map(X: Module) -> ModuleMap:
    return ModuleMap(X, X, [em.identity(d) for d in X.dims])


# projective sums ------------------------------------------------------------


def projective_sum(A: PathAlgebra, tops: tuple[int, ...]) -> Module:
    """``P_{tops[0]} + P_{tops[1]} + ...`` with basis, at each vertex ``w``,
    the basis paths ``tops[j] -> w`` listed summand by summand."""
    tops = tuple(tops)
    nv = A.num_vertices
    rows = {w: [(j, k) for j, t in enumerate(tops) for k in A.paths_between(t, w)] for w in range(nv)}
    dims = tuple(len(rows[w]) for w in range(nv))
    mats = []
    for ai, a in enumerate(A.arrows):
        M = em.zeros(dims[a.target], dims[a.source])
        tgt_pos = {jk: i for i, jk in enumerate(rows[a.target])}
        # basis index of the arrow itself as a path
        for col, (j, k) in enumerate(rows[a.source]):
            b = A.basis[k]
            nf = A.normal_form(b.source, b.arrows + (ai,))
            for kk in A.paths_between(tops[j], a.target):
                if nf[kk]:
                    M[tgt_pos[(j, kk)], col] = nf[kk]
        mats.append(M)
    name = None
    if len(tops) == 1:
        name = f"P{A.label(tops[0])}"
    return Module(A, dims, mats, tops=tops, name=name, check=False)


def generator_position(P: Module, j: int) -> tuple[int, int]:
    """(vertex, row) of the generator of summand ``j`` of a projective sum."""
    A = P.algebra
    v = P.tops[j]
    row = 0
    for jj, t in enumerate(P.tops):
        for k in A.paths_between(t, v):
            if jj == j and not A.basis[k].arrows:
                return v, row
            row += 1
    raise AlgebraError("generator not found")


def summand_rows(P: Module, w: int) -> list[tuple[int, int]]:
    """For a projective sum: the (summand, basis path) labelling each row at vertex ``w``."""
    A = P.algebra
    return [(j, k) for j, t in enumerate(P.tops) for k in A.paths_between(t, w)]


def map_from_generators(P: Module, Y: Module, images) -> ModuleMap:
    """The map ``P -> Y`` sending generator ``j`` to ``images[j]`` in ``Y_{tops[j]}``."""
    A = P.algebra
    mats = []
    for w in range(A.num_vertices):
        M = em.zeros(Y.dims[w], P.dims[w])
        for col, (j, k) in enumerate(summand_rows(P, w)):
            y = np.asarray(images[j], dtype=np.int64).reshape(-1)
            if y.size:
                M[:, col] = em.matmul(Y.act(k), y.reshape(-1, 1), Y.p)[:, 0]
        mats.append(M)
    return ModuleMap(P, Y, mats)


def generator_images(f: ModuleMap) -> list[np.ndarray]:
    P = f.source
    out = []
    for j in range(len(P.tops)):
        v, row = generator_position(P, j)
        out.append(f.mats[v][:, row].copy())
    return out


# submodules, quotients, sums -------------------------------------------------


def _as_cols(B, rows: int) -> np.ndarray:
    B = np.asarray(B, dtype=np.int64)
    if B.ndim == 2:
        return B
    return B.reshape(rows, -1) if rows else np.zeros((0, 0), dtype=np.int64)


def submodule(X: Module, bases) -> tuple[Module, ModuleMap]:
    """Submodule spanned at each vertex by the columns of ``bases[v]`` (independent)."""
    p = X.p
    A = X.algebra
    bases = [_as_cols(B, X.dims[v]) for v, B in enumerate(bases)]
    mats = []
    for ai, a in enumerate(A.arrows):
        img = em.matmul(X.mats[ai], bases[a.source], p)
        if bases[a.target].shape[1] == 0:
            if np.any(img):
                raise AlgebraError("subspaces are not closed under the arrows")
            mats.append(em.zeros(0, bases[a.source].shape[1]))
            continue
        C, _ = em.solve(bases[a.target], img, p)
        if C is None:
            raise AlgebraError("subspaces are not closed under the arrows")
        mats.append(C)
    U = Module(A, [B.shape[1] for B in bases], mats, check=False)
    return U, ModuleMap(U, X, bases)


def quotient(X: Module, bases) -> tuple[Module, ModuleMap]:
    """Quotient of ``X`` by the submodule spanned by ``bases``, with the projection."""
    p = X.p
    A = X.algebra
    projs, sections = [], []
    for v in range(A.num_vertices):
        B = _as_cols(bases[v], X.dims[v])
        B = em.col_basis(B, p) if B.shape[1] else B
        C = em.complement(B, p)
        full = np.hstack([B, C])
        inv = em.inverse(full, p) if full.shape[0] else em.zeros(0, 0)
        projs.append(inv[B.shape[1]:])
        sections.append(C)
    mats = []
    for ai, a in enumerate(A.arrows):
        mats.append(em.matmul(projs[a.target], em.matmul(X.mats[ai], sections[a.source], p), p))
    Q = Module(A, [pr.shape[0] for pr in projs], mats, check=False)
    return Q, ModuleMap(X, Q, projs)


def kernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    return submodule(f.source, [em.nullspace(m, f.p) for m in f.mats])


def image_bases(f: ModuleMap) -> list[np.ndarray]:
    return [em.col_basis(m, f.p) if m.size else em.zeros(m.shape[0], 0) for m in f.mats]


def image(f: ModuleMap) -> tuple[Module, ModuleMap]:
    return submodule(f.target, image_bases(f))


def cokernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    return quotient(f.target, image_bases(f))


@dataclass
class DirectSum:
    module: Module
    injections: list[ModuleMap] = field(default_factory=list)
    projections: list[ModuleMap] = field(default_factory=list)


def direct_sum(mods: list[Module], algebra: PathAlgebra | None = None) -> DirectSum:
    if not mods:
        if algebra is None:
            raise AlgebraError("empty direct sum needs the algebra")
        return DirectSum(algebra.zero_module())
    A = mods[0].algebra
    nv = A.num_vertices
    dims = [sum(M.dims[v] for M in mods) for v in range(nv)]
    mats = []
    for ai, a in enumerate(A.arrows):
        M = em.zeros(dims[a.target], dims[a.source])
        r = c = 0
        for X in mods:
            M[r : r + X.dims[a.target], c : c + X.dims[a.source]] = X.mats[ai]
            r += X.dims[a.target]
            c += X.dims[a.source]
        mats.append(M)
    tops = None
    if all(X.tops is not None for X in mods):
        tops = tuple(t for X in mods for t in X.tops)
    S = Module(A, dims, mats, tops=tops, check=False)
    injs, projs = [], []
    off = [0] * nv
    for X in mods:
        im, pm = [], []
        for v in range(nv):
            I = em.zeros(dims[v], X.dims[v])
            I[off[v] : off[v] + X.dims[v]] = em.identity(X.dims[v])
            im.append(I)
            pm.append(I.T.copy())
            off[v] += X.dims[v]
        injs.append(ModuleMap(X, S, im))
        projs.append(ModuleMap(S, X, pm))
    return DirectSum(S, injs, projs)


def block_map(source: DirectSum, target: DirectSum, blocks) -> ModuleMap:
    """Assemble ``sum_ij inj_i . blocks[i][j] . proj_j`` (``blocks[i][j]``: source j -> target i)."""
    acc = zero_map(source.module, target.module)
    for i, row in enumerate(blocks):
        for j, b in enumerate(row):
            if b is not None:
                acc = acc + target.injections[i] @ b @ source.projections[j]
    return acc


def row_map(maps: list[ModuleMap], target: Module) -> tuple[Module, ModuleMap]:
    """``(f_1, ..., f_k): s_1 + ... + s_k -> target``."""
    if not maps:
        Z = target.algebra.zero_module()
        return Z, zero_map(Z, target)
    ds = direct_sum([f.source for f in maps])
    acc = zero_map(ds.module, target)
    for f, pr in zip(maps, ds.projections):
        acc = acc + f @ pr
    return ds.module, acc


def column_map(maps: list[ModuleMap], source: Module) -> tuple[Module, ModuleMap]:
    """``(f_1, ..., f_k)^T: source -> t_1 + ... + t_k``."""
    if not maps:
        Z = source.algebra.zero_module()
        return Z, zero_map(source, Z)
    ds = direct_sum([f.target for f in maps])
    acc = zero_map(source, ds.module)
    for f, inj in zip(maps, ds.injections):
        acc = acc + inj @ f
    return ds.module, acc


# duality ---------------------------------------------------------------------


def dual_module(X: Module) -> Module:
    """k-linear dual ``D X``, a module over the opposite algebra."""
    op = X.algebra.opposite()
    name = f"D({X.name})" if X.name else None
    return Module(op, X.dims, [m.T.copy() for m in X.mats], name=name, check=False)


def dual_map(f: ModuleMap) -> ModuleMap:
    """``D f: D Y -> D X`` for ``f: X -> Y``."""
    return ModuleMap(dual_module(f.target), dual_module(f.source), [m.T.copy() for m in f.mats])


def opposite_algebra(A: PathAlgebra) -> PathAlgebra:
    return A.opposite()


def dual_dual_iso(X: Module) -> ModuleMap:
    """The identification ``X -> D D X`` (identity matrices in our bases)."""
    DDX = dual_module(dual_module(X))
    return ModuleMap(X, DDX, [em.identity(d) for d in X.dims])


def make_algebra(num_vertices: int, arrows, relations=(), p: int = 5, n: int = 1, labels=None, length_cap: int = 12) -> PathAlgebra:
    """Convenience constructor.

    ``arrows`` is a list of ``(name, source, target)`` with 0-based vertices;
    each relation is a list of ``(coefficient, [arrow names in traversal order])``.
    """
    arr = tuple(Arrow(*a) for a in arrows)
    names = {a.name: i for i, a in enumerate(arr)}
    rels = tuple(
        tuple((c % p, tuple(names[x] for x in path)) for c, path in rel) for rel in relations
    )
    pres = QuiverPresentation(num_vertices, arr, rels, p, n, tuple(labels) if labels else None)
    return PathAlgebra(pres, length_cap)

