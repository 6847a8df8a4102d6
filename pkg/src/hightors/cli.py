"""Command-line interface: algebra description files, analysis commands and reports.

File grammar (one statement per line, ``#`` starts a comment)::

    char 5
    n 2
    vertices 3
    arrow a 1 2
    arrow b 2 3
    relation 1*b.a
    module_M 2/3=0,1,1

Vertices are 1-based.  A path ``b.a`` means ``a`` first, then ``b``.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from pathlib import Path

from .algebra import AlgebraError, Arrow, PathAlgebra, QuiverPresentation
from .modcat import CapError, SchurError, global_dimension, indecomposables, registry, set_seed

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_SCOPE = 0, 1, 2, 3

DEFAULT_CAPS = {"multiplicity": 2, "window": 2, "quotient_dim": 8}


class SpecError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class PreconditionFailure(ValueError):
    pass


# parsing ----------------------------------------------------------------------------

_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*\s*)?([A-Za-z_]\w*(?:\.[A-Za-z_]\w*)*)\s*")


@dataclass
class AlgebraSpec:
    name: str
    p: int
    n: int
    num_vertices: int
    arrows: list[tuple[str, int, int]]
    relations: list[list[tuple[int, list[str]]]]
    module_M: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def build(self, char: int | None = None) -> PathAlgebra:
        p = self.p if char is None else char
        arr = tuple(Arrow(nm, s, t) for nm, s, t in self.arrows)
        idx = {a.name: i for i, a in enumerate(arr)}
        rels = tuple(tuple((c % p, tuple(idx[x] for x in path)) for c, path in rel) for rel in self.relations)
        try:
            pres = QuiverPresentation(self.num_vertices, arr, rels, p, self.n, None)
            return PathAlgebra(pres)
        except AlgebraError as exc:
            raise SpecError(str(exc)) from exc


def _parse_relation(body: str, arrows: dict, lineno: int) -> list[tuple[int, list[str]]]:
    terms, pos = [], 0
    while pos < len(body):
        m = _TERM.match(body, pos)
        if not m or m.end() == pos:
            raise SpecError(f"cannot parse relation near {body[pos:]!r}", lineno)
        if terms and not m.group(1):
            raise SpecError("terms must be separated by + or -", lineno)
        sign = -1 if m.group(1) == "-" else 1
        coef = sign * int(m.group(2) or 1)
        names = m.group(3).split(".")[::-1]  # traversal order
        for nm in names:
            if nm not in arrows:
                raise SpecError(f"unknown arrow {nm!r}", lineno)
        for a, b in zip(names, names[1:]):
            if arrows[a][1] != arrows[b][0]:
                raise SpecError(f"path {m.group(3)} is not composable", lineno)
        terms.append((coef, names))
        pos = m.end()
    if not terms:
        raise SpecError("empty relation", lineno)
    ends = {(arrows[t[1][0]][0], arrows[t[1][-1]][1]) for t in terms}
    if len(ends) != 1:
        raise SpecError("relation terms are not parallel", lineno)
    return terms


def parse_spec(text: str, name: str = "<string>") -> AlgebraSpec:
    """Parse the line-oriented algebra description format."""
    p, n, nv = 5, 1, None
    arrows: dict[str, tuple[int, int]] = {}
    order: list[str] = []
    relations, mods = [], {}
    pending = []
    where: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "char":
                p = int(rest)
            elif key == "n":
                n = int(rest)
            elif key == "vertices":
                nv = int(rest)
            elif key == "arrow":
                nm, s, t = rest.split()
                if nm in arrows:
                    raise SpecError(f"duplicate arrow {nm!r}", lineno)
                arrows[nm] = (int(s) - 1, int(t) - 1)
                order.append(nm)
                where[nm] = lineno
            elif key == "relation":
                pending.append((rest, lineno))
            elif key == "module_M":
                label, _, dims = rest.partition("=")
                if not dims:
                    raise SpecError("expected module_M <label>=<dims>", lineno)
                mods[label.strip()] = tuple(int(x) for x in dims.split(","))
                where["module " + label.strip()] = lineno
            else:
                raise SpecError(f"unknown statement {key!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, SpecError):
                raise
            raise SpecError(f"malformed {key!r} statement", lineno) from exc
    if nv is None:
        raise SpecError("missing 'vertices' statement")
    for nm in order:
        s, t = arrows[nm]
        if not (0 <= s < nv and 0 <= t < nv):
            raise SpecError(f"arrow {nm!r} has a dangling vertex", where[nm])
    for label, dims in mods.items():
        if len(dims) != nv:
            raise SpecError(f"module {label!r} needs {nv} dimensions", where["module " + label])
    for body, lineno in pending:
        relations.append(_parse_relation(body, arrows, lineno))
    return AlgebraSpec(name, p, n, nv, [(nm, *arrows[nm]) for nm in order], relations, mods)


def corpus() -> dict[str, AlgebraSpec]:
    """The bundled algebras, keyed by file stem."""
    out = {}
    for entry in sorted(resources.files("hightors").joinpath("corpus").iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".alg"):
            stem = entry.name[: -len(".alg")]
            out[stem] = parse_spec(entry.read_text(encoding="utf-8"), stem)
    return out


def load_spec(arg: str) -> AlgebraSpec:
    path = Path(arg)
    if path.is_file():
        return parse_spec(path.read_text(encoding="utf-8"), path.stem)
    bundled = corpus()
    if arg in bundled:
        return bundled[arg]
    raise SpecError(f"no file or corpus entry named {arg!r}")


# session ----------------------------------------------------------------------------------


class Session:
    """An algebra with its cluster tilting subcategory and the chosen caps."""

    def __init__(self, spec: AlgebraSpec, char: int | None, caps: dict):
        from .higher import cluster_tilting_subcategory

        self.spec = spec
        self.A = spec.build(char)
        self.caps = caps
        self.reg = registry(self.A)
        indecomposables(self.A)
        try:
            self.M = cluster_tilting_subcategory(self.A, spec.module_M or None)
        except ValueError as exc:
            raise PreconditionFailure(str(exc)) from exc
        self._cat = None

    @property
    def window(self) -> tuple[int, int]:
        w = int(self.caps["window"])
        return (-w, w)

    def labels(self, idx) -> list[str]:
        return [self.reg.label(i) for i in idx]

    def subset(self, text: str) -> list[int]:
        if not text.strip():
            return []
        out = []
        for lab in text.split(","):
            lab = lab.strip()
            hit = [m for m in self.M if self.reg.label(m) == lab]
            if not hit:
                raise SpecError(f"{lab!r} is not an indecomposable of M")
            out.append(hit[0])
        return sorted(set(out))

    def subsets(self):
        return [tuple(c) for r in range(len(self.M) + 1) for c in combinations(self.M, r)]

    def angulated(self):
        from .angulated import AngulatedCategory

        if self._cat is None:
            gd = global_dimension(self.A)
            if gd > self.A.n:
                raise PreconditionFailure(f"global dimension {gd} exceeds n = {self.A.n}; C(A) is not defined")
            self._cat = AngulatedCategory(self.A, self.M)
        return self._cat


# reports ----------------------------------------------------------------------------------


@dataclass
class Report:
    command: str
    algebra: str
    n: int
    char: int
    verdicts: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    caps: dict = field(default_factory=dict)
    seed: int = 0
    timings: dict | None = None

    def verdict(self, name: str, value, scope: str | None = None) -> None:
        v = {"name": name, "value": value}
        if scope:
            v["scope"] = scope
        self.verdicts.append(v)

    def to_dict(self) -> dict:
        d = {
            "command": self.command,
            "algebra": self.algebra,
            "n": self.n,
            "char": self.char,
            "verdicts": self.verdicts,
            "witnesses": self.witnesses,
            "caps": self.caps,
            "seed": self.seed,
        }
        if self.timings is not None:
            d["timings"] = self.timings
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls(**json.loads(text))

    def to_text(self) -> str:
        lines = [f"{self.command} on {self.algebra} (n={self.n}, char={self.char})"]
        width = max([len(v["name"]) for v in self.verdicts] + [1])
        for v in self.verdicts:
            tag = f"  [{v['scope']}]" if "scope" in v else ""
            lines.append(f"  {v['name']:<{width}}  {_fmt(v['value'])}{tag}")
        for w in self.witnesses:
            lines.append("  - " + ", ".join(f"{k}: {_fmt(x)}" for k, x in w.items()))
        lines.append("  caps: " + ", ".join(f"{k}={_fmt(x)}" for k, x in self.caps.items()))
        lines.append(f"  seed: {self.seed}")
        if self.timings is not None:
            lines.append("  timings: " + ", ".join(f"{k}={x:.3f}s" for k, x in self.timings.items()))
        return "\n".join(lines)

    def all_true(self) -> bool:
        return all(v["value"] is not False for v in self.verdicts)


def _fmt(x) -> str:
    if isinstance(x, list):
        return "{" + ", ".join(_fmt(y) for y in x) + "}"
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


# commands ----------------------------------------------------------------------------------


def cmd_analyze(S: Session, args, R: Report) -> None:
    from .higher import verify_n_cluster_tilting

    ind = indecomposables(S.A)
    R.verdict("gldim", global_dimension(S.A))
    R.verdict("indecomposables", len(ind))
    rep = verify_n_cluster_tilting(S.A, S.M)
    R.verdict("M_cluster_tilting", bool(rep))
    R.witnesses.append({"indecomposables": [f"{S.reg.label(i)}={','.join(map(str, S.reg.module(i).dims))}" for i in ind]})
    R.witnesses.append({"M": S.labels(S.M)})


def cmd_torsion_enumerate(S: Session, args, R: Report) -> None:
    from .torsion import enumerate_torsion_classes

    classes = enumerate_torsion_classes(S.A, S.M, workers=args.workers)
    R.verdict("torsion_classes", len(classes))
    R.verdict("splitting_classes", sum(c.splitting for c in classes))
    for c in classes:
        R.witnesses.append({"members": S.labels(c.members), "splitting": c.splitting})


def _cover_witness(S: Session, wit) -> dict:
    bad = wit.failing()
    if bad is None:
        return {}
    reason = "cover is not monic" if not bad.monic else "tail is not U-exact"
    return {"object": S.reg.label(bad.m), "reason": reason}


def cmd_torsion_check(S: Session, args, R: Report) -> None:
    from .torsion import is_splitting, property_F_test, torsion_test_abelian

    U = S.subset(args.subset)
    ok, wit = torsion_test_abelian(S.A, S.M, U)
    R.verdict("torsion", ok)
    if ok:
        R.verdict("splitting", is_splitting(S.A, S.M, U, wit))
        for rec in wit.records:
            if rec.sequence is not None and not rec.theta.source.is_zero():
                from .modcat import decompose

                tail = [S.labels(decompose(X).indices) if not X.is_zero() else [] for X in rec.sequence.tail()]
                R.witnesses.append({"object": S.reg.label(rec.m), "cover": S.labels(decompose(rec.theta.source).indices), "tail": tail})
    else:
        R.witnesses.append(_cover_witness(S, wit))
    F = property_F_test(S.A, S.M, U, mult_cap=S.caps["multiplicity"])
    R.verdict("property_F", F.ok, F.scope)
    if not F.ok:
        R.witnesses.append({"property_F": F.witness})
    R.witnesses.insert(0, {"subset": S.labels(U)})


def cmd_aisles_enumerate(S: Session, args, R: Report) -> None:
    from .angulated import enumerate_aisles

    cat = S.angulated()
    aisles = enumerate_aisles(cat, S.window)
    R.verdict("intermediate_aisles", len(aisles), "window-scope")
    for U in aisles:
        R.witnesses.append({"shift_zero": S.labels(U), "tail_from": 1})


def cmd_theorem_a(S: Session, args, R: Report) -> None:
    from .angulated import CSubcat, left_closed_test, make_XU, torsion_test_angulated

    cat = S.angulated()
    family = [("X(U)", make_XU(U), U) for U in S.subsets()]
    family += [("add U", CSubcat(frozenset((u, 0) for u in U)), U) for U in S.subsets()]
    agree = 0
    for kind, X, U in family:
        t = torsion_test_angulated(cat, X, S.window).ok
        lc = left_closed_test(cat, X, S.caps["multiplicity"], S.window, stop_early=True).left_closed
        if t == lc:
            agree += 1
        else:
            R.witnesses.append({"family": kind, "subset": S.labels(U), "torsion": t, "left_closed": lc})
    R.verdict("agreements", f"{agree}/{len(family)}")
    R.verdict("theorem_a", agree == len(family), "bounded-scope")


def cmd_theorem_b(S: Session, args, R: Report) -> None:
    from .torsion import classic_torsion_test, property_F_test, torsion_test_abelian

    subs = S.subsets()
    agree = 0
    for U in subs:
        t = torsion_test_abelian(S.A, S.M, U)[0]
        f = property_F_test(S.A, S.M, U, mult_cap=S.caps["multiplicity"]).ok
        # for n = 1 the classical closure conditions give a third opinion
        c = t if S.A.n != 1 else classic_torsion_test(S.A, U, S.caps["multiplicity"], S.caps["quotient_dim"])
        if t == f == c:
            agree += 1
        else:
            R.witnesses.append({"subset": S.labels(U), "torsion": t, "property_F": f, "classic": c})
    R.verdict("agreements", f"{agree}/{len(subs)}")
    R.verdict("theorem_b", agree == len(subs), "bounded-scope")


def cmd_theorem_c(S: Session, args, R: Report) -> None:
    from .angulated import is_aisle, make_XU, torsion_from_aisle
    from .torsion import torsion_test_abelian

    cat = S.angulated()
    torsion = {U for U in S.subsets() if torsion_test_abelian(S.A, S.M, U)[0]}
    aisles = {U for U in S.subsets() if is_aisle(cat, make_XU(U), S.window)}
    round_trip = all(tuple(torsion_from_aisle(cat, make_XU(U))) == tuple(U) for U in S.subsets())
    boundary = is_aisle(cat, make_XU(()), S.window) and is_aisle(cat, make_XU(tuple(S.M)), S.window)
    R.verdict("torsion_classes", len(torsion))
    R.verdict("aisles", len(aisles), "window-scope")
    R.verdict("round_trip", round_trip)
    R.verdict("boundary_aisles", boundary)
    R.verdict("theorem_c", torsion == aisles and round_trip and boundary)
    for U in sorted(torsion ^ aisles):
        R.witnesses.append({"subset": S.labels(U), "torsion": U in torsion, "aisle": U in aisles})


def cmd_wakamatsu(S: Session, args, R: Report) -> None:
    from .angulated import CSubcat, left_closed_test, make_XU, wakamatsu_check

    cat = S.angulated()
    family = [make_XU(U) for U in S.subsets()] + [CSubcat(frozenset((u, 0) for u in U)) for U in S.subsets()]
    checked = passed = 0
    lo, hi = S.window
    for X in family:
        if not left_closed_test(cat, X, S.caps["multiplicity"], S.window, stop_early=True).left_closed:
            continue
        for i in range(lo, hi + 1):
            for m in cat.M:
                checked += 1
                if wakamatsu_check(cat, X, ((m, i),), S.window):
                    passed += 1
                else:
                    R.witnesses.append({"X": sorted(cat.label(p) for p in X.objects), "tail_from": X.tail_from, "object": cat.label((m, i))})
    R.verdict("checked", checked)
    R.verdict("wakamatsu", passed == checked, "bounded-scope")


def cmd_apr(S: Session, args, R: Report) -> None:
    from .torsion import APRError, fac_torsion_class, is_splitting, n_apr_tilt, torsion_test_abelian

    v = int(args.vertex) - 1
    if not 0 <= v < S.A.num_vertices:
        raise SpecError(f"no vertex {args.vertex}")
    try:
        t = n_apr_tilt(S.A, v)
    except APRError as exc:
        raise PreconditionFailure(str(exc)) from exc
    U = fac_torsion_class(S.A, S.M, t)
    ok, wit = torsion_test_abelian(S.A, S.M, U)
    R.verdict("torsion", ok)
    R.verdict("splitting", ok and is_splitting(S.A, S.M, U, wit))
    R.witnesses.append({"vertex": args.vertex, "fac_torsion_class": S.labels(U)})


def _parse_cobject(S: Session, text: str):
    out = []
    for part in text.split("+"):
        part = part.strip()
        lab, _, sh = part.rpartition("@")
        if not lab:
            lab, sh = part, "0"
        idx = S.subset(lab)[0]
        out.append((idx, int(sh)))
    return tuple(sorted(out))


def cmd_angle(S: Session, args, R: Report) -> None:
    import numpy as np

    from .angulated import sigma_n

    cat = S.angulated()
    if "->" not in args.delta:
        raise SpecError("--delta must look like 'x''@i -> y@j' with the target in Sigma^n x'")
    src, _, tgt = args.delta.partition("->")
    x2 = _parse_cobject(S, src)
    x1 = sigma_n(_parse_cobject(S, tgt), -1)
    blocks = cat.delta_space(x2, x1)
    total = sum(H.dim for _, _, H in blocks)
    if args.coeffs:
        coeffs = [int(c) for c in args.coeffs.split(",")]
        if len(coeffs) != total:
            raise SpecError(f"expected {total} coefficients")
    else:
        coeffs = [1] * total
    delta = cat.delta_from_coeffs(x2, x1, blocks, np.array(coeffs, dtype=np.int64))
    ang = cat.complete_angle(x2, x1, delta)
    R.verdict("hom_dim", total)
    R.witnesses.append({"angle": [cat.label_object(o) for o in ang.objects] + [f"S^{cat.n}({cat.label_object(x1)})"]})


COMMANDS = {
    ("analyze", None): cmd_analyze,
    ("torsion", "enumerate"): cmd_torsion_enumerate,
    ("torsion", "check"): cmd_torsion_check,
    ("aisles", "enumerate"): cmd_aisles_enumerate,
    ("check", "theorem-a"): cmd_theorem_a,
    ("check", "theorem-b"): cmd_theorem_b,
    ("check", "theorem-c"): cmd_theorem_c,
    ("check", "wakamatsu"): cmd_wakamatsu,
    ("check", "apr"): cmd_apr,
    ("angle", "complete"): cmd_angle,
}


def _parse_caps(text: str | None) -> dict:
    caps = dict(DEFAULT_CAPS)
    if not text:
        return caps
    for item in text.split(","):
        key, _, val = item.partition("=")
        key = key.strip()
        if key not in caps or not val:
            raise SpecError(f"unknown cap {item!r}; known caps: {', '.join(caps)}")
        caps[key] = int(val)
    return caps


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("algebra", nargs="?", default="gamma", help="algebra file or corpus name (default: gamma)")
    common.add_argument("--char", type=int, default=None, help="override the field characteristic")
    common.add_argument("--caps", default=None, help="comma-separated overrides, e.g. multiplicity=1,window=1")
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized module splitting")
    common.add_argument("--no-timings", action="store_true", help="omit timings from the report")
    common.add_argument("--workers", type=int, default=None, help="threads for torsion enumeration")

    ap = argparse.ArgumentParser(prog="hightors", description="Torsion classes and aisles for quiver algebras.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="global dimension, indecomposables, M")

    tor = sub.add_parser("torsion", help="torsion classes in M").add_subparsers(dest="action", required=True)
    tor.add_parser("enumerate", parents=[common])
    chk = tor.add_parser("check", parents=[common])
    chk.add_argument("--subset", required=True, help="labels of U, comma separated")

    ais = sub.add_parser("aisles", help="intermediate aisles in C(A)").add_subparsers(dest="action", required=True)
    ais.add_parser("enumerate", parents=[common])

    thm = sub.add_parser("check", help="verify a theorem on the algebra").add_subparsers(dest="action", required=True)
    for name in ("theorem-a", "theorem-b", "theorem-c", "wakamatsu"):
        thm.add_parser(name, parents=[common])
    apr = thm.add_parser("apr", parents=[common])
    apr.add_argument("--vertex", required=True, help="1-based vertex of a simple projective")

    ang = sub.add_parser("angle", help="complete a morphism to an angle").add_subparsers(dest="action", required=True)
    comp = ang.add_parser("complete", parents=[common])
    comp.add_argument("--delta", required=True, help="source and target, e.g. '1@0 -> 3@1'")
    comp.add_argument("--coeffs", default=None, help="coordinates of delta in the Hom basis (default all ones)")
    return ap


def run(argv: list[str]) -> tuple[int, Report | None, str]:
    """Execute a command line; returns (exit code, report, rendered output)."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_INPUT), None, ""
    key = (args.command, getattr(args, "action", None))
    set_seed(args.seed)
    t0 = time.perf_counter()
    try:
        caps = _parse_caps(args.caps)
        spec = load_spec(args.algebra)
        S = Session(spec, args.char, caps)
        t1 = time.perf_counter()
        name = " ".join(x for x in key if x)
        R = Report(name, spec.name, S.A.n, S.A.p, caps=caps, seed=args.seed)
        COMMANDS[key](S, args, R)
    except (SpecError, PreconditionFailure) as exc:
        return EXIT_INPUT, None, f"error: {exc}"
    except CapError as exc:
        return EXIT_SCOPE, None, f"scope error: {exc}"
    except SchurError as exc:
        return EXIT_SCOPE, None, f"scope error: the field does not split the algebra ({exc})"
    if not args.no_timings:
        R.timings = {"setup": t1 - t0, "command": time.perf_counter() - t1}
    out = R.to_json() if args.format == "json" else R.to_text()
    code = EXIT_OK
    if args.command == "check" and not R.all_true():
        code = EXIT_FALSE
    return code, R, out


def main(argv: list[str] | None = None) -> int:
    code, _, out = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if code in (EXIT_INPUT, EXIT_SCOPE) else sys.stdout
    print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
