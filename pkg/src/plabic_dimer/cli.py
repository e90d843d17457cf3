"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 a check failed or a theorem-level
identity was violated, 3 a resource guard tripped.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import algebra, cmrank1, geometry, moves, surface
from .collection import Collection, build_maximal_collection, enumerate_maximal_collections, label_str, parse_label
from .dimer import QuiverWithFaces, arrow_weights, check_dimer_axioms, figure_collection, gamma_of_collection, labelled_checks
from .errors import InvalidInput, PlabicDimerError, ResourceGuard

SUITES = ("axioms", "weights", "degrees", "paths", "rewriting", "boundary", "mutation", "geometry", "annulus")


@dataclass
class Check:
    name: str
    status: str  # pass | fail | skipped
    details: list = field(default_factory=list)


@dataclass
class RunReport:
    command: str
    inputs_digest: str
    checks: list[Check] = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_json(self, with_timing: bool = False) -> str:
        d = asdict(self)
        if not with_timing:
            del d["timing"]
        return json.dumps(d, indent=1, sort_keys=True)


def _check(name: str, violations: list, limit: int = 10) -> Check:
    return Check(name, "fail" if violations else "pass", [str(v) for v in violations[:limit]])


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, default=str).encode()).hexdigest()[:16]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PLABIC_DIMER_THREADS", "1")))
    except ValueError:
        raise InvalidInput("PLABIC_DIMER_THREADS must be an integer")


# -- input resolution --------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def _collection(args) -> Collection:
    if getattr(args, "from_labels", None):
        return Collection.from_json(_read(args.from_labels))
    if args.k is None or args.n is None:
        raise InvalidInput("need --k and --n (or --from-labels)")
    if (args.k, args.n) == (3, 7):
        return figure_collection()
    return build_maximal_collection(args.k, args.n)


def _vertex(Q: QuiverWithFaces, text: str) -> str:
    return Q.vertex_of_label(parse_label(text, Q.n))


# -- check families ------------------------------------------------------------

def suite_axioms(C: Collection, Q: QuiverWithFaces, args) -> list[Check]:
    return [_check(r.name, r.violations) for r in labelled_checks(Q)]


def suite_weights(C, Q, args) -> list[Check]:
    w = arrow_weights(Q)
    bad = []
    for a in sorted(Q.arrows):
        arr = Q.arrows[a]
        d = cmrank1.deg_min(Q.label(arr.tail), Q.label(arr.head), Q.n)
        if w[a] != d:
            bad.append(f"arrow {arr.tail}->{arr.head}: weight {w[a]} vs degree {d}")
    return [_check("arrow weight = minimal degree", bad)]


def suite_degrees(C, Q, args) -> list[Check]:
    bad = []
    for I in C.members:
        for J in C.members:
            f, o = cmrank1.deg_min_formula(I, J, C.n), cmrank1.deg_min_oracle(I, J, C.n)
            if f != o:
                bad.append(f"{label_str(I, C.n)}->{label_str(J, C.n)}: {f} vs {o}")
    return [_check("degree formula = lattice oracle", bad)]


def suite_paths(C, Q, args) -> list[Check]:
    bad = []
    for u in sorted(Q.vertices):
        for v in sorted(Q.vertices):
            try:
                p = algebra.minimal_path(Q, u, v)
            except PlabicDimerError as exc:
                bad.append(f"{u}->{v}: {exc}")
                continue
            if u != v and algebra.path_weight(Q, p).min() != 0:
                bad.append(f"{u}->{v}: minimal path is sincere")
    return [_check("greedy minimal paths", bad)]


def suite_rewriting(C, Q, args) -> list[Check]:
    rng = random.Random(args.seed)
    bad, tally = [], {"equivalent": 0, "not-equivalent": 0, "not-within-budget": 0}
    for p, q in algebra.random_path_pairs(Q, args.pairs, 10, rng):
        res = algebra.rewrite_equiv(Q, p, q, args.budget)
        tally[res.verdict.value] += 1
        same = algebra.normalize(Q, p) == algebra.normalize(Q, q)
        if res.concluded and (res.verdict == algebra.Verdict.EQUIVALENT) != same:
            bad.append(f"{p.arrows} vs {q.arrows}: oracle {res.verdict.value}, normal forms equal={same}")
    c = _check("rewriting agrees with normal forms", bad)
    c.details.append(json.dumps(tally, sort_keys=True))
    return [c]


def suite_boundary(C, Q, args) -> list[Check]:
    rep = algebra.boundary_algebra(Q, max_grade=args.grade)
    return [_check("boundary algebra", rep.violations)]


def suite_mutation(C, Q, args) -> list[Check]:
    rng = random.Random(args.seed)
    bad = []
    for s in range(args.sequences):
        seq, _, _ = moves.random_sequence(C, Q, rng.randint(1, 20), rng)
        rep = moves.invariance_check(C, Q, seq)
        bad += [f"sequence {s}: {v}" for v in rep.violations]
    for v in moves.exchangeable_vertices(Q):
        C2, Q2 = moves.geometric_exchange(C, Q, v)
        back = label_str(moves.exchanged_label(Q, v), C.n)
        C3, Q3 = moves.geometric_exchange(C2, Q2, back)
        if C3 != C or not Q3.same_as(Q):
            bad.append(f"double exchange at {v} is not the identity")
    return [_check("exchange invariance", bad)]


def suite_geometry(C, Q, args) -> list[Check]:
    angles = _angles(args, C.n)
    emb = geometry.embed(Q, angles)
    out = [_check(r.name, r.violations) for r in (geometry.check_isoradial(Q, emb),
                                                   geometry.check_angle_laws(Q, angles),
                                                   geometry.check_arrow_angles(Q, emb, angles))]
    first = geometry.svg_export(Q, emb)
    again = geometry.svg_export(Q, geometry.embed(Q, angles))
    out.append(_check("svg is deterministic", [] if first == again else ["two renders differ"]))
    return out


def suite_annulus(C, Q, args) -> list[Check]:
    out = []
    for n, m in ((1, 1), (2, 1), (2, 2)):
        T = surface.annulus_triangulation(n, m)
        reports = [surface.lambda_relation_check(X, args.budget) for X in (T, surface.flip(T, "a0"))]
        bad = [f"{name}: {v}" for name, v in reports[0].summary() if v != "equivalent"]
        if reports[0].summary() != reports[1].summary():
            bad.append("the two triangulations give different reports")
        out.append(_check(f"annulus ({n},{m}) relations", bad))
    return out


SUITE_FUNCS = {name: globals()[f"suite_{name}"] for name in SUITES}


def _angles(args, n: int) -> geometry.AngleAssignment:
    source = getattr(args, "angles", None) or "uniform"
    if source == "uniform":
        return geometry.AngleAssignment.uniform(n)
    A = geometry.AngleAssignment.from_json(_read(source))
    if A.n != n:
        raise InvalidInput(f"{A.n} angles for n={n}")
    return A


# -- commands --------------------------------------------------------------------

def cmd_build(args) -> int:
    if args.triangulation:
        T = surface.Triangulation.from_json(_read(args.triangulation))
        print(surface.scott_quiver(T).to_json())
        return 0
    if args.enumerate:
        if args.k is None or args.n is None:
            raise InvalidInput("--enumerate needs --k and --n")
        cols = enumerate_maximal_collections(args.k, args.n)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for t, C in enumerate(cols):
            (out / f"collection_{args.k}_{args.n}_{t:03d}.json").write_text(C.to_json() + "\n")
        print(json.dumps({"k": args.k, "n": args.n, "collections": len(cols), "directory": str(out)}))
        return 0
    Q = gamma_of_collection(_collection(args))
    print(Q.to_json())
    return 0


def cmd_verify(args) -> int:
    suites = SUITES if args.suite == "all" else tuple(args.suite.split(","))
    for s in suites:
        if s not in SUITE_FUNCS:
            raise InvalidInput(f"unknown suite {s}")
    if args.quiver:
        text = _read(args.quiver)
        Q = QuiverWithFaces.from_json(text)
        report = RunReport("verify", _digest(text))
        rep = check_dimer_axioms(Q)
        report.checks.append(_check(rep.name, rep.violations))
        if rep.ok and all(v.label is not None for v in Q.vertices.values()) and Q.k and Q.n:
            report.checks += [_check(r.name, r.violations) for r in labelled_checks(Q)[1:]]
        print(report.to_json())
        return 0 if report.ok else 2
    if args.enumerate:
        cols = enumerate_maximal_collections(args.k, args.n)
    else:
        cols = [_collection(args)]
    report = RunReport("verify", _digest({"suites": suites, "seed": args.seed, "budget": args.budget,
                                          "grade": args.grade, "collections": [c.labels() for c in cols]}))

    def run(job):
        t, C, name = job
        start = time.perf_counter()
        try:
            checks = SUITE_FUNCS[name](C, gamma_of_collection(C), args)
        except ResourceGuard:
            raise
        except PlabicDimerError as exc:
            checks = [Check(name, "fail", [f"{type(exc).__name__}: {exc}"])]
        prefix = f"[{t}] " if len(cols) > 1 else ""
        for c in checks:
            c.name = f"{prefix}{name}: {c.name}"
        return checks, time.perf_counter() - start

    jobs = [(t, C, name) for t, C in enumerate(cols) for name in suites
            if not (name == "annulus" and t > 0)]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(run, jobs))
    for (t, C, name), (checks, dt) in zip(jobs, results):
        report.checks += checks
        report.timing[f"{t}:{name}"] = round(dt, 4)
    print(report.to_json(args.timing))
    return 0 if report.ok else 2


def cmd_hom(args) -> int:
    Q = gamma_of_collection(_collection(args))
    u, v = _vertex(Q, args.I), _vertex(Q, args.J)
    dims = [algebra.graded_hom_dim(Q, u, v, d) for d in range(args.grade + 1)]
    print(json.dumps({"from": u, "to": v, "degree": list(cmrank1.deg_min(Q.label(u), Q.label(v), Q.n).counts),
                      "dims": dims}))
    return 0


def cmd_minpath(args) -> int:
    Q = gamma_of_collection(_collection(args))
    u, v = _vertex(Q, args.I), _vertex(Q, args.J)
    p = algebra.minimal_path(Q, u, v)
    verts = [u] + [Q.arrows[a].head for a in p.arrows]
    print(json.dumps({"path": verts, "weight": list(algebra.path_weight(Q, p).counts)}))
    return 0


def cmd_normalize(args) -> int:
    Q = gamma_of_collection(_collection(args))
    verts = [_vertex(Q, x) for x in args.path.split(",")]
    nf = algebra.normalize(Q, algebra.path_from_vertices(Q, verts))
    print(json.dumps({"source": nf.source, "target": nf.target, "u_power": nf.N}))
    return 0


def cmd_boundary(args) -> int:
    Q = gamma_of_collection(_collection(args))
    rep = algebra.boundary_algebra(Q, max_grade=args.grade)
    out = {"k": rep.k, "n": rep.n, "ok": rep.ok, "violations": rep.violations,
           "y_weights": {str(j): list(w) for j, w in sorted(rep.y_weights.items())},
           "x_weights": {str(j): list(w) for j, w in sorted(rep.x_weights.items())}}
    if args.table:
        out["table"] = [[j, w, e, N] for (j, w), (e, N) in sorted(rep.table.items())]
    print(json.dumps(out, indent=1, sort_keys=True))
    return 0 if rep.ok else 2


def cmd_mutate(args) -> int:
    C = _collection(args)
    Q = gamma_of_collection(C)
    seq = [args.at] if args.at else []
    if args.seq:
        seq += [x.strip() for x in _read(args.seq).split() if x.strip()]
    if not seq:
        raise InvalidInput("give --at or --seq")
    for label in seq:
        C, Q = moves.geometric_exchange(C, Q, _vertex(Q, label))
    print(C.to_json())
    return 0


def cmd_exchange_graph(args) -> int:
    nodes, edges = moves.exchange_graph(_collection(args), args.max_nodes)
    print(json.dumps({"nodes": [c.labels() for c in nodes], "edges": edges}, indent=1))
    return 0


def cmd_tiling(args) -> int:
    C = _collection(args)
    Q = gamma_of_collection(C)
    angles = _angles(args, C.n)
    emb = geometry.embed(Q, angles)
    svg = geometry.svg_export(Q, emb)
    if args.svg:
        Path(args.svg).write_text(svg)
    else:
        sys.stdout.write(svg)
    bad = [v for r in (geometry.check_isoradial(Q, emb), geometry.check_angle_laws(Q, angles)) for v in r.violations]
    for v in bad:
        print(v, file=sys.stderr)
    return 0 if not bad else 2


def cmd_annulus(args) -> int:
    if args.triangulation and set(args.triangulation) <= {"o", "i"}:
        T = surface.annulus_triangulation(args.n, args.m, args.triangulation)
    elif args.triangulation:
        T = surface.Triangulation.from_json(_read(args.triangulation))
        if (T.surface.kind, T.surface.n, T.surface.m) != ("annulus", args.n, args.m):
            raise InvalidInput("triangulation does not match n and m")
    else:
        T = surface.annulus_triangulation(args.n, args.m)
    Q = surface.scott_quiver(T)
    out = {"n": args.n, "m": args.m, "vertices": len(Q.vertices), "arrows": len(Q.arrows), "faces": len(Q.faces)}
    code = 0
    if args.check_lambda:
        rep = surface.lambda_relation_check(T, args.budget)
        out["relations"] = dict(rep.summary())
        out["confirmed"] = rep.confirmed
        out["completeness"] = rep.completeness
        code = 0 if rep.confirmed else 2
    print(json.dumps(out, indent=1, sort_keys=True))
    return code


# -- argument parsing ------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plabic-dimer", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, collection=True):
        if collection:
            p.add_argument("--k", type=int)
            p.add_argument("--n", type=int)
            p.add_argument("--from-labels", help="collection JSON {k, n, labels}")
        p.add_argument("--seed", type=int, default=0)
        return p

    p = common(sub.add_parser("build", help="write a quiver (or enumerate collections)"))
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--triangulation")
    p.add_argument("--out", default="collections")
    p.set_defaults(func=cmd_build)

    p = common(sub.add_parser("verify", help="run check families and print a report"))
    p.add_argument("--suite", default="all", help="all or a comma list of " + ",".join(SUITES))
    p.add_argument("--enumerate", action="store_true", help="verify every maximal collection")
    p.add_argument("--quiver", help="check a quiver JSON file instead")
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--grade", type=int, default=5)
    p.add_argument("--pairs", type=int, default=200)
    p.add_argument("--sequences", type=int, default=10)
    p.add_argument("--angles")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings (not reproducible)")
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("hom", help="graded dimensions of paths I -> J"))
    p.add_argument("I")
    p.add_argument("J")
    p.add_argument("--grade", type=int, default=3)
    p.set_defaults(func=cmd_hom)

    p = common(sub.add_parser("minpath", help="greedy minimal path I -> J"))
    p.add_argument("I")
    p.add_argument("J")
    p.set_defaults(func=cmd_minpath)

    p = common(sub.add_parser("normalize", help="normal form of a path given as comma-separated labels"))
    p.add_argument("path")
    p.set_defaults(func=cmd_normalize)

    p = common(sub.add_parser("boundary", help="boundary generators and relations"))
    p.add_argument("--table", action="store_true")
    p.add_argument("--grade", type=int, default=5)
    p.set_defaults(func=cmd_boundary)

    p = common(sub.add_parser("mutate", help="exchange at a label (or a sequence from a file)"))
    p.add_argument("--at")
    p.add_argument("--seq")
    p.set_defaults(func=cmd_mutate)

    p = common(sub.add_parser("exchange-graph", help="collections reachable by exchanges"))
    p.add_argument("--max-nodes", type=int, default=1000)
    p.set_defaults(func=cmd_exchange_graph)

    p = common(sub.add_parser("tiling", help="isoradial embedding as SVG"))
    p.add_argument("--svg")
    p.add_argument("--angles", default="uniform", help="uniform or a JSON file of angles")
    p.set_defaults(func=cmd_tiling)

    p = common(sub.add_parser("annulus", help="quiver of an annulus triangulation"), collection=False)
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--triangulation", help="JSON file or a bridging word of o/i letters")
    p.add_argument("--check-lambda", action="store_true")
    p.add_argument("--budget", type=int, default=100_000)
    p.set_defaults(func=cmd_annulus)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceGuard as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return 3
    except InvalidInput as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 1
    except PlabicDimerError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
