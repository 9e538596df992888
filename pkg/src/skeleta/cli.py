"""Command-line front end: ``skeleta <command> [options]``.

Exit codes: 0 all checks passed, 1 a verification failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from string import ascii_lowercase

from . import flow
from .errors import InputError, SkeletaError
from .kmonomial import KMonomialCandidate, run_all
from .koszul import KoszulSpec, acyclicity_test, build_koszul
from .lincat import Report, category_from_dict, check_category_axioms
from .linalg import Field, use_field
from .posetalg import ext_table_A
from .simplicial import Face, SimplicialComplex, all_subsets, components, enumerate_complexes
from .toric import (ExtTable, ToricCover, build_B_category, cohomology_weight, ext_table_B,
                    indicator, koszul_support_check, parse_weight)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    field: Field = Field(0)
    pipeline: str = "both"
    out: str = "tsv"
    weight: tuple | None = None
    n_cap: int = 20

    def __post_init__(self):
        if self.n_cap > 20:
            raise InputError("n-cap must not exceed 20")


def threads() -> int:
    try:
        return max(1, int(os.environ.get("SKELETA_THREADS", "1")))
    except ValueError:
        return 1


# --- loading ---------------------------------------------------------------

def load_input(path: str | None, n_cap: int = 20):
    """Return ``(K, dump)``; ``dump`` is the parsed category dump or None."""
    if path is None:
        raise InputError("--input is required")
    try:
        with open(path) as fh:
            text = fh.read()
        data = json.loads(text)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not JSON: {exc}") from exc
    if isinstance(data, dict) and "objects" in data:
        if "complex" not in data:
            raise InputError("category dump must carry a 'complex' entry")
        K = SimplicialComplex.from_json(json.dumps(data["complex"]))
        dump = data
    else:
        K = SimplicialComplex.from_json(text)
        dump = None
    if K.n > n_cap:
        raise InputError(f"n={K.n} exceeds the cap {n_cap}")
    return K, dump


def obj_name(I: Face, n: int) -> str:
    return "O(" + ",".join(str(v) for v in indicator(I, n)) + ")"


# --- components ------------------------------------------------------------

def components_table(K: SimplicialComplex, epsilon: float = 0.1) -> list[dict]:
    rows = []
    for c in components(K):
        x, y = c.sample_point(K.n, epsilon)
        rows.append({"sigma": list(c.sigma.vertices),
                     "signs": {str(v): s for v, s in c.signs},
                     "x": x, "y": y})
    return rows


def cmd_components(cfg: RunConfig, args) -> int:
    K, _ = load_input(cfg.input, cfg.n_cap)
    rows = components_table(K, args.epsilon)
    if cfg.out == "json":
        print(json.dumps(rows, indent=1))
    else:
        print("sigma\tsigns\tx\ty")
        for r in rows:
            signs = ",".join(f"{v}{'+' if s > 0 else '-'}" for v, s in r["signs"].items())
            print(f"{r['sigma']}\t{signs or '-'}\t{_vec(r['x'])}\t{_vec(r['y'])}")
    return EXIT_OK


def _vec(v) -> str:
    return "(" + ",".join(f"{a:.6g}" for a in v) + ")"


# --- verify ----------------------------------------------------------------

def verify_complex(K: SimplicialComplex, method: str = "probe") -> list[Report]:
    D, F = build_B_category(K)
    cand = KMonomialCandidate(K, D, F, translation="labels")
    reports = run_all(cand, method=method)
    dual = Report("koszul_support")
    for I in all_subsets(K.n):
        acyc = acyclicity_test(KoszulSpec(I), F, method=method)
        supp = koszul_support_check(K, I)
        dual.add(f"I={I!r}", acyc == supp and acyc == (I not in K),
                 {"acyclic": acyc, "empty_support": supp})
    reports.append(dual)
    reports.append(ext_diff_report(ext_table_A(K), ext_table_B(K, D)))
    return reports


def verify_dump(K: SimplicialComplex, dump: dict, method: str = "probe") -> list[Report]:
    C, F = category_from_dict(dump, n=K.n)
    reports = [check_category_axioms(C)]
    if F is None:
        rep = Report("functor")
        rep.add("present", False)
        return reports + [rep]
    cand = KMonomialCandidate(K, C, F)
    reports += run_all(cand, method=method)
    tA = ext_table_A(K)
    tC = ExtTable(K.n, label="dump")
    for a in all_subsets(K.n):
        for b in all_subsets(K.n):
            tC[(a, b)] = cand.hom_cohomology(a, b)
    reports.append(ext_diff_report(tA, tC))
    return reports


def ext_diff_report(tA: ExtTable, tB: ExtTable) -> Report:
    rep = Report("mirror_ext")
    diffs = {k: (a, b) for k, a, b in tA.diff(tB)}
    for key in sorted(set(tA.keys()) | set(tB.keys()), key=lambda p: (len(p[0]), p[0].sort_key(), len(p[1]), p[1].sort_key())):
        if key in diffs:
            rep.add(f"{key[0]!r}->{key[1]!r}", False, {"A": diffs[key][0], "B": diffs[key][1]})
    if not rep.cases:
        rep.add(f"all {len(tA.keys())} pairs", True)
    return rep


def _verify_job(args):
    text, field_p = args
    with use_field(Field(field_p)):
        K = SimplicialComplex.from_json(text)
        reps = verify_complex(K)
    return text, [r.to_dict() for r in reps]


def cmd_verify(cfg: RunConfig, args) -> int:
    if args.catalogue is not None:
        return _verify_catalogue(cfg, args.catalogue)
    K, dump = load_input(cfg.input, cfg.n_cap)
    reports = verify_complex(K) if dump is None else verify_dump(K, dump)
    _emit_reports(cfg, reports)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _verify_catalogue(cfg: RunConfig, nmax: int) -> int:
    if nmax > 4:
        raise InputError("exhaustive catalogue is limited to n <= 4")
    jobs = [(K.to_json(), cfg.field.p) for n in range(nmax + 1) for K in enumerate_complexes(n)]
    if threads() > 1:
        with ProcessPoolExecutor(max_workers=threads()) as pool:
            results = list(pool.map(_verify_job, jobs))
    else:
        results = [_verify_job(j) for j in jobs]
    ok = True
    for text, reps in results:
        passed = all(r["passed"] for r in reps)
        ok &= passed
        if cfg.out == "json":
            print(json.dumps({"complex": json.loads(text), "passed": passed, "reports": reps}))
        else:
            print(f"{text}\t{'pass' if passed else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def _emit_reports(cfg: RunConfig, reports: list[Report]):
    if cfg.out == "json":
        print(json.dumps([r.to_dict() for r in reports], indent=1, default=str))
    else:
        for r in reports:
            print(r.summary())
        bad = [r for r in reports if not r.passed]
        if bad:
            print(bad[0].to_tsv().splitlines()[[c.verdict for c in bad[0].cases].index(False)])


# --- ext tables ----------------------------------------------------------------

def cmd_ext_table(cfg: RunConfig, args) -> int:
    K, _ = load_input(cfg.input, cfg.n_cap)
    tables = []
    if cfg.pipeline in ("a", "both"):
        tables.append(ext_table_A(K))
    if cfg.pipeline in ("b", "both"):
        tables.append(ext_table_B(K))
    if cfg.out == "json":
        print(json.dumps([t.to_dict() for t in tables], indent=1))
    else:
        for t in tables:
            print(f"# pipeline {t.label}")
            print(t.to_tsv())
    if len(tables) == 2 and tables[0].diff(tables[1]):
        print(f"# pipelines disagree on {len(tables[0].diff(tables[1]))} pairs", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# --- quiver ----------------------------------------------------------------

def quiver_presentation(K: SimplicialComplex) -> dict:
    """Degree-0 arrows between generators one step apart, commuting squares,
    and every Ext class outside degree 0."""
    D, F = build_B_category(K)
    n = K.n
    subs = all_subsets(n)
    coh = {(a, b): D.hom_cohomology(a, b) for a in subs for b in subs}
    arrows = []
    for a in subs:
        for k in range(1, n + 1):
            if k in a:
                continue
            b = a.with_vertex(k)
            if coh[(a, b)].get(0):
                arrows.append({"name": f"e_{k}", "source": a, "target": b})
            if coh[(b, a)].get(0):
                arrows.append({"name": f"e_{k}^-1", "source": b, "target": a})
    relations = []
    for a in subs:
        for k1, k2 in ((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)):
            if k1 in a or k2 in a:
                continue
            a1, a2, a12 = a.with_vertex(k1), a.with_vertex(k2), a.with_vertex(k1).with_vertex(k2)
            if not all(coh[p].get(0) for p in [(a, a1), (a1, a12), (a, a2), (a2, a12)]):
                continue
            p1 = D.compose(a, a1, a12, F.mor_basis(a1, a12, Face.of(k2)), F.mor_basis(a, a1, Face.of(k1)))
            p2 = D.compose(a, a2, a12, F.mor_basis(a2, a12, Face.of(k1)), F.mor_basis(a, a2, Face.of(k2)))
            if D.same_class(a, a12, p1, p2) and not D.is_coboundary(a, a12, p1):
                relations.append({"relation": f"e_{k1}e_{k2}=e_{k2}e_{k1}", "source": a, "target": a12})
    higher = []
    letters = iter(ascii_lowercase[5:] + ascii_lowercase[:5])
    for a in subs:
        for b in subs:
            for d, dim in sorted(coh[(a, b)].items()):
                if d != 0:
                    higher.append({"name": f"{next(letters, 'x')}[{d}]", "source": a, "target": b,
                                   "degree": d, "dim": dim})
    invertible = [a["name"] for a in arrows
                  if coh[(a["target"], a["source"])].get(0) and coh[(a["source"], a["target"])].get(0)]
    return {"n": n, "objects": subs, "arrows": arrows, "relations": relations, "higher": higher,
            "invertible": invertible}


def render_quiver(Q: dict, fmt: str = "tsv") -> str:
    n = Q["n"]
    if fmt == "json":
        def conv(x):
            if isinstance(x, Face):
                return obj_name(x, n)
            if isinstance(x, dict):
                return {k: conv(v) for k, v in x.items()}
            if isinstance(x, list):
                return [conv(v) for v in x]
            return x
        return json.dumps(conv(Q), indent=1)
    lines = [f"objects\t{len(Q['objects'])}"]
    for a in Q["arrows"]:
        lines.append(f"arrow\t{a['name']}: {obj_name(a['source'], n)} -> {obj_name(a['target'], n)}")
    for name in Q["invertible"]:
        lines.append(f"invertible\t{name}")
    for r in Q["relations"]:
        lines.append(f"relation\t{r['relation']}: {obj_name(r['source'], n)} -> {obj_name(r['target'], n)}")
    for h in Q["higher"]:
        dim = f" (dim {h['dim']})" if h["dim"] != 1 else ""
        lines.append(f"class\t{h['name']}: {obj_name(h['source'], n)} -> {obj_name(h['target'], n)}{dim}")
    return "\n".join(lines)


def cmd_quiver(cfg: RunConfig, args) -> int:
    K, _ = load_input(cfg.input, cfg.n_cap)
    print(render_quiver(quiver_presentation(K), cfg.out))
    return EXIT_OK


# --- koszul ------------------------------------------------------------------

def _parse_face(text: str | None) -> Face:
    if not text:
        return Face()
    try:
        return Face.from_iterable(int(t) for t in text.split(",") if t)
    except ValueError as exc:
        raise InputError(f"bad subset {text!r}") from exc


def cmd_koszul(cfg: RunConfig, args) -> int:
    K, _ = load_input(cfg.input, cfg.n_cap)
    D, F = build_B_category(K)
    J = _parse_face(args.J)
    subsets = [_parse_face(args.I)] if args.I is not None else [I for I in all_subsets(K.n) if I.isdisjoint(J)]
    ok = True
    rows = []
    for I in subsets:
        if not (I | J) <= Face.full(K.n):
            raise InputError(f"I ∪ J must lie in [{K.n}]")
        X = build_koszul(KoszulSpec(I, J), F)
        acyc = acyclicity_test(KoszulSpec(I, J), F)
        supp = koszul_support_check(K, I)
        agree = acyc == supp if not J else True
        ok &= agree
        rows.append({"I": list(I.vertices), "J": list(J.vertices), "summands": len(X),
                     "acyclic": acyc, "empty_support": supp, "in_K": I in K})
    if cfg.out == "json":
        print(json.dumps(rows, indent=1))
    else:
        print("I\tJ\tsummands\tacyclic\tempty_support\tin_K")
        for r in rows:
            print(f"{r['I']}\t{r['J']}\t{r['summands']}\t{r['acyclic']}\t{r['empty_support']}\t{r['in_K']}")
    return EXIT_OK if ok else EXIT_FAIL


# --- cohomology ------------------------------------------------------------

def cmd_cohomology(cfg: RunConfig, args) -> int:
    K, _ = load_input(cfg.input, cfg.n_cap)
    cover = ToricCover(K)
    if cfg.weight is not None:
        if len(cfg.weight) != K.n:
            raise InputError(f"weight needs {K.n} entries")
        weights = [cfg.weight]
    else:
        r = args.range
        weights = list(product(range(-r, r + 1), repeat=K.n))
    rows = [(m, cohomology_weight(cover, m)) for m in weights]
    if cfg.out == "json":
        print(json.dumps([{"weight": list(m), "dims": {str(d): v for d, v in h.items()}} for m, h in rows], indent=1))
    else:
        print("weight\tdegree\tdim")
        for m, h in rows:
            w = ",".join(map(str, m))
            if not h:
                print(f"{w}\t-\t0")
            for d, v in h.items():
                print(f"{w}\t{d}\t{v}")
    return EXIT_OK


# --- flow ------------------------------------------------------------------

def cmd_flow_check(cfg: RunConfig, args) -> int:
    params = flow.FlowParams(epsilon=args.epsilon, w=args.w, dt=args.dt, tol=args.tol)
    rep = flow.flow_battery(params, grid=args.grid, horizon=args.horizon)
    if args.orbit_csv:
        orb = flow.integrate_orbit(flow.PhasePoint([1.0], [-params.epsilon]), flow.point_complex(),
                                   params, 1.0, on_singular="continue")
        with open(args.orbit_csv, "w") as fh:
            fh.write(orb.to_csv())
    _emit_reports(cfg, [rep])
    return EXIT_OK if rep.passed else EXIT_FAIL


# --- argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skeleta", description="Mirror-symmetry workbench for simplicial skeleta.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="complex JSON {'n':..,'facets':[[..],..]} or a category dump")
    common.add_argument("--field", default="q", help="q (rationals, default) or fp:P")
    common.add_argument("--out", choices=("tsv", "json"), default="tsv")
    common.add_argument("--n-cap", type=int, default=20)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("components", parents=[common], help="list smooth components with sample points")
    c.add_argument("--epsilon", type=float, default=0.1)

    v = sub.add_parser("verify", parents=[common], help="axioms, consequences and the A/B Ext comparison")
    v.add_argument("--catalogue", type=int, default=None, metavar="N",
                   help="verify every vertex-complete complex on n <= N instead of --input")

    e = sub.add_parser("ext-table", parents=[common], help="graded Ext table between generators")
    e.add_argument("--pipeline", choices=("a", "b", "both"), default="both")

    sub.add_parser("quiver", parents=[common], help="degree-0 quiver, relations, higher classes")

    k = sub.add_parser("koszul", parents=[common], help="Koszul acyclicity against support")
    k.add_argument("--I", default=None, help="comma-separated subset; default: all")
    k.add_argument("--J", default=None, help="comma-separated subset disjoint from I")

    h = sub.add_parser("cohomology", parents=[common], help="weight pieces of H(Y_K, O)")
    h.add_argument("--weight", default=None, help="comma-separated integers")
    h.add_argument("--range", type=int, default=2, help="box |m_i| <= R when no weight is given")

    f = sub.add_parser("flow-check", parents=[common], help="numerical flow battery for n <= 2")
    f.add_argument("--epsilon", type=float, default=0.5)
    f.add_argument("--w", type=float, default=4.0)
    f.add_argument("--dt", type=float, default=1e-3)
    f.add_argument("--tol", type=float, default=1e-6)
    f.add_argument("--grid", type=int, default=201)
    f.add_argument("--horizon", type=float, default=50.0)
    f.add_argument("--orbit-csv", default=None, help="write a sample orbit as CSV (t, x..., y...)")
    return p


COMMANDS = {
    "components": cmd_components,
    "verify": cmd_verify,
    "ext-table": cmd_ext_table,
    "quiver": cmd_quiver,
    "koszul": cmd_koszul,
    "cohomology": cmd_cohomology,
    "flow-check": cmd_flow_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        field = Field.parse(args.field)
        weight = parse_weight(args.weight) if getattr(args, "weight", None) else None
        cfg = RunConfig(args.command, args.input, field, getattr(args, "pipeline", "both"), args.out,
                        weight, args.n_cap)
        with use_field(field):
            return COMMANDS[args.command](cfg, args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SkeletaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
