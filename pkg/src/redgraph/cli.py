"""Command-line frontend: solve, oracle, verify, family and export-dot."""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import numcore
from .dsl import Assembly, load
from .errors import (DSLError, InconsistencyError, InvalidAperyError, NotNumericalError,
                     NotTotalError, PreconditionError, ResourceError, SemigroupError,
                     ValidationError)
from .families import FAMILIES, build_family, verify_instance
from .graph import analyze, balance, is_total, semantic_verify_edge, to_dot

SCHEMA = 1

EXIT_PARSE, EXIT_VALIDATION, EXIT_NOT_TOTAL, EXIT_MISMATCH = 1, 2, 3, 4


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def emit(obj: dict, as_json: bool, out=None):
    out = out or sys.stdout
    obj = dict(obj, schema=SCHEMA)
    if as_json:
        out.write(json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n")
        return
    for k in sorted(obj):
        v = obj[k]
        if isinstance(v, dict):
            out.write(f"{k}:\n")
            for k2 in sorted(v):
                out.write(f"  {k2}: {_jsonable(v[k2])}\n")
        else:
            out.write(f"{k}: {_jsonable(v)}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def oracle_report(gens, a=None, k=None) -> dict:
    gens = [int(x) for x in gens]
    a = min(gens) if a is None else a
    gd = numcore.gaps_oracle(gens)
    rep = {
        "generators": sorted(gens),
        "minimal_generators": list(numcore.minimal_generators(gens)),
        "apery_wrt": a,
        "apery": list(numcore.apery_oracle(gens, a)),
        "frobenius": gd.frobenius,
        "genus": gd.genus,
        "asymmetry": 2 * gd.genus - gd.frobenius - 1,
        "symmetry": numcore.classify_symmetry(gens),
    }
    if k is not None:
        rep["power_sums"] = [numcore.power_sum_oracle(gens, j) for j in range(k + 1)]
    return rep


def graph_report(asm: Assembly, k=None) -> dict:
    g = asm.graph
    bal = balance(g)
    rep = {"root_generator": g.root_generator, "implied_root": asm.implied_root,
           "balance": bal, "total": is_total(g), "edges": len(g.edges)}
    if not rep["total"]:
        raise NotTotalError(f"graph is not total: balance {bal}")
    res = analyze(g, k)
    rep.update(apery=list(res.apery), frobenius=res.frobenius, genus=res.genus,
               asymmetry=res.asymmetry, symmetry=res.symmetry,
               hilbert={"numerator": [[e, c] for e, c in res.hilbert.numerator.terms()],
                        "root_exponent": res.hilbert.root_exponent},
               gap_polynomial=res.gap_poly.exponents())
    if k is not None:
        rep["power_sums"] = list(res.power_sums)
    if asm.generators is not None:
        orc = oracle_report(asm.generators, res.root_generator, k)
        fields = ["apery", "frobenius", "genus", "asymmetry"] + (["power_sums"] if k is not None else [])
        cmp = {f: rep[f] == orc[f] for f in fields}
        rep["oracle"] = {"generators": list(asm.generators), **{f: orc[f] for f in fields},
                         "match": all(cmp.values())}
    return rep


def cmd_solve(args) -> int:
    asm = load(_read(args.file))
    rep = graph_report(asm, args.power_sums)
    if args.verify_bound is not None:
        checks = [semantic_verify_edge(asm.graph, i, args.verify_bound) for i in range(len(asm.graph.edges))]
        rep["edges_verified"] = all(c.passed for c in checks)
    emit(rep, args.json)
    if not rep.get("oracle", {}).get("match", True) or not rep.get("edges_verified", True):
        return EXIT_MISMATCH
    return 0


def cmd_oracle(args) -> int:
    emit(oracle_report(_int_list(args.gens), args.apery, args.power_sums), args.json)
    return 0


def cmd_verify(args) -> int:
    asm = load(_read(args.file))
    g = asm.graph
    edges = []
    for i, e in enumerate(g.edges):
        c = semantic_verify_edge(g, i, args.bound)
        row = {"edge": i, "kind": e.kind, "passed": c.passed}
        if not c.passed:
            row.update(counterexample=c.counterexample, reason=c.reason)
        edges.append(row)
    rep = {"edges": edges, "root_generator": g.root_generator, "balance": balance(g)}
    ok = all(r["passed"] for r in edges)
    res = None
    if is_total(g):
        try:
            res = analyze(g)
        except (NotTotalError, InvalidAperyError) as exc:
            # a tampered edge can pass the balance test and still break the Apery set
            rep["analysis_error"] = str(exc)
            ok = False
    if res is not None:
        rep.update(apery=list(res.apery), frobenius=res.frobenius, genus=res.genus)
        if asm.generators is not None:
            orc = oracle_report(asm.generators, res.root_generator)
            match = all(rep[f] == orc[f] for f in ("apery", "frobenius", "genus"))
            rep["oracle"] = {f: orc[f] for f in ("apery", "frobenius", "genus")}
            rep["oracle"]["match"] = match
            ok = ok and match
    elif "analysis_error" not in rep:
        rep["total"] = False
    rep["passed"] = ok
    emit(rep, args.json)
    if not ok:
        for r in edges:
            if not r["passed"]:
                print(f"edge {r['edge']} ({r['kind']}) fails: {r['reason']}; "
                      f"counterexample {r['counterexample']}", file=sys.stderr)
        if all(r["passed"] for r in edges) and "analysis_error" in rep:
            print(rep["analysis_error"], file=sys.stderr)
            return EXIT_NOT_TOTAL
        return EXIT_MISMATCH
    return 0


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise PreconditionError(f"expected a comma separated list of integers, got {text!r}") from None


def parse_params(text: str | None) -> dict:
    out = {}
    for part in (text or "").split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise PreconditionError(f"parameter {part!r} is not of the form name=value")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_grid(text: str) -> list[dict]:
    """'n=1..20,k=3..8' or alternatives 'variant=le|ge'; sorted cartesian product."""
    axes = []
    for k, v in parse_params(text).items():
        if ".." in v:
            lo, hi = v.split("..", 1)
            try:
                vals = [str(x) for x in range(int(lo), int(hi) + 1)]
            except ValueError:
                raise PreconditionError(f"bad range {v!r} for {k}") from None
        else:
            vals = v.split("|")
        axes.append((k, vals))
    return [dict(zip([k for k, _ in axes], combo)) for combo in itertools.product(*[v for _, v in axes])]


def _run_instance(job):
    name, params = job
    try:
        inst = build_family(name, params)
    except SemigroupError as exc:
        return {"params": params, "status": "skipped", "reason": str(exc)}
    res = verify_instance(inst)
    return {"params": params, "status": "pass" if res["ok"] else "fail",
            "frobenius": res.get("graph", {}).get("frobenius"),
            "closed_form": res.get("closed_form"),
            "failed_checks": sorted(k for k, v in res.get("checks", {}).items() if not v)}


def cmd_family(args) -> int:
    if args.list:
        for name in sorted(FAMILIES):
            e = FAMILIES[name]
            print(f"{name}: {', '.join(e.schema)}  ({e.doc})")
        return 0
    if not args.name:
        raise PreconditionError("family name required (use --list)")
    if args.grid is None:
        inst = build_family(args.name, parse_params(args.params))
        res = verify_instance(inst, args.power_sums or 2)
        emit(res, args.json)
        return 0 if res["ok"] else EXIT_MISMATCH
    base = parse_params(args.params)
    jobs = [(args.name, {**base, **p}) for p in parse_grid(args.grid)]
    if args.name not in FAMILIES:
        build_family(args.name, {})
    if args.workers == 1:
        rows = [_run_instance(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            rows = list(ex.map(_run_instance, jobs, chunksize=8))
    counts = {s: sum(r["status"] == s for r in rows) for s in ("pass", "fail", "skipped")}
    emit({"family": args.name, "grid": args.grid, "instances": rows, "summary": counts}, args.json)
    return EXIT_MISMATCH if counts["fail"] else 0


def cmd_export_dot(args) -> int:
    asm = load(_read(args.file))
    sys.stdout.write(to_dot(asm.graph))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="redgraph", description="Reduction graphs for numerical semigroups.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="analyze the graph described by an edge-list script")
    s.add_argument("file", help="script path, or - for stdin")
    s.add_argument("--power-sums", type=int, metavar="K", help="also report gap power sums S_0..S_K")
    s.add_argument("--verify-bound", type=int, metavar="N", help="semantically verify every edge up to N")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="brute-force invariants of a generator set")
    o.add_argument("--gens", required=True, help="comma separated generators, e.g. 9,12,15,20")
    o.add_argument("--apery", type=int, metavar="A", help="Apery set element (default: smallest generator)")
    o.add_argument("--power-sums", type=int, metavar="K")
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", help="check each edge identity by bounded enumeration")
    v.add_argument("file")
    v.add_argument("--bound", type=int, metavar="N")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("family", help="build and check a named family instance or grid")
    f.add_argument("name", nargs="?")
    f.add_argument("--params", help="name=value pairs, e.g. n=8,k=2 (lists as 2:3)")
    f.add_argument("--grid", help="ranges and alternatives, e.g. n=1..20,k=3..8 or variant=le|ge")
    f.add_argument("--power-sums", type=int, metavar="K")
    f.add_argument("--workers", type=int, default=None, help="worker processes for --grid (1 = serial)")
    f.add_argument("--list", action="store_true", help="list families and their parameters")
    f.add_argument("--json", action="store_true")
    f.set_defaults(func=cmd_family)

    d = sub.add_parser("export-dot", help="write the graph in Graphviz DOT format")
    d.add_argument("file")
    d.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DSLError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print("validation failed:", file=sys.stderr)
        for v in exc.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_VALIDATION
    except (PreconditionError, NotNumericalError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NotTotalError, InvalidAperyError) as exc:
        print(f"not total: {exc}", file=sys.stderr)
        return EXIT_NOT_TOTAL
    except InconsistencyError as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
