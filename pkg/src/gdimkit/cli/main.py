"""``gdimkit`` command line: run scripts, generate families, run theorem suites.

Output is JSON lines on stdout, one object per compute/verify statement.
Exit codes: 0 success, 1 a theory-violation signal, 2 an input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .. import auslander as A
from .. import fpmodules as FP
from .. import gdim as G
from ..errors import InputError, NotTorsionless, TheoryViolation
from ..polyalg import field_from_name
from .dsl import Compute, Script, Verify, parse_script
from .families import FAMILIES, generate_family
from .suite import SUITES, theorem_suite

EXIT_OK, EXIT_THEORY, EXIT_INPUT = 0, 1, 2


@dataclass
class RunOptions:
    bound: Optional[int] = None
    seed: int = 0
    timings: bool = False
    verbose: bool = False
    jobs: int = 1


def presentation_json(M: FP.FPModule) -> dict:
    u = M.presentation
    S = u.ring
    return {
        "ring": repr(M.ring),
        "target_degrees": list(u.target.degrees),
        "source_degrees": list(u.source.degrees),
        "rows": [[S.format_poly(p.terms) for p in row] for row in u.rows()],
    }


def module_json(M: FP.FPModule, minimal: bool = True) -> dict:
    Mm = FP.minimalize(M) if minimal else M
    return {"presentation": presentation_json(Mm), "is_zero": FP.is_zero(M),
            "hilbert_series": FP.hilbert_series(M).to_json()}


def _num(x):
    if x == math.inf:
        return "inf"
    return x


def betti_json(table) -> dict:
    out: dict = {}
    for (i, d), c in sorted(table.items()):
        out.setdefault(str(i), {})[str(d)] = c
    return out


def _execute(stmt: Compute, script: Script, opts: RunOptions) -> dict:
    cmd, args, o = stmt.command, stmt.args, stmt.options
    bound = o.get("bound", opts.bound)
    mod = script.module
    res: dict = {"verdict": "ok", "witnesses": None, "bound": None}
    if cmd == "gdim":
        rep = G.gdim(mod(args[0]), bound)
        res.update(rep.to_json())
        cert = rep.syzygy_step
        if cert is not None:
            res["witnesses"] = {"syzygy_order": rep.depth_R,
                                "gdim_zero": {"ok": cert.ok, "failure": _failure(cert)}}
    elif cmd == "depth":
        res["depth"] = G.depth(mod(args[0]))
    elif cmd == "grade":
        res["grade"] = _num(G.grade(mod(args[0])))
    elif cmd == "gorenstein":
        R = script.rings[args[0]].ring
        res.update(result=G.is_gorenstein(R), depth=G.ring_depth(R), dim=G.ring_dim(R))
        res["verdict"] = "gorenstein" if res["result"] else "not-gorenstein"
    elif cmd == "torsionless":
        t = A.is_k_torsionless(mod(args[0]), args[1])
        res.update(result=t.result, k=t.k, witness={"i": t.witness} if t.witness else None)
        res["verdict"] = "holds" if t.result else "fails"
        res["witnesses"] = res["witness"]
    elif cmd == "profile":
        p = G.ext_grade_profile(mod(args[0]), args[1])
        res.update(result=p.result, k=p.k, table=[[i, _num(g)] for i, g in p.table])
        res["verdict"] = "holds" if p.result else "fails"
    elif cmd in ("transpose", "dual", "minimalize", "presentation"):
        M = mod(args[0])
        X = {"transpose": A.transpose, "dual": FP.dual, "minimalize": FP.minimalize,
             "presentation": lambda m: m}[cmd](M)
        res.update(module_json(X, minimal=cmd != "presentation"))
    elif cmd == "ext":
        N = mod(args[2]) if len(args) > 2 else None
        res.update(module_json(FP.ext(args[0], mod(args[1]), N)))
    elif cmd == "hom":
        res.update(module_json(FP.hom(mod(args[0]), mod(args[1]))))
    elif cmd == "sigma":
        sg = A.sigma(mod(args[0]))
        res.update(torsionless=sg.torsionless, reflexive=sg.reflexive,
                   K=FP.hilbert_series(sg.K).to_json(), C=FP.hilbert_series(sg.C).to_json(),
                   cross_check=True)
        res["verdict"] = "reflexive" if sg.reflexive else ("torsionless" if sg.torsionless
                                                          else "not-torsionless")
    elif cmd == "reflexive":
        sg = A.sigma(mod(args[0]))
        res.update(result=sg.reflexive)
        res["verdict"] = "holds" if sg.reflexive else "fails"
    elif cmd == "pushforward":
        cert = A.universal_pushforward(mod(args[0]))
        res.update(n=cert.n, free_degrees=list(cert.free.degrees), ext1_vanishes=cert.ext1_vanishes,
                   N=module_json(cert.N))
    elif cmd == "embedding":
        emb = A.syzygy_embedding(mod(args[0]), args[1])
        res.update(result=emb.success, k=emb.k, failed_at=emb.failed_at,
                   ranks=[m.target.rank for m in emb.maps])
        res["verdict"] = "holds" if emb.success else "fails"
        res["witnesses"] = {"step": emb.failed_at} if not emb.success else None
    elif cmd == "betti":
        M = mod(args[0])
        length = o.get("length", M.ring.S.n + 1)
        res["betti"] = betti_json(FP.betti(M, length))
    elif cmd == "resolve":
        M = mod(args[0])
        r = FP.resolve(M, args[1])
        res.update(betti=betti_json(r.betti), complete=r.complete,
                   maps=[presentation_json(FP.FPModule(M.ring, d)) for d in r.maps])
    elif cmd == "hilbert":
        M = mod(args[0])
        hs = FP.hilbert_series(M)
        res.update(hilbert_series=hs.to_json(),
                   dimensions={str(k): v for k, v in hs.coefficients(0, 6).items()})
    elif cmd == "gdim_zero":
        cert = G.gdim_zero(mod(args[0]), args[1])
        res.update(result=cert.ok, witness=_failure(cert))
        res["verdict"] = "certified" if cert.ok else "refuted"
        res["bound"] = cert.bound
    elif cmd == "regular":
        res["result"] = G.regular_on(args[1], mod(args[0]))
        res["verdict"] = "holds" if res["result"] else "fails"
    elif cmd == "abf":
        M = mod(args[0])
        rep = G.gdim(M, bound)
        if not rep.finite:
            raise InputError("Gorenstein dimension is not known to be finite")
        res.update(result=G.abf_check(M, bound), g=rep.g, depth_M=rep.depth_M, depth_R=rep.depth_R)
        res["bound"] = rep.bound
    elif cmd == "dim":
        d = FP.krull_dim(mod(args[0]))
        res["dim"] = d
    elif cmd == "is_zero":
        res["result"] = FP.is_zero(mod(args[0]))
    return res


def _failure(cert):
    if cert.failure is None:
        return None
    return {"side": cert.failure[0], "i": cert.failure[1]}


def _statement(stmt, script: Script, opts: RunOptions) -> Tuple[dict, int]:
    t0 = time.perf_counter()
    if isinstance(stmt, Verify):
        try:
            run = theorem_suite(stmt.suite, stmt.options.get("seed", opts.seed),
                                stmt.options.get("count"))
            out = run.to_json()
            code = EXIT_OK if run.passed else EXIT_THEORY
        except InputError as exc:
            out = {"command": "verify", "suite": stmt.suite, "verdict": "error",
                   "error": {"kind": "input", "message": str(exc)}}
            code = EXIT_INPUT
    else:
        out = {"command": stmt.command,
               "inputs": {"statement": stmt.text,
                          "args": [a if isinstance(a, (int, str)) else str(a) for a in stmt.args],
                          "options": dict(sorted(stmt.options.items()))}}
        code = EXIT_OK
        try:
            out.update(_execute(stmt, script, opts))
        except TheoryViolation as exc:
            out.update(verdict="error", error={"kind": "theory-violation", "message": str(exc)})
            code = EXIT_THEORY
        except NotTorsionless as exc:
            out.update(verdict="error", error={"kind": "not-torsionless", "message": str(exc)})
            code = EXIT_INPUT
        except InputError as exc:
            out.update(verdict="error", error={"kind": "input", "message": str(exc)})
            code = EXIT_INPUT
    out["timings"] = {"seconds": round(time.perf_counter() - t0, 6)} if opts.timings else None
    return out, code


def run(script: Script, opts: Optional[RunOptions] = None) -> Tuple[List[dict], int]:
    """Execute compute/verify statements; results come back in script order."""
    opts = opts or RunOptions()
    stmts = [s for s in script.statements if isinstance(s, (Compute, Verify))]
    if opts.jobs > 1:
        with ThreadPoolExecutor(max_workers=opts.jobs) as pool:
            results = list(pool.map(lambda s: _statement(s, script, opts), stmts))
    else:
        results = [_statement(s, script, opts) for s in stmts]
    outs = [r for r, _ in results]
    codes = {c for _, c in results}
    code = EXIT_THEORY if EXIT_THEORY in codes else (EXIT_INPUT if EXIT_INPUT in codes else EXIT_OK)
    return outs, code


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "))


def _verbose(out: dict, stream):
    line = f"[{out.get('command')}] verdict={out.get('verdict')}"
    for key in ("g", "depth", "grade", "result", "dim"):
        if key in out:
            line += f" {key}={out[key]}"
    print(line, file=stream)
    if "betti" in out:
        table = out["betti"]
        print("  i | degree: count", file=stream)
        for i, row in table.items():
            print(f"  {i:>2}| " + "  ".join(f"{d}:{c}" for d, c in row.items()), file=stream)
    if out.get("command") == "verify":
        for tag, v in out["assertions"].items():
            print(f"  {tag:<14} {v['passed']}/{v['total']}", file=stream)
        if out.get("counterexample"):
            print("  counterexample:\n" + out["counterexample"], file=stream)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gdimkit",
                                 description="Gorenstein dimension and Auslander transposes "
                                             "for graded modules.")
    ap.add_argument("script", nargs="?", help="script file ('-' for standard input)")
    ap.add_argument("--bound", type=int, help="Ext bound B for gdim verdicts (default dim R + 2)")
    ap.add_argument("--field", help="override the coefficient field: QQ or Fp:<p>")
    ap.add_argument("--order", choices=("grevlex", "grlex"), help="monomial order")
    ap.add_argument("--seed", type=int, default=0, help="seed for families and suites")
    ap.add_argument("--suite", help=f"run a theorem suite ({', '.join(sorted(SUITES))})")
    ap.add_argument("--count", type=int, help="instances per suite or family")
    ap.add_argument("--family", help=f"print a generated family ({', '.join(FAMILIES)})")
    ap.add_argument("--verbose", action="store_true", help="human-readable tables on stderr")
    ap.add_argument("--timings", action="store_true", help="include wall-clock timings in JSON")
    ap.add_argument("--jobs", type=int, default=1, help="evaluate statements concurrently")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    opts = RunOptions(args.bound, args.seed, args.timings, args.verbose, max(1, args.jobs))
    out = sys.stdout
    try:
        field = field_from_name(args.field) if args.field else None
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.bound is not None and args.bound < 1:
        print("error: --bound must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    code = EXIT_OK
    if args.family:
        try:
            params = {"count": args.count} if args.count else {}
            frags = generate_family(args.family, params, args.seed)
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        for f in frags:
            print(f + "\n", file=out)
    if args.suite:
        try:
            vr = theorem_suite(args.suite, args.seed, args.count)
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        j = vr.to_json()
        j["timings"] = None
        print(dumps(j), file=out)
        if args.verbose:
            _verbose(j, sys.stderr)
        code = max(code, EXIT_OK if vr.passed else EXIT_THEORY)
    if args.script:
        try:
            text = sys.stdin.read() if args.script == "-" else open(args.script, encoding="utf-8").read()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        try:
            script = parse_script(text, field, args.order)
        except InputError as exc:   # includes positioned ScriptError
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        outs, c = run(script, opts)
        for o in outs:
            print(dumps(o), file=out)
            if args.verbose:
                _verbose(o, sys.stderr)
        code = c if c != EXIT_OK else code
    if not (args.script or args.suite or args.family):
        build_parser().print_usage(sys.stderr)
        return EXIT_INPUT
    return code


if __name__ == "__main__":
    sys.exit(main())
