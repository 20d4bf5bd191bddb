"""Theorem-verification harness: seeded families, tagged assertions, minimized counterexamples."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .. import auslander as A
from .. import fpmodules as FP
from .. import gdim as G
from ..errors import InputError, NotTorsionless, TheoryViolation
from ..groebner import buchberger, kernel_matrix, reduce_mod_ideal
from ..polyalg import GradedFreeModule, HomogeneousMatrix, vec_add, vec_times_poly
from ..truncation import TruncationOracle
from .dsl import format_module, parse_poly, parse_script
from .families import (GORENSTEIN_FIXTURES, NON_GORENSTEIN_FIXTURES, fixture_vars,
                       generate_family, random_module_fragment, random_poly_text)

ORACLE_TOP = 6


@dataclass
class Assertion:
    tag: str
    instance: int
    passed: bool
    detail: str = ""


@dataclass
class VerificationRun:
    suite: str
    seed: int
    instances: List[str] = field(default_factory=list)
    assertions: List[Assertion] = field(default_factory=list)
    counterexample: Optional[str] = None

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def tags(self) -> Dict[str, Tuple[int, int]]:
        """tag -> (passed, total)."""
        out: Dict[str, Tuple[int, int]] = {}
        for a in self.assertions:
            p, t = out.get(a.tag, (0, 0))
            out[a.tag] = (p + a.passed, t + 1)
        return out

    def to_json(self) -> dict:
        return {
            "command": "verify", "suite": self.suite, "seed": self.seed,
            "verdict": "pass" if self.passed else "fail",
            "instances": len(self.instances),
            "assertions": {t: {"passed": p, "total": n} for t, (p, n) in sorted(self.tags().items())},
            "failures": [{"tag": a.tag, "instance": a.instance, "detail": a.detail}
                         for a in self.assertions if not a.passed],
            "counterexample": self.counterexample,
        }


class _Runner:
    def __init__(self, run: VerificationRun):
        self.run = run

    def instance(self, fragment: str) -> int:
        self.run.instances.append(fragment)
        return len(self.run.instances) - 1

    def check(self, tag: str, idx: int, pred: Callable[[str], object]) -> bool:
        """Record ``pred(fragment)``; on failure keep a minimized counterexample."""
        fragment = self.run.instances[idx]
        ok, detail = _evaluate(pred, fragment)
        self.run.assertions.append(Assertion(tag, idx, ok, detail))
        if not ok and self.run.counterexample is None:
            small = minimize_counterexample(fragment, lambda f: not _evaluate(pred, f)[0])
            self.run.counterexample = f"# {tag}: {detail}\n{small}"
        return ok


def _evaluate(pred, fragment) -> Tuple[bool, str]:
    try:
        out = pred(fragment)
    except TheoryViolation as exc:
        return False, f"theory violation: {exc}"
    if isinstance(out, tuple):
        return bool(out[0]), str(out[1])
    return bool(out), ""


def minimize_counterexample(fragment: str, still_fails: Callable[[str], bool]) -> str:
    """Greedily drop relations, then generators, of each ``coker`` module while the failure persists."""
    changed = True
    while changed:
        changed = False
        for cand in _shrinks(fragment):
            try:
                fails = still_fails(cand)
            except (InputError, ValueError, IndexError, KeyError):
                fails = False
            if fails:
                fragment, changed = cand, True
                break
    return fragment


def _shrinks(fragment: str):
    try:
        script = parse_script(fragment)
    except InputError:
        return
    lines = fragment.splitlines()
    for ln, line in enumerate(lines):
        parts = line.split()
        if len(parts) < 4 or parts[0] != "module" or parts[3] != "coker":
            continue
        name = parts[1]
        u = script.module(name).presentation
        ring_name = parts[4]
        for j in range(u.source.rank):
            keep = [k for k in range(u.source.rank) if k != j]
            v = u.select_columns(keep)
            yield _replace(lines, ln, format_module(name, ring_name, FP.FPModule(script.module(name).ring, v)))
        if u.target.rank > 1:
            for i in range(u.target.rank):
                rows = [k for k in range(u.target.rank) if k != i]
                remap = {k: n for n, k in enumerate(rows)}
                cols = [{(remap[r], e): c for (r, e), c in col.items() if r != i} for col in u.columns]
                keepc = [j for j, c in enumerate(cols) if c]
                tgt = GradedFreeModule(tuple(u.target.degrees[k] for k in rows))
                src = GradedFreeModule(tuple(u.source.degrees[j] for j in keepc))
                v = HomogeneousMatrix(u.ring, src, tgt, [cols[j] for j in keepc])
                yield _replace(lines, ln, format_module(name, ring_name, FP.FPModule(script.module(name).ring, v)))


def _replace(lines, ln, new):
    out = list(lines)
    out[ln] = new
    return "\n".join(out)


def load(fragment: str, name: str = "M") -> FP.FPModule:
    return parse_script(fragment).module(name)


def _random_fragments(seed: int, count: int, rings="gorenstein", **kw) -> List[str]:
    params = {"count": count, "rings": rings}
    params.update(kw)
    return generate_family("random", params, seed)


def _gorenstein_specs():
    return list(GORENSTEIN_FIXTURES.values())


def _fragment_of(M: FP.FPModule, ring_spec: str) -> str:
    return f"ring R = {ring_spec};\n{format_module('M', 'R', M)}"


def _gdim0_fragments(seed: int, count: int) -> List[str]:
    """Modules of Gorenstein dimension 0: depth(R)-th syzygies of random modules."""
    out = [f"ring R = {GORENSTEIN_FIXTURES['H2']};\nmodule M = coker R [[x]];"]
    specs = _gorenstein_specs()
    rng = random.Random(f"gdim0:{seed}")
    i = 0
    while len(out) < count:
        spec = specs[i % len(specs)]
        i += 1
        frag = f"ring R = {spec};\n{random_module_fragment(rng, spec)}"
        M = load(frag)
        d = G.ring_depth(M.ring)
        K = FP.minimalize(G.syzygy_module(M, d))
        out.append(_fragment_of(K, spec))
    return out


# -- short exact sequences -----------------------------------------------------

SES_KINDS = ("syzygy", "multiply", "quotient", "split")


def build_ses(M: FP.FPModule, kind: str, var: int = 0) -> A.ShortExactSequence:
    """A short exact sequence with M in the middle (``split``/``quotient``) or on the right."""
    ring = M.ring
    S = ring.S
    u = M.presentation
    F0 = u.target
    one = S.field.one
    x = S.gens()[var % S.n]
    w = S.weights[var % S.n]
    if kind == "syzygy":
        Mm = FP.minimalize(M)
        u = Mm.presentation
        K = FP.FPModule(ring, kernel_matrix(u, ring.gb))
        L = ring.free(u.target.degrees)
        ident = HomogeneousMatrix.identity(S, u.target)
        return A.ShortExactSequence(K, L, Mm, u, ident)
    if kind == "multiply":
        shifted = FP.FPModule(ring, HomogeneousMatrix(
            S, GradedFreeModule(tuple(d + w for d in u.source.degrees)),
            GradedFreeModule(tuple(d + w for d in F0.degrees)), u.columns))
        L = FP.direct_sum(shifted, M)
        n = F0.rank
        cols = [{(i, e): c for e, c in x.terms.items()} for i in range(n)]
        cols += [{(i, S.one_exps): one} for i in range(n)]
        p = HomogeneousMatrix(S, L.presentation.target, F0, cols)
        K, P = FP.ModuleMap(L, M, p).kernel()
        return A.ShortExactSequence(K, L, M, P, p)
    if kind == "quotient":
        Fs = GradedFreeModule(tuple(d + w for d in F0.degrees))
        xI = HomogeneousMatrix(S, Fs, F0, [{(i, e): c for e, c in x.terms.items()}
                                           for i in range(F0.rank)])
        xM = FP.subquotient(ring, xI, u, minimal=False)
        Q = FP.FPModule(ring, u.hstack(xI))
        return A.ShortExactSequence(xM, M, Q, xI, HomogeneousMatrix.identity(S, F0))
    if kind == "split":
        return A.split_sequence(M, ring.free((1,)))
    raise InputError(f"unknown sequence kind {kind!r}")


# -- suites --------------------------------------------------------------------

def suite_prop5(r: _Runner, seed: int, count: int):
    for frag in _random_fragments(seed, count, "all"):
        idx = r.instance(frag)

        def prop5(f):
            M = load(f)
            A.sigma(M)   # raises on Hilbert-series disagreement
            D = A.transpose(M)
            Md = FP.dual(M)
            for i in range(3, 6):
                if FP.hilbert_series(FP.ext(i, D)) != FP.hilbert_series(FP.ext(i - 2, Md)):
                    return False, f"Ext^{i}(D(M)) vs Ext^{i - 2}(M*)"
            return True
        r.check("Prop5", idx, prop5)
        r.check("Oracle", idx, oracle_ext_check)


def oracle_ext_check(f: str):
    """Degreewise dimensions of Ext^i(M,R), i <= 2, Hom(M,k) and Ext^1(M,k) against the oracle."""
    M = load(f)
    R = M.ring
    O = TruncationOracle(R)
    res = FP.resolve(M, 3)
    maps = res.maps or [res.map(1)]    # a free M still needs F_0
    free = R.free()
    lo = -max([0] + [d for i in range(res.length + 1) for d in res.free_module(i).degrees]) - 1
    for i in range(3):
        hs = FP.hilbert_series(FP.ext(i, M)).coefficients(lo, ORACLE_TOP)
        for t in range(lo, ORACLE_TOP + 1):
            if hs[t] != O.ext_dim(maps, i, free.presentation, t):
                return False, f"Ext^{i}(M,R) in degree {t}"
    k = R.residue_field()
    for i, E in ((0, FP.hom(M, k)), (1, FP.ext(1, M, k))):
        hs = FP.hilbert_series(E).coefficients(lo, ORACLE_TOP)
        for t in range(lo, ORACLE_TOP + 1):
            if hs[t] != O.ext_dim(maps, i, k.presentation, t):
                return False, f"Ext^{i}(M,k) in degree {t}"
    hf = FP.hilbert_series(M).coefficients(0, ORACLE_TOP)
    if any(hf[t] != O.module_dim(M.presentation, t) for t in range(ORACLE_TOP + 1)):
        return False, "Hilbert function of M"
    return True


def suite_engine(r: _Runner, seed: int, count: int):
    rng = random.Random(f"engine:{seed}")
    for frag in _random_fragments(seed, count, "all", rows=2, cols=3):
        idx = r.instance(frag)
        salt = rng.randrange(10 ** 6)
        r.check("GB-membership", idx, lambda f, s=salt: engine_membership(f, s))
        r.check("Syzygy", idx, engine_syzygy)
        r.check("Resolution", idx, engine_resolution)


def engine_membership(f: str, salt: int):
    M = load(f)
    R, S, u = M.ring, M.ring.S, M.presentation
    O = TruncationOracle(R)
    rng = random.Random(salt)
    D = max(u.source.degrees) + 1
    v: dict = {}
    for col, s in zip(u.columns, u.source.degrees):
        p = parse_poly(random_poly_text(rng, S.names, D - s, 2), S)
        v = vec_add(v, vec_times_poly(col, p.terms, S.field), S.field)
    gb = buchberger(S, u.target, u.columns, R.gb, track=True)
    e = [0] * S.n
    e[rng.randrange(S.n)] = D - u.target.degrees[0]
    w = vec_add(v, {(0, tuple(e)): S.field.one}, S.field)
    for vec in (v, w):
        if not vec:
            continue
        if gb.contains(vec) != O.in_image(vec, u, D):
            return False, "membership disagrees with the oracle"
        if gb.contains(vec):
            a = gb.lift(vec)
            back: dict = {}
            for (j, ex), c in a.items():
                back = vec_add(back, u.columns[j], S.field, c, ex)
            diff = reduce_mod_ideal(vec_add(back, vec, S.field, -S.field.one), S, R.gb)
            if diff:
                return False, "lift does not reproduce the vector"
    return True


def engine_syzygy(f: str):
    M = load(f)
    R, u = M.ring, M.presentation
    O = TruncationOracle(R)
    K = kernel_matrix(u, R.gb)
    return all(O.generates_kernel(u, K, t) for t in range(ORACLE_TOP + 1))


def engine_resolution(f: str):
    M = load(f)
    R = M.ring
    O = TruncationOracle(R)
    res = FP.resolve(M, 3)
    if not res.is_complex():
        return False, "not a complex"
    for d in res.maps:
        for col in d.columns:
            if any(e == R.S.one_exps for (_, e) in col):
                return False, "unit entry in a minimal resolution"
    for i in range(len(res.maps) - 1):
        for t in range(ORACLE_TOP + 1):
            if not O.exact_at(res.maps[i + 1], res.maps[i], t):
                return False, f"not exact at F_{i + 1} in degree {t}"
    # surjectivity onto M is by construction; F_0 -> M has kernel im d_1
    return True


def suite_prop8(r: _Runner, seed: int, count: int):
    for k, frag in enumerate(generate_family("prop8", {"n": 3}, seed)):
        idx = r.instance(frag)

        def prop8(f, k=k):
            M = load(f)
            R = M.ring
            if not A.is_k_torsionless(M, k):
                return False, f"not {k}-torsionless"
            res = A.is_k_torsionless(M, k + 1)
            if res or res.witness != k + 1:
                return False, f"{k + 1}-torsionless test gave {res}"
            E = FP.ext(1, M)
            names = R.S.names
            RI = parse_script(f + "\nmodule Q = coker R [[" + ", ".join(names[:k + 1]) + "]];").module("Q")
            if FP.hilbert_series(E) != FP.hilbert_series(RI):
                return False, "Ext^1(M,R) and R/I differ"
            if G.grade(E) != k + 1:
                return False, f"grade(Ext^1) = {G.grade(E)}"
            return True
        r.check("Prop8", idx, prop8)

        def prop8_six(f, k=k):
            M = load(f)
            R, S = M.ring, M.ring.S
            u = M.presentation
            L = R.free(u.target.degrees)
            ses = A.ShortExactSequence(R.free(u.source.degrees), L, M, u,
                                       HomogeneousMatrix.identity(S, u.target))
            out = A.six_term(ses)
            if not out.exact:
                return False, f"six-term not exact at {out.exact_at}"
            E = FP.ext(1, M)
            return FP.hilbert_series(out.C) == FP.hilbert_series(E), "C vs Ext^1(M,R)"
        r.check("Lemma6", idx, prop8_six)


def suite_thm17(r: _Runner, seed: int, count: int):
    for name, spec in GORENSTEIN_FIXTURES.items():
        idx = r.instance(f"ring R = {spec};\nmodule M = residue R;")

        def thm17e(f):
            M = load(f)
            R = M.ring
            if not G.is_gorenstein(R):
                return False, "fixture not recognized as Gorenstein"
            rep = G.gdim(M)
            return rep.finite and rep.g == G.ring_dim(R), f"g = {rep.g}"
        r.check("Thm17e", idx, thm17e)
    for name, spec in NON_GORENSTEIN_FIXTURES.items():
        idx = r.instance(f"ring R = {spec};\nmodule M = residue R;")

        def thm17d(f):
            M = load(f)
            if G.is_gorenstein(M.ring):
                return False, "recognized as Gorenstein"
            rep = G.gdim(M, 6)
            nz = all(rep.ext_table[i] for i in range(1, 7))
            return rep.verdict == G.INFINITE and nz, rep.verdict
        r.check("Thm17d", idx, thm17d)


def suite_abf(r: _Runner, seed: int, count: int):
    for frag in _random_fragments(seed, count):
        idx = r.instance(frag)

        def abf(f):
            M = load(f)
            if FP.is_zero(M):
                return True
            rep = G.gdim(M)
            if not rep.finite:
                return False, "no finite verdict over a Gorenstein ring"
            dR = G.ring_depth(M.ring)
            # Ext-max read off independently of the report
            gmax = max((t for t in range(dR + 3) if not FP.is_zero(FP.ext(t, M))), default=0)
            if gmax != rep.g:
                return False, f"Ext-max {gmax} vs g {rep.g}"
            return rep.g + G.depth(M) == dR, f"{rep.g} + {G.depth(M)} vs {dR}"
        r.check("ABF", idx, abf)


def suite_cor21(r: _Runner, seed: int, count: int):
    for frag in _random_fragments(seed, count, GORENSTEIN_FIXTURES["A3"], rows=3, cols=4):
        idx = r.instance(frag)

        def cor21(f):
            M = load(f)
            if FP.is_zero(M):
                return True
            pd = FP.resolve(M, M.ring.S.n + 1).projective_dimension()
            rep = G.gdim(M)
            return rep.finite and rep.g == pd, f"g = {rep.g}, pd = {pd}"
        r.check("Cor21", idx, cor21)


def _ses_instances(seed: int, count: int, gdim0: bool = False):
    rng = random.Random(f"ses:{seed}:{gdim0}")
    frags = _gdim0_fragments(seed, count) if gdim0 else _random_fragments(seed + 17, count)
    for i, frag in enumerate(frags):
        yield frag, SES_KINDS[i % len(SES_KINDS)], rng.randrange(3)


def _gd(M):
    if FP.is_zero(M):
        return -1   # the zero module never raises a max
    rep = G.gdim(M)
    if not rep.finite:
        raise TheoryViolation("infinite verdict over a Gorenstein ring")
    return rep.g


def suite_thm18(r: _Runner, seed: int, count: int):
    for frag, kind, var in _ses_instances(seed, count):
        idx = r.instance(frag)

        def thm18(f, kind=kind, var=var):
            ses = build_ses(load(f), kind, var)
            bad = ses.validate()
            if bad:
                return False, "; ".join(bad)
            gK, gL, gM = _gd(ses.M1), _gd(ses.M), _gd(ses.M2)
            checks = [gK <= max(gL, gM - 1), gL <= max(gK, gM), gM <= 1 + max(gK, gL)]
            return all(checks), f"{kind}: gK={gK} gL={gL} gM={gM}"
        r.check("Thm18", idx, thm18)


def suite_lemma19(r: _Runner, seed: int, count: int):
    for frag, kind, var in _ses_instances(seed, count, gdim0=True):
        # M is on the right except for split/quotient, where it is in the middle
        kind = "syzygy" if kind in ("split", "quotient") else kind
        idx = r.instance(frag)

        def lemma19(f, kind=kind, var=var):
            M = load(f)
            if _gd(M) > 0:
                return False, "base module does not have gdim 0"
            ses = build_ses(M, kind, var)
            gK, gL = _gd(ses.M1), _gd(ses.M)
            return gK == gL or (gK == -1 and gL == 0 and FP.is_zero(ses.M1)), f"gK={gK} gL={gL}"
        r.check("Lemma19", idx, lemma19)


def suite_thm40(r: _Runner, seed: int, count: int):
    for frag in _random_fragments(seed + 40, count, rows=2, cols=3):
        idx = r.instance(frag)

        def thm40(f):
            M = load(f)
            for k in range(3):
                a = bool(A.is_k_torsionless(M, k))
                b = bool(G.ext_grade_profile(M, k))
                if a != b:
                    return False, f"k={k}: torsionless {a}, profile {b}"
            return True
        r.check("Thm40", idx, thm40)


def suite_cor24(r: _Runner, seed: int, count: int):
    for frag in _gdim0_fragments(seed + 24, count):
        idx = r.instance(frag)

        def cor24(f):
            M = load(f)
            if _gd(M) > 0:
                return False, "not gdim 0"
            cert = A.universal_pushforward(M)
            gN = _gd(cert.N)
            return gN <= 0, f"gdim(N) = {gN}"
        r.check("Cor24", idx, cor24)


_REGULAR_CANDIDATES = ("y", "x", "z", "x + y", "y + z", "x - y", "x + y + z")


def _pick_regular(M):
    S = M.ring.S
    for text in _REGULAR_CANDIDATES:
        try:
            x = parse_poly(text, S)
        except InputError:
            continue
        if G.regular_on(x, M.ring.free()) and G.regular_on(x, M):
            return x
    return None


def suite_cor32(r: _Runner, seed: int, count: int):
    specs = [s for s in _gorenstein_specs()]
    for frag in _random_fragments(seed + 32, count, specs):
        idx = r.instance(frag)

        def cor32(f):
            M = load(f)
            if FP.is_zero(M):
                return True
            x = _pick_regular(M)
            if x is None:
                return True    # depth 0: hypothesis not met
            Mb = FP.quotient_by_element(M, x)
            g1 = _gd(M)
            g2 = _gd(Mb)
            return g1 == g2, f"x = {x}: gdim {g1} over R, {g2} over R/x"
        r.check("Cor32", idx, cor32)


def suite_cor43(r: _Runner, seed: int, count: int):
    for frag in generate_family("reduced", {"count": count}, seed):
        idx = r.instance(frag)
        r.check("Cor43", idx, lambda f: A.sigma(load(f)).reflexive)


def suite_cor26(r: _Runner, seed: int, count: int):
    specs = [GORENSTEIN_FIXTURES["CI2"]] + list(NON_GORENSTEIN_FIXTURES.values())
    for frag in _random_fragments(seed + 26, count, specs):
        idx = r.instance(frag)

        def cor26(f):
            M = load(f)
            if G.ring_depth(M.ring) != 0:
                return False, "fixture has positive depth"
            rep = G.gdim(M, 4)
            return (not rep.finite) or rep.g == 0, f"verdict {rep.verdict} g={rep.g}"
        r.check("Cor26", idx, cor26)


def suite_cor30(r: _Runner, seed: int, count: int):
    for frag in _random_fragments(seed + 30, count):
        idx = r.instance(frag)

        def cor30(f):
            M = load(f)
            if FP.is_zero(M) or not G.gdim(M).finite:
                return True
            return bool(G.ext_grade_profile(M, 0))
        r.check("Cor30", idx, cor30)


def suite_exercise(r: _Runner, seed: int, count: int):
    rng = random.Random(f"exercise:{seed}")
    kos = generate_family("koszul", {"count": count}, seed)
    for frag in kos:
        spec = GORENSTEIN_FIXTURES["A3"]
        frag = frag + "\n" + random_module_fragment(rng, spec, "N")
        idx = r.instance(frag)

        def exercise(f):
            sc = parse_script(f)
            M, N = sc.module("M"), sc.module("N")
            gp = G.grade(M)
            if FP.is_zero(N) or gp == G.INF:
                return True
            l = _gd(N)
            if not 0 < gp or not l < gp:
                return True
            for i in range(int(gp - l)):
                if not FP.is_zero(FP.ext(i, M, N)):
                    return False, f"Ext^{i}(M,N) != 0 with grade {gp}, gdim(N) {l}"
            return True
        r.check("Exercise", idx, exercise)


def suite_lemma6(r: _Runner, seed: int, count: int):
    for frag, kind, var in _ses_instances(seed + 6, count):
        idx = r.instance(frag)

        def lemma6(f, kind=kind, var=var):
            ses = build_ses(load(f), kind, var)
            out = A.six_term(ses)
            if not out.exact:
                return False, f"{kind}: exactness {out.exact_at}"
            if kind == "split" and not FP.is_zero(out.C):
                return False, "split sequence with C != 0"
            return True
        r.check("Lemma6", idx, lemma6)

        def prop8(part, f, kind=kind, var=var):
            ses = build_ses(load(f), kind, var)
            gC = G.grade(A.six_term(ses).C)
            tl = A.is_k_torsionless
            for k in (1, 2):
                if part == "a":
                    hyp = tl(ses.M1, k) and tl(ses.M2, k) and gC >= k
                    concl = ses.M
                elif part == "b":
                    hyp = tl(ses.M, k) and tl(ses.M2, k - 1) and gC >= k - 1
                    concl = ses.M1
                else:
                    hyp = tl(ses.M1, k + 1) and tl(ses.M, k) and gC >= k + 1
                    concl = ses.M2
                if hyp and not tl(concl, k):
                    return False, f"{kind}, k={k}"
            return True
        for part in "abc":
            r.check(f"Prop8{part}", idx, lambda f, part=part: prop8(part, f))


def suite_prop4(r: _Runner, seed: int, count: int):
    for frag in _random_fragments(seed + 4, count, "all"):
        idx = r.instance(frag)

        def prop4(f):
            M = load(f)
            M2 = _padded_presentation(M)
            D1, D2 = A.transpose(M), A.transpose(M2)
            if FP.hilbert_series(D1) != FP.hilbert_series(D2):
                return False, "Hilbert series of transposes differ"
            return FP.betti(D1, 3) == FP.betti(D2, 3), "Betti tables of transposes differ"
        r.check("Prop4", idx, prop4)


def _padded_presentation(M: FP.FPModule) -> FP.FPModule:
    """Same module: a duplicated generator (killed by a unit relation) and a redundant relation."""
    u = M.presentation
    S = u.ring
    F = S.field
    n = u.target.rank
    tgt = GradedFreeModule(u.target.degrees + (u.target.degrees[0],))
    cols = [dict(c) for c in u.columns]
    degs = list(u.source.degrees)
    cols.append({(n, S.one_exps): F.one, (0, S.one_exps): -F.one})
    degs.append(u.target.degrees[0])
    if len(u.columns) >= 2 and u.source.degrees[0] == u.source.degrees[1]:
        cols.append(vec_add(u.columns[0], u.columns[1], F))
        degs.append(u.source.degrees[0])
    cols = [c for c in cols if c] or cols
    keep = [j for j, c in enumerate(cols) if c]
    return FP.FPModule(M.ring, HomogeneousMatrix(S, GradedFreeModule(tuple(degs[j] for j in keep)),
                                                  tgt, [cols[j] for j in keep]))


def suite_involution(r: _Runner, seed: int, count: int):
    for frag in _random_fragments(seed + 3, count, "all"):
        idx = r.instance(frag)

        def involution(f):
            M = load(f)
            DD = A.transpose(A.transpose(M, minimal=False), minimal=False)
            return DD.presentation == M.presentation
        r.check("Remark3", idx, involution)


SUITES: Dict[str, Tuple[Callable, int]] = {
    "prop5": (suite_prop5, 30),
    "prop8": (suite_prop8, 3),
    "thm17": (suite_thm17, 6),
    "abf": (suite_abf, 30),
    "cor21": (suite_cor21, 20),
    "thm18": (suite_thm18, 20),
    "lemma19": (suite_lemma19, 12),
    "thm40": (suite_thm40, 20),
    "cor24": (suite_cor24, 10),
    "cor32": (suite_cor32, 15),
    "cor43": (suite_cor43, 10),
    "cor26": (suite_cor26, 12),
    "cor30": (suite_cor30, 15),
    "exercise": (suite_exercise, 12),
    "lemma6": (suite_lemma6, 16),
    "prop4": (suite_prop4, 12),
    "involution": (suite_involution, 12),
    "engine": (suite_engine, 100),
}


def theorem_suite(selection: str, seed: int = 0, count: Optional[int] = None) -> VerificationRun:
    """Run one named suite; identical (selection, seed, count) give identical runs."""
    if selection not in SUITES:
        raise InputError(f"unknown suite {selection!r}; choose from {', '.join(sorted(SUITES))}")
    fn, default = SUITES[selection]
    run = VerificationRun(selection, seed)
    fn(_Runner(run), seed, default if count is None else count)
    return run
