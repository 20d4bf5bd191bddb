"""Parser for the line-oriented module-computation language.

    ring R = QQ[x,y,z]/(x^2, x*y);
    ring T = Fp:7[a,b] weights (1,2) / (a^2 - b);
    module M = coker R [[x, y], [z, 0]] target (0, 0) source (1, 1);
    module K = residue R;
    module D = transpose M;
    compute gdim M bound 5;
    compute regular M by y;
    verify abf seed 3;

Comments run from ``#`` to the end of the line.  Twists are optional and
inferred from entry degrees when the entries determine them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from ..errors import DegreeError, InputError
from ..fpmodules import FPModule, GradedRing
from ..polyalg import Field, GradedFreeModule, HomogeneousMatrix, PolyRing, Polynomial


class ScriptError(InputError):
    """Syntax or semantic error carrying a source position."""

    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg, self.line, self.col = msg, line, col


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>\*\*|[\[\](),;=/+\-*^:])
""", re.VERBOSE)


@dataclass(frozen=True)
class Tok:
    kind: str     # num, name, op, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Tok]:
    toks = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ScriptError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            toks.append(Tok(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    toks.append(Tok("eof", "", line, pos - start + 1))
    return toks


# -- script objects ------------------------------------------------------------

@dataclass
class RingDecl:
    name: str
    ring: GradedRing
    line: int


@dataclass
class ModuleDecl:
    name: str
    kind: str                 # coker, free, residue, dual, transpose, ext, hom, sum, quotient
    args: tuple
    ring_name: str
    line: int
    build: Callable[[], FPModule] = field(repr=False, default=None)


@dataclass
class Compute:
    command: str
    args: tuple
    options: Dict[str, int]
    text: str
    line: int


@dataclass
class Verify:
    suite: str
    options: Dict[str, int]
    line: int


@dataclass
class Script:
    rings: Dict[str, RingDecl]
    modules: Dict[str, ModuleDecl]
    statements: List[object]
    text: str = ""

    def module(self, name: str) -> FPModule:
        decl = self.modules[name]
        if not hasattr(decl, "_value"):
            decl._value = decl.build()
        return decl._value


COMMANDS = {
    # name: argument kinds (m = module, r = ring, i = integer); regular takes 'by <poly>'
    "gdim": "m", "depth": "m", "grade": "m", "gorenstein": "r", "torsionless": "mi",
    "profile": "mi", "transpose": "m", "dual": "m", "ext": "im", "hom": "mm", "sigma": "m",
    "pushforward": "m", "embedding": "mi", "betti": "m", "hilbert": "m", "resolve": "mi",
    "gdim_zero": "mi", "regular": "m", "abf": "m", "dim": "m", "minimalize": "m",
    "is_zero": "m", "reflexive": "m", "presentation": "m",
}
OPTIONS = {"bound", "seed", "count", "length"}


class _Parser:
    def __init__(self, text: str, field_override: Optional[Field], order: Optional[str]):
        self.toks = tokenize(text)
        self.i = 0
        self.text = text
        self.field_override = field_override
        self.order = order
        self.rings: Dict[str, RingDecl] = {}
        self.modules: Dict[str, ModuleDecl] = {}

    # token helpers
    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: Tok | None = None):
        t = tok or self.tok
        raise ScriptError(msg, t.line, t.col)

    def next(self) -> Tok:
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("op", "name"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Tok:
        if self.tok.text != text:
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def name(self) -> Tok:
        if self.tok.kind != "name":
            self.error(f"expected a name, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def integer(self) -> int:
        neg = self.accept("-")
        if self.tok.kind != "num":
            self.error("expected an integer")
        v = int(self.next().text)
        return -v if neg else v

    def int_tuple(self) -> Tuple[int, ...]:
        self.expect("(")
        out = []
        if not self.accept(")"):
            out.append(self.integer())
            while self.accept(","):
                out.append(self.integer())
            self.expect(")")
        return tuple(out)

    # top level
    def parse(self) -> Script:
        stmts = []
        while self.tok.kind != "eof":
            t = self.tok
            if self.accept("ring"):
                stmts.append(self.ring_decl(t))
            elif self.accept("module"):
                stmts.append(self.module_decl(t))
            elif self.accept("compute"):
                stmts.append(self.compute(t))
            elif self.accept("verify"):
                stmts.append(self.verify(t))
            else:
                self.error(f"expected 'ring', 'module', 'compute' or 'verify', found {t.text!r}")
            self.expect(";")
        return Script(self.rings, self.modules, stmts, self.text)

    def fresh(self, tok: Tok):
        if tok.text in self.rings or tok.text in self.modules:
            self.error(f"name {tok.text!r} already declared", tok)

    def ring_decl(self, start: Tok) -> RingDecl:
        nt = self.name()
        self.fresh(nt)
        self.expect("=")
        F = self.field_spec()
        self.expect("[")
        names = [self.name().text]
        while self.accept(","):
            names.append(self.name().text)
        self.expect("]")
        weights = None
        wt = self.tok
        if self.accept("weights"):
            weights = self.int_tuple()
            if len(weights) != len(names) or any(w <= 0 for w in weights):
                self.error("weights must be positive, one per variable", wt)
        if len(set(names)) != len(names):
            self.error("duplicate variable names", nt)
        S = PolyRing(names, self.field_override or F, weights, self.order or "grevlex")
        ideal = []
        if self.accept("/"):
            self.expect("(")
            while True:
                pt = self.tok
                f = self.poly(S)
                if f.degree == "inhomogeneous":
                    self.error("inhomogeneous generator", pt)
                if f.degree == 0:
                    self.error("the ideal contains a unit", pt)
                ideal.append(f)
                if not self.accept(","):
                    break
            self.expect(")")
        decl = RingDecl(nt.text, GradedRing(S, ideal, nt.text), start.line)
        self.rings[nt.text] = decl
        return decl

    def field_spec(self) -> Field:
        t = self.tok
        if self.accept("QQ"):
            return Field(0)
        if self.accept("Fp"):
            self.expect(":")
            p = self.integer()
        elif self.accept("GF"):
            self.expect("(")
            p = self.integer()
            self.expect(")")
        else:
            self.error("expected a field: QQ, Fp:<p> or GF(<p>)")
        try:
            return Field(p)
        except InputError as exc:
            self.error(str(exc), t)

    def ring_ref(self) -> Tuple[str, GradedRing]:
        t = self.name()
        if t.text not in self.rings:
            self.error(f"unknown ring {t.text!r}", t)
        return t.text, self.rings[t.text].ring

    def module_ref(self) -> ModuleDecl:
        t = self.name()
        if t.text not in self.modules:
            self.error(f"unknown module {t.text!r}", t)
        return self.modules[t.text]

    def module_decl(self, start: Tok) -> ModuleDecl:
        from .. import auslander, fpmodules
        nt = self.name()
        self.fresh(nt)
        self.expect("=")
        kt = self.name()
        kind = kt.text

        def val(d: ModuleDecl) -> FPModule:
            if not hasattr(d, "_value"):
                d._value = d.build()
            return d._value

        if kind == "coker":
            rname, R = self.ring_ref()
            M = self.matrix_module(R)
            decl = ModuleDecl(nt.text, kind, (), rname, start.line, lambda: M)
        elif kind == "free":
            rname, R = self.ring_ref()
            degs = self.int_tuple() if self.tok.text == "(" else (0,)
            decl = ModuleDecl(nt.text, kind, degs, rname, start.line, lambda: R.free(degs))
        elif kind == "residue":
            rname, R = self.ring_ref()
            decl = ModuleDecl(nt.text, kind, (), rname, start.line, R.residue_field)
        elif kind in ("dual", "transpose"):
            d = self.module_ref()
            fn = fpmodules.dual if kind == "dual" else auslander.transpose
            decl = ModuleDecl(nt.text, kind, (d.name,), d.ring_name, start.line,
                              lambda: fn(val(d)))
        elif kind == "ext":
            i = self.integer()
            if i < 0:
                self.error("Ext index must be non-negative", kt)
            d = self.module_ref()
            e = self.module_ref() if self.tok.kind == "name" else None
            if e is not None:
                self._same_ring(d, e, kt)
            decl = ModuleDecl(nt.text, kind, (i, d.name) + ((e.name,) if e else ()), d.ring_name,
                              start.line,
                              lambda: fpmodules.ext(i, val(d), val(e) if e else None))
        elif kind in ("hom", "sum"):
            d, e = self.module_ref(), self.module_ref()
            self._same_ring(d, e, kt)
            fn = fpmodules.hom if kind == "hom" else fpmodules.direct_sum
            decl = ModuleDecl(nt.text, kind, (d.name, e.name), d.ring_name, start.line,
                              lambda: fn(val(d), val(e)))
        elif kind == "quotient":
            d = self.module_ref()
            self.expect("by")
            R = self.rings[d.ring_name].ring
            pt = self.tok
            f = self.poly(R.S)
            if f.degree == "inhomogeneous":
                self.error("cannot reduce modulo an inhomogeneous element", pt)
            if f.degree == 0:
                self.error("cannot reduce modulo a unit", pt)
            qname = f"{d.ring_name}/({R.S.format_poly(f.terms)})"
            if qname not in self.rings:
                self.rings[qname] = RingDecl(qname, R.quotient([f]), start.line)
            decl = ModuleDecl(nt.text, kind, (d.name, str(f)), qname, start.line,
                              lambda: fpmodules.quotient_by_element(val(d), f))
        else:
            self.error(f"unknown module constructor {kind!r}", kt)
        self.modules[nt.text] = decl
        return decl

    def _same_ring(self, d: ModuleDecl, e: ModuleDecl, tok: Tok):
        if self.rings[d.ring_name].ring != self.rings[e.ring_name].ring:
            self.error("modules over different rings", tok)

    def matrix_module(self, R: GradedRing) -> FPModule:
        S = R.S
        mt = self.tok
        self.expect("[")
        rows = []
        starts = {}
        if self.tok.text == "[":
            while True:
                self.expect("[")
                row = []
                while True:
                    starts[(len(rows), len(row))] = self.tok
                    row.append(self.poly(S))
                    if not self.accept(","):
                        break
                self.expect("]")
                rows.append(row)
                if not self.accept(","):
                    break
        self.expect("]")
        tdeg = sdeg = None
        while self.tok.text in ("target", "source"):
            which = self.next().text
            vals = self.int_tuple()
            if which == "target":
                tdeg = vals
            else:
                sdeg = vals
        if any(len(r) != len(rows[0]) for r in rows):
            self.error("ragged matrix rows", mt)
        if tdeg is not None and len(tdeg) != len(rows):
            self.error("target degree count does not match the number of rows", mt)
        ncols = len(rows[0]) if rows else 0
        if sdeg is not None and len(sdeg) != ncols:
            self.error("source degree count does not match the number of columns", mt)
        if not rows:
            F0 = GradedFreeModule(tuple(tdeg or ()))
            return FPModule(R, HomogeneousMatrix.zero(S, GradedFreeModule(()), F0))
        for i, r in enumerate(rows):
            for j, p in enumerate(r):
                if p.degree == "inhomogeneous":
                    self.error(f"entry ({i},{j}) is inhomogeneous", starts[(i, j)])
        if tdeg is None:
            tdeg = self._infer_target(rows, sdeg, mt)
        try:
            u = HomogeneousMatrix.from_rows(S, rows, tdeg, sdeg)
            u.validate()
        except DegreeError as exc:
            self.error(f"{exc}; give explicit target/source twists", mt)
        return FPModule(R, u)

    def _infer_target(self, rows, sdeg, tok):
        if sdeg is None:
            return (0,) * len(rows)
        # with sources fixed, each nonzero entry pins its row
        tdeg = []
        for i, r in enumerate(rows):
            d = None
            for j, p in enumerate(r):
                if p.degree is not None:
                    cand = sdeg[j] - p.degree
                    if d is not None and cand != d:
                        self.error(f"row {i} has no consistent twist", tok)
                    d = cand
            tdeg.append(0 if d is None else d)
        return tuple(tdeg)

    def compute(self, start: Tok) -> Compute:
        ct = self.name()
        cmd = ct.text
        if cmd not in COMMANDS:
            self.error(f"unknown command {cmd!r}", ct)
        args = []
        for kind in COMMANDS[cmd]:
            if kind == "m":
                args.append(self.module_ref().name)
            elif kind == "r":
                args.append(self.ring_ref()[0])
            else:
                args.append(self.integer())
        if cmd == "ext" and self.tok.kind == "name" and self.tok.text not in OPTIONS:
            other = self.module_ref()
            self._same_ring(self.modules[args[1]], other, ct)
            args.append(other.name)
        if cmd == "hom":
            self._same_ring(self.modules[args[0]], self.modules[args[1]], ct)
        if cmd == "regular":
            self.expect("by")
            R = self.rings[self.modules[args[0]].ring_name].ring
            pt = self.tok
            f = self.poly(R.S)
            if f.degree == "inhomogeneous":
                self.error("inhomogeneous element", pt)
            args.append(f)
        options = self.options()
        return Compute(cmd, tuple(args), options, self.text_since(start), start.line)

    def options(self) -> Dict[str, int]:
        opts = {}
        while self.tok.kind == "name" and self.tok.text in OPTIONS:
            key = self.next().text
            opts[key] = self.integer()
        return opts

    def verify(self, start: Tok) -> Verify:
        st = self.name()
        return Verify(st.text, self.options(), start.line)

    def text_since(self, start: Tok) -> str:
        return " ".join(t.text for t in self.toks[self.toks.index(start):self.i])

    # polynomial expressions: sum of signed products of powers
    def poly(self, S: PolyRing) -> Polynomial:
        terms = self._expr(S)
        F = S.field
        out = {}
        for e, c in terms.items():
            try:
                v = F(c)
            except (ValueError, ZeroDivisionError):
                self.error(f"coefficient {c} is not defined in {F.name}")
            if v:
                out[e] = v
        return Polynomial(S, out)

    def _expr(self, S) -> Dict[tuple, Fraction]:
        neg = False
        if self.accept("-"):
            neg = True
        elif self.accept("+"):
            pass
        acc = self._term(S)
        if neg:
            acc = _scale(acc, Fraction(-1))
        while self.tok.text in ("+", "-"):
            sign = Fraction(1 if self.next().text == "+" else -1)
            acc = _add(acc, _scale(self._term(S), sign))
        return acc

    def _term(self, S) -> Dict[tuple, Fraction]:
        acc = self._power(S)
        while self.tok.text in ("*", "/"):
            op = self.next()
            rhs = self._power(S)
            if op.text == "*":
                acc = _mul(acc, rhs)
            else:
                if len(rhs) != 1 or next(iter(rhs)) != S.one_exps:
                    self.error("division only by nonzero constants", op)
                acc = _scale(acc, 1 / next(iter(rhs.values())))
        return acc

    def _power(self, S) -> Dict[tuple, Fraction]:
        base = self._atom(S)
        if self.tok.text in ("^", "**"):
            self.next()
            if self.tok.kind != "num":
                self.error("exponent must be a non-negative integer")
            k = int(self.next().text)
            out = {S.one_exps: Fraction(1)}
            for _ in range(k):
                out = _mul(out, base)
            return out
        return base

    def _atom(self, S) -> Dict[tuple, Fraction]:
        t = self.tok
        if t.kind == "num":
            self.next()
            v = Fraction(int(t.text))
            return {S.one_exps: v} if v else {}
        if t.kind == "name":
            if t.text not in S.names:
                self.error(f"unknown variable {t.text!r}")
            self.next()
            e = [0] * S.n
            e[S.names.index(t.text)] = 1
            return {tuple(e): Fraction(1)}
        if self.accept("("):
            v = self._expr(S)
            self.expect(")")
            return v
        if t.text == "-":
            self.next()
            return _scale(self._atom(S), Fraction(-1))
        self.error(f"expected a polynomial, found {t.text or 'end of input'!r}")


def _add(a, b):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _scale(a, s):
    return {e: c * s for e, c in a.items() if c * s}


def _mul(a, b):
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def parse_poly(text: str, S: PolyRing) -> Polynomial:
    """Parse one polynomial over S."""
    p = _Parser(text, S.field, None)
    f = p.poly(S)
    if p.tok.kind != "eof":
        p.error("trailing input after polynomial")
    return f


def parse_script(text: str, field: Optional[Field] = None, order: Optional[str] = None) -> Script:
    """Parse and check a script; raises ScriptError with line/column on the first error."""
    return _Parser(text, field, order).parse()


# -- pretty printing -----------------------------------------------------------

def format_ring(name: str, R: GradedRing) -> str:
    S = R.S
    s = f"ring {name} = {S.field.name}[{', '.join(S.names)}]"
    if any(w != 1 for w in S.weights):
        s += " weights (" + ", ".join(map(str, S.weights)) + ")"
    if R.ideal_gens:
        s += " / (" + ", ".join(S.format_poly(f) for f in R.ideal_gens) + ")"
    return s + ";"


def format_module(name: str, ring_name: str, M: FPModule) -> str:
    u = M.presentation
    S = u.ring
    rows = ", ".join("[" + ", ".join(S.format_poly(p.terms) for p in row) + "]" for row in u.rows())
    tgt = ", ".join(map(str, u.target.degrees))
    src = ", ".join(map(str, u.source.degrees))
    if not u.source.rank:
        return f"module {name} = free {ring_name} ({tgt});"
    return f"module {name} = coker {ring_name} [{rows}] target ({tgt}) source ({src});"
