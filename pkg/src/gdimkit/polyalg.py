"""Exact coefficient fields, monomials, homogeneous polynomials and graded matrices.

Module elements ("vectors") are plain dicts mapping ``(position, exponents)``
to a nonzero coefficient; polynomials are dicts mapping ``exponents`` to a
coefficient.  The public wrappers :class:`Polynomial` and
:class:`HomogeneousMatrix` are treated as immutable once built.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

import gmpy2

from .errors import DegreeError, InputError

Exps = Tuple[int, ...]
Term = Tuple[int, Exps]
Poly = Dict[Exps, object]
Vec = Dict[Term, object]


def _is_prime(p: int) -> bool:
    return p >= 2 and bool(gmpy2.is_prime(p))


class Field:
    """QQ (``p == 0``, elements are ``gmpy2.mpq``) or GF(p) (elements are ints mod p)."""

    def __init__(self, p: int = 0):
        if p and not _is_prime(p):
            raise InputError(f"characteristic {p} is not prime")
        self.p = p
        self.zero = self(0)
        self.one = self(1)

    @property
    def name(self) -> str:
        return f"Fp:{self.p}" if self.p else "QQ"

    def __call__(self, x):
        if self.p:
            if isinstance(x, (Fraction, type(gmpy2.mpq()))):
                num, den = int(x.numerator), int(x.denominator)
                if den % self.p == 0:
                    raise ZeroDivisionError(f"denominator {den} vanishes mod {self.p}")
                return num * pow(den, -1, self.p) % self.p
            return int(x) % self.p
        if isinstance(x, Fraction):
            return gmpy2.mpq(x.numerator, x.denominator)
        return gmpy2.mpq(x)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, self.p - 2, self.p)
        return 1 / a

    def to_str(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"Field({self.name})"


QQ = Field(0)


def field_from_name(name: str) -> Field:
    """Parse ``QQ`` or ``Fp:<p>``."""
    if name == "QQ":
        return QQ
    if name.startswith("Fp:"):
        try:
            return Field(int(name[3:]))
        except ValueError:
            raise InputError(f"bad field {name!r}") from None
    raise InputError(f"unknown field {name!r}; expected QQ or Fp:<p>")


# -- monomials ---------------------------------------------------------------

def mono_mul(a: Exps, b: Exps) -> Exps:
    return tuple(map(operator.add, a, b))


def mono_div(a: Exps, b: Exps) -> Exps:
    return tuple(map(operator.sub, a, b))


def mono_divides(a: Exps, b: Exps) -> bool:
    return all(map(operator.le, a, b))


def mono_lcm(a: Exps, b: Exps) -> Exps:
    return tuple(map(max, a, b))


def monomials_of_degree(d: int, weights: Sequence[int]) -> list:
    """All exponent vectors of weighted degree ``d``, in a fixed order."""
    n = len(weights)
    out = []

    def rec(i, rest, acc):
        if i == n - 1:
            if rest % weights[i] == 0:
                out.append(tuple(acc) + (rest // weights[i],))
            return
        for e in range(rest // weights[i], -1, -1):
            rec(i + 1, rest - e * weights[i], acc + [e])

    if d < 0:
        return []
    if n == 0:
        return [()] if d == 0 else []
    rec(0, d, [])
    return out


class MonomialOrder:
    """Graded reverse lexicographic or graded lexicographic order on monomials,
    extended to free modules position-over-term with lower positions first.

    ``key`` maps an exponent vector to a tuple whose natural ordering is the
    monomial order; larger keys are larger monomials.
    """

    KINDS = ("grevlex", "grlex")

    def __init__(self, kind: str = "grevlex", weights: Sequence[int] = (1,)):
        if kind not in self.KINDS:
            raise InputError(f"unknown monomial order {kind!r}")
        if any(w <= 0 for w in weights):
            raise InputError("variable weights must be positive integers")
        self.kind = kind
        self.weights = tuple(int(w) for w in weights)
        self._cache: dict = {}

    def degree(self, e: Exps) -> int:
        return sum(map(operator.mul, e, self.weights))

    def key(self, e: Exps):
        k = self._cache.get(e)
        if k is None:
            if len(e) != len(self.weights):
                raise DegreeError("monomial has the wrong number of variables")
            if self.kind == "grevlex":
                k = (self.degree(e),) + tuple(-x for x in reversed(e))
            else:
                k = (self.degree(e),) + tuple(e)
            self._cache[e] = k
        return k

    def term_key(self, t: Term):
        return (-t[0], self.key(t[1]))

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and other.kind == self.kind
                and other.weights == self.weights)

    def __hash__(self):
        return hash((self.kind, self.weights))


def compare_monomials(a: Exps, b: Exps, order: MonomialOrder) -> int:
    """Return -1, 0 or 1 as ``a`` is smaller than, equal to or larger than ``b``."""
    if len(a) != len(b):
        raise DegreeError("monomials live in different numbers of variables")
    ka, kb = order.key(tuple(a)), order.key(tuple(b))
    return (ka > kb) - (ka < kb)


# -- polynomial rings --------------------------------------------------------

class PolyRing:
    """The ambient ring S = k[x_1..x_n] with positive integer weights."""

    def __init__(self, names: Sequence[str], field: Field = QQ,
                 weights: Sequence[int] | None = None, order: str = "grevlex"):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise InputError("duplicate variable names")
        self.field = field
        self.weights = tuple(weights) if weights is not None else (1,) * len(self.names)
        if len(self.weights) != len(self.names):
            raise InputError("one weight per variable expected")
        self.order = MonomialOrder(order, self.weights)
        self.n = len(self.names)
        self.one_exps: Exps = (0,) * self.n

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and other.names == self.names
                and other.field == self.field and other.weights == self.weights
                and other.order.kind == self.order.kind)

    def __hash__(self):
        return hash((self.names, self.field, self.weights, self.order.kind))

    def __repr__(self):
        return f"PolyRing({self.field.name}[{','.join(self.names)}])"

    def var(self, name: str) -> "Polynomial":
        i = self.names.index(name)
        e = [0] * self.n
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def gens(self):
        return [self.var(x) for x in self.names]

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {self.one_exps: c} if c else {})

    def mono_degree(self, e: Exps) -> int:
        return sum(map(operator.mul, e, self.weights))

    def poly_degree(self, p: Poly):
        """Common weighted degree of ``p``, ``None`` for zero; raises on inhomogeneous."""
        degs = {self.mono_degree(e) for e in p}
        if not degs:
            return None
        if len(degs) > 1:
            raise DegreeError("inhomogeneous polynomial")
        return degs.pop()

    def format_mono(self, e: Exps) -> str:
        parts = []
        for name, k in zip(self.names, e):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts)

    def format_poly(self, p: Poly) -> str:
        if not p:
            return "0"
        out = []
        for e in sorted(p, key=self.order.key, reverse=True):
            c = p[e]
            m = self.format_mono(e)
            neg = False
            if not self.field.p and c < 0:
                neg, c = True, -c
            cs = self.field.to_str(c)
            if m:
                s = m if cs == "1" else f"{cs}*{m}"
            else:
                s = cs
            if out:
                out.append(("- " if neg else "+ ") + s)
            else:
                out.append(("-" if neg else "") + s)
        return " ".join(out)


def poly_add(a: Poly, b: Poly, F: Field, scale=None) -> Poly:
    """``a + scale*b`` as a new dict."""
    p = F.p
    out = dict(a)
    for e, c in b.items():
        if scale is not None:
            c = c * scale
        v = out.get(e, 0) + c
        if p:
            v %= p
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def poly_mul(a: Poly, b: Poly, F: Field) -> Poly:
    p = F.p
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = mono_mul(ea, eb)
            v = out.get(e, 0) + ca * cb
            if p:
                v %= p
            out[e] = v
    return {e: c for e, c in out.items() if c}


class Polynomial:
    """An immutable sparse polynomial in a :class:`PolyRing`."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Poly):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}

    @property
    def degree(self):
        """Weighted degree, ``None`` for zero, ``"inhomogeneous"`` otherwise."""
        try:
            return self.ring.poly_degree(self.terms)
        except DegreeError:
            return "inhomogeneous"

    def is_homogeneous(self) -> bool:
        return self.degree != "inhomogeneous"

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        """(coefficient, exponents) pairs, strictly descending in the ring's order."""
        order = self.ring.order
        return [(self.terms[e], e) for e in sorted(self.terms, key=order.key, reverse=True)]

    def lead(self):
        return self.sorted_terms()[0] if self.terms else None

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise InputError("polynomials from different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        return Polynomial(self.ring, poly_add(self.terms, other.terms, self.ring.field))

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Polynomial(self.ring, {e: F(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        return Polynomial(self.ring, poly_add(self.terms, other.terms, self.ring.field,
                                              scale=self.ring.field(-1)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return Polynomial(self.ring, poly_mul(self.terms, other.terms, self.ring.field))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return other.ring == self.ring and other.terms == self.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        return self.ring.format_poly(self.terms)

    def __repr__(self):
        return f"Polynomial({self})"


# -- graded free modules and matrices ----------------------------------------

@dataclass(frozen=True)
class GradedFreeModule:
    """A free module with basis elements in the given degrees.

    ``R(-d)`` contributes a basis element of degree ``d``.
    """

    degrees: Tuple[int, ...] = ()

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def dual(self) -> "GradedFreeModule":
        return GradedFreeModule(tuple(-d for d in self.degrees))

    def __add__(self, other: "GradedFreeModule") -> "GradedFreeModule":
        return GradedFreeModule(self.degrees + other.degrees)


def vec_degree(v: Vec, degs: Sequence[int], ring: PolyRing):
    """Degree of a homogeneous module element, ``None`` for zero."""
    ds = {ring.mono_degree(e) + degs[i] for (i, e) in v}
    if not ds:
        return None
    if len(ds) > 1:
        raise DegreeError("inhomogeneous module element")
    return ds.pop()


def vec_add(a: Vec, b: Vec, F: Field, scale=None, mono: Exps | None = None, shift: int = 0) -> Vec:
    """``a + scale * mono * b`` with positions of ``b`` shifted by ``shift``."""
    p = F.p
    out = dict(a)
    for (i, e), c in b.items():
        if scale is not None:
            c = c * scale
            if p:
                c %= p
        if mono is not None:
            e = mono_mul(e, mono)
        t = (i + shift, e)
        v = out.get(t, 0) + c
        if p:
            v %= p
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def vec_times_poly(v: Vec, f: Poly, F: Field) -> Vec:
    out: Vec = {}
    for e, c in f.items():
        out = vec_add(out, v, F, scale=c, mono=e)
    return out


def vec_column(v: Vec, i: int) -> Poly:
    return {e: c for (j, e), c in v.items() if j == i}


class HomogeneousMatrix:
    """A degree-preserving map ``source -> target`` of graded free modules.

    Stored column-wise: ``columns[j]`` is the image of the j-th source basis
    element as a vector in ``target``.  Entry (i, j) has degree
    ``source.degrees[j] - target.degrees[i]`` or is zero.
    """

    __slots__ = ("ring", "source", "target", "columns")

    def __init__(self, ring: PolyRing, source: GradedFreeModule, target: GradedFreeModule,
                 columns: Sequence[Vec], check: bool = True):
        self.ring = ring
        self.source = source
        self.target = target
        self.columns = tuple(columns)
        if check:
            self.validate()

    def validate(self):
        if len(self.columns) != self.source.rank:
            raise DegreeError("column count does not match the source rank")
        tdeg = self.target.degrees
        for j, col in enumerate(self.columns):
            sd = self.source.degrees[j]
            for (i, e), c in col.items():
                if not 0 <= i < self.target.rank:
                    raise DegreeError("matrix entry outside the target rank")
                if not c:
                    raise DegreeError("stored zero coefficient")
                if self.ring.mono_degree(e) != sd - tdeg[i]:
                    raise DegreeError(
                        f"entry ({i},{j}) is not homogeneous of degree {sd - tdeg[i]}")

    @classmethod
    def from_rows(cls, ring: PolyRing, rows: Sequence[Sequence], target_degrees=None,
                  source_degrees=None) -> "HomogeneousMatrix":
        """Build from a row-major list of entries (Polynomials or constants).

        Missing degrees are inferred: target defaults to zeros, each source
        degree from the first nonzero entry of its column.
        """
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise InputError("ragged matrix rows")
        ent = [[ring.const(x) if not isinstance(x, Polynomial) else x for x in r] for r in rows]
        tdeg = tuple(target_degrees) if target_degrees is not None else (0,) * nrows
        if len(tdeg) != nrows:
            raise InputError("target degree count does not match row count")
        if source_degrees is None:
            sdeg = []
            for j in range(ncols):
                d = None
                for i in range(nrows):
                    pd = ent[i][j].degree
                    if pd == "inhomogeneous":
                        raise DegreeError(f"entry ({i},{j}) is inhomogeneous")
                    if pd is not None:
                        cand = pd + tdeg[i]
                        if d is not None and cand != d:
                            raise DegreeError(f"column {j} has no consistent degree")
                        d = cand
                if d is None:
                    raise DegreeError(f"column {j} is zero; its degree must be given")
                sdeg.append(d)
            sdeg = tuple(sdeg)
        else:
            sdeg = tuple(source_degrees)
        cols = []
        for j in range(ncols):
            col = {}
            for i in range(nrows):
                for e, c in ent[i][j].terms.items():
                    col[(i, e)] = c
            cols.append(col)
        return cls(ring, GradedFreeModule(sdeg), GradedFreeModule(tdeg), cols)

    @classmethod
    def identity(cls, ring: PolyRing, F: GradedFreeModule) -> "HomogeneousMatrix":
        one = ring.field.one
        return cls(ring, F, F, [{(i, ring.one_exps): one} for i in range(F.rank)], check=False)

    @classmethod
    def zero(cls, ring: PolyRing, source: GradedFreeModule, target: GradedFreeModule):
        return cls(ring, source, target, [{} for _ in range(source.rank)], check=False)

    @property
    def shape(self):
        return (self.target.rank, self.source.rank)

    def entry(self, i: int, j: int) -> Polynomial:
        return Polynomial(self.ring, vec_column(self.columns[j], i))

    def rows(self):
        return [[self.entry(i, j) for j in range(self.source.rank)] for i in range(self.target.rank)]

    def is_zero(self) -> bool:
        return not any(self.columns)

    def __eq__(self, other):
        return (isinstance(other, HomogeneousMatrix) and self.ring == other.ring
                and self.source == other.source and self.target == other.target
                and self.columns == other.columns)

    def __repr__(self):
        rows = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows())
        return f"HomogeneousMatrix([{rows}], target={self.target.degrees}, source={self.source.degrees})"

    def select_columns(self, idx: Iterable[int]) -> "HomogeneousMatrix":
        idx = list(idx)
        return HomogeneousMatrix(self.ring, GradedFreeModule(tuple(self.source.degrees[j] for j in idx)),
                                 self.target, [self.columns[j] for j in idx], check=False)

    def hstack(self, other: "HomogeneousMatrix") -> "HomogeneousMatrix":
        if other.target != self.target:
            raise DegreeError("hstack: targets differ")
        return HomogeneousMatrix(self.ring, self.source + other.source, self.target,
                                 self.columns + other.columns, check=False)


def matrix_compose(f: HomogeneousMatrix, g: HomogeneousMatrix) -> HomogeneousMatrix:
    """``f o g``: first ``g``, then ``f``."""
    if g.target != f.source:
        raise DegreeError("matrix_compose: g.target must equal f.source")
    F = f.ring.field
    cols = []
    for gcol in g.columns:
        out: Vec = {}
        for (k, e), c in gcol.items():
            out = vec_add(out, f.columns[k], F, scale=c, mono=e)
        cols.append(out)
    return HomogeneousMatrix(f.ring, g.source, f.target, cols, check=False)


def matrix_transpose(u: HomogeneousMatrix) -> HomogeneousMatrix:
    """Matrix of the dual map in the dual bases; degrees are negated."""
    cols = [dict() for _ in range(u.target.rank)]
    for j, col in enumerate(u.columns):
        for (i, e), c in col.items():
            cols[i][(j, e)] = c
    return HomogeneousMatrix(u.ring, u.target.dual(), u.source.dual(), cols, check=False)


def block_diagonal(a: HomogeneousMatrix, b: HomogeneousMatrix) -> HomogeneousMatrix:
    F = a.ring.field
    shift = a.target.rank
    cols = list(a.columns) + [vec_add({}, c, F, shift=shift) for c in b.columns]
    return HomogeneousMatrix(a.ring, a.source + b.source, a.target + b.target, cols, check=False)
