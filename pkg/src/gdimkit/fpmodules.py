"""Finitely presented graded modules over R = S/I and their homological toolkit.

A module is ``coker(u: F1 -> F0)`` over R.  Everything here is computed at
the irrelevant maximal ideal: "minimal" means all presentation entries lie in
(x_1..x_n), and isomorphism is only ever certified through surrogates
(Hilbert series, graded Betti numbers).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Sequence, Tuple

from .errors import DegreeError, InputError
from .groebner import (buchberger, ideal_basis, kernel_matrix, reduce_mod_ideal)
from .polyalg import (GradedFreeModule, HomogeneousMatrix, PolyRing, Polynomial, Vec,
                      block_diagonal, matrix_compose, matrix_transpose, mono_divides,
                      mono_lcm, mono_div, vec_add, vec_degree, vec_times_poly)

NEG_INF = "-inf"


class _Cache:
    """Fill-once cache: the first stored value wins, so all readers agree."""

    def __init__(self):
        self._lock = threading.RLock()
        self._data: dict = {}

    def get(self, key, compute):
        try:
            return self._data[key]
        except KeyError:
            pass
        value = compute()  # outside the lock: no cross-module lock ordering
        with self._lock:
            return self._data.setdefault(key, value)

    def peek(self, key, default=None):
        return self._data.get(key, default)

    def put(self, key, value):
        with self._lock:
            self._data[key] = value


# -- rings ---------------------------------------------------------------------

class GradedRing:
    """R = S/I for a homogeneous ideal I of the ambient polynomial ring S."""

    def __init__(self, S: PolyRing, ideal: Sequence = (), name: str | None = None):
        self.S = S
        gens = []
        for f in ideal:
            terms = f.terms if isinstance(f, Polynomial) else dict(f)
            if isinstance(f, Polynomial) and f.ring != S:
                raise InputError("ideal generator from a different ring")
            try:
                d = S.poly_degree(terms)
            except DegreeError:
                raise DegreeError(f"inhomogeneous ideal generator {S.format_poly(terms)}") from None
            if d == 0:
                raise InputError("the ideal contains a unit; R would be zero")
            if terms:
                gens.append(terms)
        self.ideal_gens = tuple(gens)
        self.name = name
        self._cache = _Cache()

    @property
    def field(self):
        return self.S.field

    @property
    def gb(self) -> tuple:
        return self._cache.get("gb", lambda: ideal_basis(self.S, self.ideal_gens))

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, GradedRing) and other.S == self.S and other.gb == self.gb

    def __hash__(self):
        return hash((self.S, tuple(frozenset(f.items()) for f in self.gb)))

    def __repr__(self):
        if not self.ideal_gens:
            return f"{self.field.name}[{','.join(self.S.names)}]"
        gens = ", ".join(self.S.format_poly(f) for f in self.ideal_gens)
        return f"{self.field.name}[{','.join(self.S.names)}]/({gens})"

    def poly(self, x) -> Polynomial:
        if isinstance(x, Polynomial):
            return x
        return self.S.const(x)

    def nf(self, f) -> Polynomial:
        terms = f.terms if isinstance(f, Polynomial) else f
        v = reduce_mod_ideal({(0, e): c for e, c in terms.items()}, self.S, self.gb)
        return Polynomial(self.S, {e: c for (_, e), c in v.items()})

    def quotient(self, polys: Sequence) -> "GradedRing":
        return GradedRing(self.S, list(self.ideal_gens) + [p.terms if isinstance(p, Polynomial) else p
                                                           for p in polys])

    def free(self, degrees: Sequence[int] = (0,)) -> "FPModule":
        F = GradedFreeModule(tuple(degrees))
        return FPModule(self, HomogeneousMatrix.zero(self.S, GradedFreeModule(()), F))

    def residue_field(self) -> "FPModule":
        """k = R/(x_1..x_n), generated in degree 0 (shared, so its resolution is cached)."""
        return self._cache.get("residue", lambda: self.free((0,)).quotient_by(self.S.gens()))

    def krull_dim(self) -> int:
        return self._cache.get("dim", lambda: krull_dim(self.free()))

    def cached(self, key, compute):
        return self._cache.get(key, compute)


# -- Hilbert series ------------------------------------------------------------

@lru_cache(maxsize=4096)
def _hs_numerator(gens: frozenset, weights: tuple) -> Tuple[Tuple[int, int], ...]:
    """Numerator of the Hilbert series of S/J, J generated by the monomials ``gens``."""
    gens = _minimal_monomials(gens)
    if not gens:
        return ((0, 1),)
    if all(sum(1 for x in g if x) == 1 for g in gens):
        # pure powers of distinct variables: product of (1 - t^deg)
        poly = {0: 1}
        for g in gens:
            d = sum(a * w for a, w in zip(g, weights))
            new: dict = {}
            for k, c in poly.items():
                new[k] = new.get(k, 0) + c
                new[k + d] = new.get(k + d, 0) - c
            poly = new
        return tuple(sorted((k, c) for k, c in poly.items() if c))
    gens_sorted = sorted(gens)
    m = gens_sorted[-1]
    rest = frozenset(gens_sorted[:-1])
    colon = frozenset(tuple(max(a - b, 0) for a, b in zip(g, m)) for g in rest)
    dm = sum(a * w for a, w in zip(m, weights))
    a = dict(_hs_numerator(rest, weights))
    for k, c in _hs_numerator(colon, weights):
        a[k + dm] = a.get(k + dm, 0) - c
    return tuple(sorted((k, c) for k, c in a.items() if c))


def _minimal_monomials(gens) -> List[tuple]:
    gens = sorted(set(gens), key=lambda g: (sum(g), g))
    out: List[tuple] = []
    for g in gens:
        if not any(mono_divides(h, g) for h in out):
            out.append(g)
    return out


@dataclass(frozen=True)
class HilbertSeries:
    """``numerator(t) / prod(1 - t^w)``; numerator exponents may be negative."""

    numerator: Tuple[Tuple[int, int], ...]
    weights: Tuple[int, ...]

    @classmethod
    def from_dict(cls, num: Dict[int, int], weights) -> "HilbertSeries":
        return cls(tuple(sorted((k, c) for k, c in num.items() if c)), tuple(weights))

    def is_zero(self) -> bool:
        return not self.numerator

    def __add__(self, other: "HilbertSeries") -> "HilbertSeries":
        if other.weights != self.weights:
            raise ValueError("Hilbert series over different gradings")
        d = dict(self.numerator)
        for k, c in other.numerator:
            d[k] = d.get(k, 0) + c
        return HilbertSeries.from_dict(d, self.weights)

    def __sub__(self, other):
        return self + HilbertSeries(tuple((k, -c) for k, c in other.numerator), other.weights)

    def shift(self, k: int) -> "HilbertSeries":
        return HilbertSeries(tuple((e + k, c) for e, c in self.numerator), self.weights)

    def coefficients(self, lo: int, hi: int) -> Dict[int, int]:
        """Degreewise dimensions for ``lo <= d <= hi``."""
        if not self.numerator:
            return {d: 0 for d in range(lo, hi + 1)}
        base = min(k for k, _ in self.numerator)
        span = hi - base
        denom = [0] * (span + 1)
        if span >= 0:
            denom[0] = 1
        for w in self.weights:
            for i in range(w, span + 1):
                denom[i] += denom[i - w]
        out = {}
        for d in range(lo, hi + 1):
            s = 0
            for k, c in self.numerator:
                j = d - k
                if 0 <= j <= span:
                    s += c * denom[j]
            out[d] = s
        return out

    def length(self):
        """Total dimension when finite, else ``None``."""
        num = dict(self.numerator)
        if not num:
            return 0
        shift = min(num)
        poly = [0] * (max(num) - shift + 1)
        for k, c in num.items():
            poly[k - shift] = c
        for w in self.weights:
            # divide by (1 - t^w) exactly, else infinite length
            q = [0] * len(poly)
            r = list(poly)
            for i in range(len(r)):
                q[i] = r[i]
                if i + w < len(r):
                    r[i + w] += r[i]
                elif r[i]:
                    return None
            poly = q
            while poly and poly[-1] == 0:
                poly.pop()
            poly = [x for x in poly]
        return sum(poly)

    def reduced(self):
        """``(numerator, power of (1-t))`` with common ``(1-t)`` factors cancelled (unit weights)."""
        num = dict(self.numerator)
        power = len(self.weights)
        if any(w != 1 for w in self.weights):
            return num, None
        while num and power > 0 and sum(num.values()) == 0:
            lo, hi = min(num), max(num)
            q, carry = {}, 0
            for k in range(lo, hi):
                carry += num.get(k, 0)
                if carry:
                    q[k] = carry
            num, power = q, power - 1
        return num, power

    def to_json(self):
        num, power = self.reduced()
        return {"numerator": {str(k): v for k, v in sorted(num.items())},
                "denominator_power": power if power is not None else list(self.weights)}

    def __str__(self):
        num, power = self.reduced()
        if not num:
            return "0"
        terms = " + ".join(f"{c}*t^{k}" for k, c in sorted(num.items()))
        if power is None:
            return f"({terms}) / prod(1 - t^w)"
        return f"({terms}) / (1-t)^{power}"


# -- modules -------------------------------------------------------------------

class FPModule:
    """``coker(presentation)`` over ``ring``; immutable, with fill-once caches."""

    def __init__(self, ring: GradedRing, presentation: HomogeneousMatrix):
        if presentation.ring != ring.S:
            raise InputError("presentation matrix over a different polynomial ring")
        presentation.validate()
        self.ring = ring
        self.presentation = presentation
        self._cache = _Cache()

    @property
    def degrees(self) -> Tuple[int, ...]:
        return self.presentation.target.degrees

    @property
    def num_generators(self) -> int:
        return self.presentation.target.rank

    def __repr__(self):
        return f"FPModule(coker {self.presentation!r} over {self.ring!r})"

    def quotient_by(self, elements: Sequence) -> "FPModule":
        """M / (f_1..f_k) M for ring elements f."""
        u = self.presentation
        S = self.ring.S
        cols = list(u.columns)
        degs = list(u.source.degrees)
        for f in elements:
            f = self.ring.poly(f)
            d = f.degree
            if d == "inhomogeneous":
                raise DegreeError("inhomogeneous element")
            if d is None:
                continue
            for i in range(self.num_generators):
                cols.append({(i, e): c for e, c in f.terms.items()})
                degs.append(self.degrees[i] + d)
        return FPModule(self.ring, HomogeneousMatrix(S, GradedFreeModule(tuple(degs)), u.target, cols))

    def gb(self):
        """Gröbner basis of im(u) + I*F0 (no tracking)."""
        return self._cache.get("gb", lambda: buchberger(self.ring.S, self.presentation.target,
                                                         self.presentation.columns, self.ring.gb,
                                                         track=False))


def direct_sum(M: FPModule, N: FPModule) -> FPModule:
    _same_ring(M, N)
    return FPModule(M.ring, block_diagonal(M.presentation, N.presentation))


def _same_ring(M: FPModule, N: FPModule):
    if M.ring != N.ring:
        raise InputError("modules over different rings")


def present(ring: GradedRing, matrix: HomogeneousMatrix) -> FPModule:
    return FPModule(ring, matrix)


def _strip_units(ring: GradedRing, u: HomogeneousMatrix):
    """Gaussian elimination on degree-0 (unit) entries.

    Returns ``(columns, target_degrees, source_degrees)`` with no unit entries left.
    """
    S = ring.S
    F = S.field
    one = S.one_exps
    cols = [dict(c) for c in u.columns]
    sdeg = list(u.source.degrees)
    rows = list(range(u.target.rank))
    while True:
        piv = None
        for j, col in enumerate(cols):
            for i in rows:
                if (i, one) in col:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        pc = cols[j]
        inv = F.inv(pc[(i, one)])
        for l, col in enumerate(cols):
            if l == j:
                continue
            entry = {e: c for (r, e), c in col.items() if r == i}
            if entry:
                scale = {e: F(-c * inv) for e, c in entry.items()}
                cols[l] = vec_add(col, vec_times_poly(pc, scale, F), F)
        del cols[j]
        del sdeg[j]
        rows.remove(i)
    remap = {old: new for new, old in enumerate(rows)}
    tdeg = [u.target.degrees[i] for i in rows]
    out = []
    for col in cols:
        v = {(remap[i], e): c for (i, e), c in col.items()}
        out.append(reduce_mod_ideal(v, S, ring.gb))
    return out, tdeg, sdeg


def minimalize(M: FPModule) -> FPModule:
    """Minimal presentation: no unit entries and a minimal set of relations."""
    def compute():
        cols, tdeg, _ = _strip_units(M.ring, M.presentation)
        F0 = GradedFreeModule(tuple(tdeg))
        S = M.ring.S
        gb = buchberger(S, F0, [c for c in cols if c], M.ring.gb, track=True, minimal=True)
        rel = list(gb.inputs)
        degs = tuple(vec_degree(c, F0.degrees, S) for c in rel)
        N = FPModule(M.ring, HomogeneousMatrix(S, GradedFreeModule(degs), F0, rel, check=False))
        N._cache.put("minimal", N)
        N._cache.put("relations_gb", gb)
        return N
    return M._cache.get("minimal", compute)


def is_zero(M: FPModule) -> bool:
    def compute():
        _, tdeg, _ = _strip_units(M.ring, M.presentation)
        return not tdeg
    return M._cache.get("is_zero", compute)


def hilbert_series(M: FPModule) -> HilbertSeries:
    def compute():
        S = M.ring.S
        gb = M.gb()
        by_pos: dict = {i: [] for i in range(M.num_generators)}
        for (pos, e) in gb.leads:
            by_pos[pos].append(e)
        total: dict = {}
        for pos, mons in by_pos.items():
            for k, c in _hs_numerator(frozenset(mons), S.weights):
                k += M.degrees[pos]
                total[k] = total.get(k, 0) + c
        return HilbertSeries.from_dict(total, S.weights)
    return M._cache.get("hilbert", compute)


def _monomial_dim(mons, n: int) -> int:
    """Krull dimension of S/J for a monomial ideal J (combinatorial)."""
    supports = [frozenset(i for i, a in enumerate(m) if a) for m in mons]
    if any(not s for s in supports):
        return -1
    for size in range(n, -1, -1):
        for U in combinations(range(n), size):
            U = frozenset(U)
            if not any(s <= U for s in supports):
                return size
    return -1


def krull_dim(M: FPModule):
    """Krull dimension, or the marker ``"-inf"`` for the zero module."""
    def compute():
        if is_zero(M):
            return NEG_INF
        gb = M.gb()
        by_pos: dict = {i: [] for i in range(M.num_generators)}
        for (pos, e) in gb.leads:
            by_pos[pos].append(e)
        dims = [_monomial_dim(m, M.ring.S.n) for m in by_pos.values()]
        return max(dims)
    return M._cache.get("krull_dim", compute)


# -- resolutions ---------------------------------------------------------------

@dataclass
class Resolution:
    """``F_len -> ... -> F_1 -> F_0 (-> M)``; ``maps[i]`` is d_{i+1}: F_{i+1} -> F_i."""

    module: FPModule
    maps: List[HomogeneousMatrix]
    minimal: bool
    complete: bool = False  # True once a zero free module was reached

    @property
    def length(self) -> int:
        return len(self.maps)

    def free_module(self, i: int) -> GradedFreeModule:
        if i == 0:
            if self.maps:
                return self.maps[0].target
            base = minimalize(self.module) if self.minimal else self.module
            return GradedFreeModule(base.degrees)
        if i <= len(self.maps):
            return self.maps[i - 1].source
        if self.complete:
            return GradedFreeModule(())
        raise IndexError("resolution not computed that far")

    def map(self, i: int) -> HomogeneousMatrix:
        """d_i : F_i -> F_{i-1}."""
        if 1 <= i <= len(self.maps):
            return self.maps[i - 1]
        if i > len(self.maps) and self.complete:
            return HomogeneousMatrix.zero(self.module.ring.S, GradedFreeModule(()), self.free_module(i - 1))
        raise IndexError("resolution not computed that far")

    @property
    def betti(self) -> Dict[Tuple[int, int], int]:
        table: dict = {}
        for i in range(len(self.maps) + 1):
            for d in self.free_module(i).degrees:
                table[(i, d)] = table.get((i, d), 0) + 1
        return table

    def betti_numbers(self) -> List[int]:
        return [self.free_module(i).rank for i in range(len(self.maps) + 1)]

    def projective_dimension(self):
        """Largest i with F_i != 0 when the resolution is minimal and complete, else None."""
        if not (self.minimal and self.complete):
            return None
        nz = [i for i in range(len(self.maps) + 1) if self.free_module(i).rank]
        return max(nz) if nz else NEG_INF

    def is_complex(self) -> bool:
        ring = self.module.ring
        for a, b in zip(self.maps, self.maps[1:]):
            comp = matrix_compose(a, b)
            if any(reduce_mod_ideal(c, ring.S, ring.gb) for c in comp.columns):
                return False
        return True


def resolve(M: FPModule, length: int, minimal: bool = True) -> Resolution:
    """Free resolution of M over R with ``length`` maps (fewer if it terminates)."""
    if length < 0:
        raise InputError("resolution length must be non-negative")
    key = "res_min" if minimal else "res_raw"
    ring = M.ring
    S = ring.S
    with M._cache._lock:
        state = M._cache.peek(key)
        if state is None:
            if minimal:
                N = minimalize(M)
                state = [Resolution(M, [], True), N.presentation, N._cache.peek("relations_gb")]
            else:
                state = [Resolution(M, [], False), M.presentation, None]
            if state[1].target.rank == 0:
                state[0].complete = True
            M._cache.put(key, state)
        res = state[0]
        while res.length < length and not res.complete:
            mat, gb = state[1], state[2]
            if mat.source.rank == 0:
                res.complete = True
                break
            res.maps.append(mat)
            if gb is None:
                gb = buchberger(S, mat.target, mat.columns, ring.gb, track=True)
            cands = gb.syzygy_vectors()
            if minimal and cands:
                nxt_gb = buchberger(S, mat.source, cands, ring.gb, track=True, minimal=True)
                cols = list(nxt_gb.inputs)
            else:
                nxt_gb, cols = None, cands
            degs = tuple(vec_degree(c, mat.source.degrees, S) for c in cols)
            state[1] = HomogeneousMatrix(S, GradedFreeModule(degs), mat.source, cols, check=False)
            state[2] = nxt_gb
        return Resolution(M, list(res.maps[:length]), minimal,
                          complete=res.complete and res.length <= length)


def betti(M: FPModule, length: int | None = None) -> Dict[Tuple[int, int], int]:
    """Graded Betti numbers from the minimal resolution (length defaults to n + 1)."""
    if is_zero(M):
        return {}
    if length is None:
        length = M.ring.S.n + 1
    return resolve(M, length).betti


# -- Hom, Ext, subquotients ----------------------------------------------------

def kron(A: HomogeneousMatrix, B: HomogeneousMatrix) -> HomogeneousMatrix:
    """Tensor product of matrices; basis (p, u) of P (x) U is ordered p * rank(U) + u."""
    S = A.ring
    F = S.field
    nu, nv = B.source.rank, B.target.rank
    sdeg = tuple(a + b for a in A.source.degrees for b in B.source.degrees)
    tdeg = tuple(a + b for a in A.target.degrees for b in B.target.degrees)
    cols = []
    for p, acol in enumerate(A.columns):
        for u, bcol in enumerate(B.columns):
            out: Vec = {}
            for (q, ea), ca in acol.items():
                for (v, eb), cb in bcol.items():
                    t = (q * nv + v, tuple(x + y for x, y in zip(ea, eb)))
                    c = out.get(t, 0) + ca * cb
                    if F.p:
                        c %= F.p
                    if c:
                        out[t] = c
                    else:
                        out.pop(t, None)
            cols.append(out)
    return HomogeneousMatrix(S, GradedFreeModule(sdeg), GradedFreeModule(tdeg), cols, check=False)


def preimage(phi: HomogeneousMatrix, sub: HomogeneousMatrix, ring: GradedRing) -> HomogeneousMatrix:
    """Columns generating ``{a : phi(a) in im(sub) + I*target}`` (minimal)."""
    if phi.target != sub.target:
        raise DegreeError("preimage: phi and sub must share a target")
    big = phi.hstack(sub)
    K = kernel_matrix(big, ring.gb, minimal=False)
    m = phi.source.rank
    S = ring.S
    cols = []
    for c in K.columns:
        v = {(i, e): x for (i, e), x in c.items() if i < m}
        if v:
            cols.append(v)
    return _minimal_matrix(ring, phi.source, cols)


def _minimal_matrix(ring: GradedRing, target: GradedFreeModule, cols) -> HomogeneousMatrix:
    S = ring.S
    cols = [reduce_mod_ideal(c, S, ring.gb) for c in cols]
    cols = [c for c in cols if c]
    if cols:
        gb = buchberger(S, target, cols, ring.gb, track=False, minimal=True)
        cols = list(gb.inputs)
    degs = tuple(vec_degree(c, target.degrees, S) for c in cols)
    return HomogeneousMatrix(S, GradedFreeModule(degs), target, cols, check=False)


def subquotient(ring: GradedRing, gens: HomogeneousMatrix, rels: HomogeneousMatrix | None = None,
                minimal: bool = True) -> FPModule:
    """``(im gens + im rels) / im rels`` inside the common target, presented on ``gens``."""
    S = ring.S
    if rels is None:
        rels = HomogeneousMatrix.zero(S, GradedFreeModule(()), gens.target)
    P = preimage(gens, rels, ring)
    M = FPModule(ring, P)
    return minimalize(M) if minimal else M


def image(f: HomogeneousMatrix, ring: GradedRing) -> FPModule:
    """The submodule im(f) of the free module f.target over R, presented on f's columns."""
    return subquotient(ring, f, None, minimal=False)


def _cochain_data(d_next: HomogeneousMatrix, d_prev: HomogeneousMatrix | None,
                  N: FPModule, Fi: GradedFreeModule):
    """Cocycles/coboundaries of Hom(F_., N) at F_i, as matrices into F_i^* (x) G0."""
    S = N.ring.S
    v = N.presentation
    G0 = v.target
    idG0 = HomogeneousMatrix.identity(S, G0)
    # cocycle condition: (d_next^T (x) 1)(a) in im(1_{F_{i+1}^*} (x) v)
    phi = kron(matrix_transpose(d_next), idG0)
    Fnext = d_next.source
    sub = kron(HomogeneousMatrix.identity(S, Fnext.dual()), v)
    Z = preimage(phi, sub, N.ring)
    rels = kron(HomogeneousMatrix.identity(S, Fi.dual()), v)
    if d_prev is not None:
        rels = kron(matrix_transpose(d_prev), idG0).hstack(rels)
    return Z, rels


def hom(M: FPModule, N: FPModule) -> FPModule:
    """Hom_R(M, N), presented as a subquotient of Hom(F0, G0)."""
    _same_ring(M, N)

    def compute():
        Mm = minimalize(M)
        u = Mm.presentation
        Z, rels = _cochain_data(u, None, N, u.target)
        return subquotient(M.ring, Z, rels)
    return compute()


def dual(M: FPModule) -> FPModule:
    """M* = Hom(M, R), presented as ``ker(u^T)`` (generators are columns of ``dual_generators``)."""
    return M._cache.get("dual", lambda: FPModule(M.ring, dual_data(M)[2]))


def dual_data(M: FPModule, minimal: bool = True):
    """``(u, Z, P)``: u presents M, Z: P0 -> F0^* minimally generates M*, P presents M* on Z.

    With ``minimal=False`` the user's presentation u is kept, so Z is expressed
    in the original generators of M.
    """
    def compute():
        u = minimalize(M).presentation if minimal else M.presentation
        Z = kernel_matrix(matrix_transpose(u), M.ring.gb, minimal=True)
        P = kernel_matrix(Z, M.ring.gb, minimal=True)
        return u, Z, P
    return M._cache.get(("dual_data", minimal), compute)


def ext(i: int, M: FPModule, N: FPModule | None = None) -> FPModule:
    """Ext^i_R(M, N) from the minimal free resolution of M (N defaults to R)."""
    if i < 0:
        raise InputError("Ext index must be non-negative")
    to_ring = N is None
    if to_ring:
        N = M.ring.free()
    else:
        _same_ring(M, N)

    def compute():
        if N.num_generators == 0 or is_zero(M):
            return M.ring.free(())
        res = resolve(M, i + 1)
        Fi = res.free_module(i)
        if Fi.rank == 0:
            return M.ring.free(())
        d_next = res.map(i + 1)
        d_prev = res.map(i) if i >= 1 else None
        Z, rels = _cochain_data(d_next, d_prev, N, Fi)
        return subquotient(M.ring, Z, rels)
    return M._cache.get(("ext", i), compute) if to_ring else compute()


# -- maps, cokernels, base change ----------------------------------------------

@dataclass
class ModuleMap:
    """A degree-0 homomorphism ``source -> target`` induced by ``matrix: F0(src) -> F0(tgt)``."""

    source: FPModule
    target: FPModule
    matrix: HomogeneousMatrix

    def __post_init__(self):
        if self.matrix.source != self.source.presentation.target or \
                self.matrix.target != self.target.presentation.target:
            raise DegreeError("map matrix does not match the generator degrees")

    def is_well_defined(self) -> bool:
        comp = matrix_compose(self.matrix, self.source.presentation)
        return all(_in_span(c, self.target) for c in comp.columns)

    def kernel(self) -> Tuple[FPModule, HomogeneousMatrix]:
        """``(K, gens)``: K presented on ``gens``, columns of F0(source) generating the kernel."""
        ring = self.source.ring
        P = preimage(self.matrix, self.target.presentation, ring)
        K = subquotient(ring, P, self.source.presentation, minimal=False)
        return K, P

    def image(self) -> FPModule:
        return subquotient(self.source.ring, self.matrix, self.target.presentation, minimal=False)

    def cokernel(self) -> FPModule:
        return FPModule(self.target.ring, self.matrix.hstack(self.target.presentation))

    def is_injective(self) -> bool:
        return is_zero(self.kernel()[0])

    def is_surjective(self) -> bool:
        return is_zero(self.cokernel())


def _in_span(v: Vec, M: FPModule) -> bool:
    """Is ``v`` (an element of F0) zero in M?"""
    if not v:
        return True
    return M.gb().contains(v)


def cokernel(f: ModuleMap) -> FPModule:
    return f.cokernel()


def quotient_by_element(M: FPModule, x) -> FPModule:
    """M/xM as a module over R/xR."""
    x = M.ring.poly(x)
    d = x.degree
    if d == "inhomogeneous":
        raise DegreeError("cannot reduce modulo an inhomogeneous element")
    if d == 0:
        raise InputError("cannot reduce modulo a unit")
    Rbar = M.ring.quotient([x]) if d is not None else M.ring
    return FPModule(Rbar, M.presentation)


def multiplication_map(M: FPModule, x) -> ModuleMap:
    """``.x : M(-deg x) -> M`` as a degree-0 map."""
    x = M.ring.poly(x)
    d = x.degree
    if d == "inhomogeneous":
        raise DegreeError("inhomogeneous element")
    d = d or 0
    S = M.ring.S
    u = M.presentation
    shifted = FPModule(M.ring, HomogeneousMatrix(
        S, GradedFreeModule(tuple(a + d for a in u.source.degrees)),
        GradedFreeModule(tuple(a + d for a in u.target.degrees)), u.columns, check=False))
    cols = [{(i, e): c for e, c in x.terms.items()} for i in range(M.num_generators)]
    mat = HomogeneousMatrix(S, shifted.presentation.target, u.target, cols, check=False)
    return ModuleMap(shifted, M, mat)
