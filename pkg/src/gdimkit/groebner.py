"""Gröbner bases of graded submodules of S^r, with the defining ideal adjoined.

Computations over R = S/I never happen in R directly: a submodule of R^r is
handled as (given generators) + I*S^r inside S^r.  The order is
position-over-term (lower position is larger) refined by the ring's monomial
order.  S-pairs are processed lowest degree first, FIFO within a degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

from .errors import DegreeError, NotInSubmodule
from .polyalg import (Exps, GradedFreeModule, HomogeneousMatrix, PolyRing, Vec,
                      mono_div, mono_divides, mono_lcm, mono_mul, vec_degree)


def _iadd(cur: dict, g: dict, scale, mono: Exps, p: int):
    """In place: ``cur += scale * mono * g``."""
    for (i, e), c in g.items():
        t = (i, mono_mul(e, mono))
        v = cur.get(t, 0) + scale * c
        if p:
            v %= p
        if v:
            cur[t] = v
        else:
            del cur[t]


class _Reducer:
    """Shared state for reducing vectors against a growing list of monic elements."""

    def __init__(self, ring: PolyRing, degrees: Sequence[int]):
        self.ring = ring
        self.F = ring.field
        self.degrees = tuple(degrees)
        order = ring.order
        tk_cache: dict = {}

        def tkey(t, _c=tk_cache, _k=order.key):
            k = _c.get(t)
            if k is None:
                k = _c[t] = (-t[0], _k(t[1]))
            return k

        self.tkey = tkey
        self.vecs: List[dict] = []
        self.reps: List[dict] = []
        self.leads: List[tuple] = []
        self.active: List[bool] = []
        self.by_pos: dict = {}

    def lead(self, v: dict):
        return max(v, key=self.tkey)

    def find_divisor(self, t):
        pos, e = t
        for k in self.by_pos.get(pos, ()):
            if self.active[k] and mono_divides(self.leads[k][1], e):
                return k
        return None

    def reduce(self, v: dict, rep: dict | None, full: bool = True):
        """Return ``(remainder, rep)``; the remainder is fully reduced when ``full``."""
        p = self.F.p
        cur = dict(v)
        rep = dict(rep) if rep is not None else None
        rem: dict = {}
        vecs, reps, leads = self.vecs, self.reps, self.leads
        while cur:
            t = max(cur, key=self.tkey)
            k = self.find_divisor(t)
            if k is None:
                if not full:
                    rem.update(cur)
                    break
                rem[t] = cur.pop(t)
                continue
            c = cur[t]
            mono = mono_div(t[1], leads[k][1])
            _iadd(cur, vecs[k], -c, mono, p)
            cur.pop(t, None)
            if rep is not None and reps[k]:
                _iadd(rep, reps[k], -c, mono, p)
        return rem, rep

    def make_monic(self, v: dict, rep: dict | None):
        t = self.lead(v)
        c = v[t]
        if c != 1:
            inv = self.F.inv(c)
            p = self.F.p
            if p:
                v = {k: x * inv % p for k, x in v.items()}
                if rep is not None:
                    rep = {k: x * inv % p for k, x in rep.items()}
            else:
                v = {k: x * inv for k, x in v.items()}
                if rep is not None:
                    rep = {k: x * inv for k, x in rep.items()}
        return v, rep, t

    def append(self, v, rep, t):
        k = len(self.vecs)
        self.vecs.append(v)
        self.reps.append(rep)
        self.leads.append(t)
        self.active.append(True)
        self.by_pos.setdefault(t[0], []).append(k)
        return k

    def term_degree(self, t):
        return self.ring.mono_degree(t[1]) + self.degrees[t[0]]


class _PairQueue:
    """S-pairs bucketed by degree; FIFO inside a bucket."""

    def __init__(self):
        self.buckets: dict = {}

    def __bool__(self):
        return any(self.buckets.values())

    def min_degree(self):
        live = [d for d, b in self.buckets.items() if b]
        return min(live) if live else None

    def push(self, deg, pair):
        self.buckets.setdefault(deg, []).append(pair)

    def pop(self, deg):
        return self.buckets[deg].pop(0)

    def filter(self, keep):
        for d in self.buckets:
            self.buckets[d] = [q for q in self.buckets[d] if keep(q)]


class GroebnerBasis:
    """Gröbner basis of ``span(inputs) + I*ambient`` inside ``S^r``.

    ``inputs`` are the generators the basis is expressed against: ``reps[k]``
    writes ``basis[k]`` as a combination of the inputs modulo ``I*ambient``.
    """

    def __init__(self, ring: PolyRing, ambient: GradedFreeModule, ideal: Sequence[dict],
                 inputs: Sequence[Vec], red: _Reducer, track: bool):
        self.ring = ring
        self.ambient = ambient
        self.ideal = tuple(ideal)
        self.inputs = tuple(inputs)
        self._red = red
        self.track = track
        idx = [k for k, a in enumerate(red.active) if a]
        self.basis = [red.vecs[k] for k in idx]
        self.reps = [red.reps[k] for k in idx] if track else None
        self.leads = [red.leads[k] for k in idx]
        self._idx = idx

    @property
    def order(self):
        return self.ring.order

    def input_degrees(self):
        return tuple(vec_degree(v, self.ambient.degrees, self.ring) if v else None
                     for v in self.inputs)

    def normal_form(self, v: Vec) -> Vec:
        self._check_ambient(v)
        rem, _ = self._red.reduce(v, None)
        return rem

    def contains(self, v: Vec) -> bool:
        return not self.normal_form(v)

    def lift(self, v: Vec) -> Vec:
        """Coefficients ``c`` over the inputs with ``inputs . c == v`` modulo ``I*ambient``."""
        if not self.track:
            raise ValueError("lift needs a basis built with tracking")
        self._check_ambient(v)
        rem, rep = self._red.reduce(v, {})
        if rem:
            raise NotInSubmodule("element is not in the submodule")
        F = self.ring.field
        return {k: F(-c) for k, c in rep.items()}

    def _check_ambient(self, v: Vec):
        r = self.ambient.rank
        if any(not 0 <= i < r for (i, _) in v):
            raise DegreeError("element does not live in the basis' ambient module")

    def is_groebner(self) -> bool:
        """Buchberger criterion: every S-pair of the basis reduces to zero."""
        red = self._red
        for a in range(len(self.basis)):
            for b in range(a):
                (pa, ea), (pb, eb) = self.leads[a], self.leads[b]
                if pa != pb:
                    continue
                L = mono_lcm(ea, eb)
                s: dict = {}
                _iadd(s, self.basis[a], 1, mono_div(L, ea), self.ring.field.p)
                _iadd(s, self.basis[b], -1, mono_div(L, eb), self.ring.field.p)
                if red.reduce(s, None, full=False)[0]:
                    return False
        return True

    def is_autoreduced(self) -> bool:
        for a, (pa, ea) in enumerate(self.leads):
            for b, (pb, eb) in enumerate(self.leads):
                if a != b and pa == pb and mono_divides(eb, ea):
                    return False
        return True

    def syzygy_vectors(self) -> List[Vec]:
        """Generators of ``{c : inputs . c in I*ambient}``, reduced modulo I.

        Schreyer: one syzygy per minimal S-pair of the basis, plus the
        relations expressing each generator through the basis.
        """
        if not self.track:
            raise ValueError("syzygies need a basis built with tracking")
        red = self._red
        p = self.ring.field.p
        out: List[Vec] = []
        G = self._idx
        for a_i, i in enumerate(G):
            pos_i, e_i = red.leads[i]
            cands = []
            for j in G[:a_i]:
                pos_j, e_j = red.leads[j]
                if pos_j != pos_i:
                    continue
                cands.append((mono_div(mono_lcm(e_i, e_j), e_i), j))
            keep = []
            for m, j in cands:
                if any(mono_divides(m2, m) and (m2 != m or j2 < j) for m2, j2 in cands if j2 != j):
                    continue
                keep.append((m, j))
            for m, j in keep:
                L = mono_mul(m, e_i)
                mj = mono_div(L, red.leads[j][1])
                s: dict = {}
                _iadd(s, red.vecs[i], 1, m, p)
                _iadd(s, red.vecs[j], -1, mj, p)
                rep: dict = {}
                _iadd(rep, red.reps[i], 1, m, p)
                _iadd(rep, red.reps[j], -1, mj, p)
                rem, rep = red.reduce(s, rep, full=False)
                assert not rem, "S-pair of a Gröbner basis failed to reduce"
                if rep:
                    out.append(rep)
        one = self.ring.one_exps
        fone = self.ring.field.one
        for l, v in enumerate(self.inputs):
            rem, rep = red.reduce(v, {(l, one): fone}, full=False)
            assert not rem
            if rep:
                out.append(rep)
        for pos in range(self.ambient.rank):
            for f in self.ideal:
                v = {(pos, e): c for e, c in f.items()}
                rem, rep = red.reduce(v, {}, full=False)
                assert not rem
                if rep:
                    out.append(rep)
        if self.ideal:
            out = [reduce_mod_ideal(v, self.ring, self.ideal) for v in out]
        seen = set()
        uniq = []
        for v in out:
            if not v:
                continue
            key = frozenset(v.items())
            if key not in seen:
                seen.add(key)
                uniq.append(v)
        return uniq


def _update(red: _Reducer, queue: _PairQueue, k: int, seq: list):
    """Gebauer-Möller update after appending element ``k`` (no product criterion:
    it does not hold for module elements)."""
    pos, eh = red.leads[k]
    cands = []
    for g in red.by_pos.get(pos, ()):
        if g == k or not red.active[g]:
            continue
        cands.append((mono_lcm(eh, red.leads[g][1]), g))
    # M: drop pairs whose lcm is a proper multiple of another new pair's lcm
    kept = []
    for L, g in cands:
        if any(L2 != L and mono_divides(L2, L) for L2, _ in cands):
            continue
        if any(L2 == L for L2, _ in kept):
            continue
        kept.append((L, g))

    # B: old pairs (i, j) whose lcm is divisible by the new lead
    def keep_old(q):
        _, i, j, L = q
        if red.leads[i][0] != pos or not mono_divides(eh, L):
            return True
        return (mono_lcm(red.leads[i][1], eh) == L) or (mono_lcm(red.leads[j][1], eh) == L)

    queue.filter(keep_old)
    for g in red.by_pos.get(pos, ()):
        if g != k and red.active[g] and mono_divides(eh, red.leads[g][1]):
            red.active[g] = False
    for L, g in kept:
        seq[0] += 1
        queue.push(red.ring.mono_degree(L) + red.degrees[pos], (seq[0], g, k, L))


def _process_pairs(red: _Reducer, queue: _PairQueue, track: bool, seq: list, upto=None):
    p = red.F.p
    while queue:
        d = queue.min_degree()
        if upto is not None and d > upto:
            return
        _, i, j, L = queue.pop(d)
        s: dict = {}
        rep = {} if track else None
        mi = mono_div(L, red.leads[i][1])
        mj = mono_div(L, red.leads[j][1])
        _iadd(s, red.vecs[i], 1, mi, p)
        _iadd(s, red.vecs[j], -1, mj, p)
        if track:
            _iadd(rep, red.reps[i], 1, mi, p)
            _iadd(rep, red.reps[j], -1, mj, p)
        h, rep = red.reduce(s, rep)
        if h:
            h, rep, t = red.make_monic(h, rep)
            k = red.append(h, rep, t)
            _update(red, queue, k, seq)


def buchberger(ring: PolyRing, ambient: GradedFreeModule, generators: Sequence[Vec],
               ideal: Sequence[dict] = (), track: bool = True, minimal: bool = False):
    """Gröbner basis of ``span(generators) + ideal*ambient``.

    ``ideal`` must already be a Gröbner basis of I (see :func:`ideal_basis`).
    With ``minimal=True`` the generators are scanned by degree and only those
    not already in the span of earlier ones are kept; the result's ``inputs``
    are then a minimal homogeneous generating set (``selected`` holds their
    original indices).
    """
    degs = ambient.degrees
    gens = [dict(g) for g in generators]
    gdeg = []
    for g in gens:
        gdeg.append(vec_degree(g, degs, ring) if g else None)
    red = _Reducer(ring, degs)
    queue = _PairQueue()
    seq = [0]
    for pos in range(ambient.rank):
        for f in ideal:
            v = {(pos, e): c for e, c in f.items()}
            v, _, t = red.make_monic(v, None)
            red.append(v, {} if track else None, t)
    order = sorted((j for j in range(len(gens)) if gens[j]), key=lambda j: gdeg[j])
    one = ring.one_exps
    fone = ring.field.one
    selected: List[int] = []
    for j in order:
        _process_pairs(red, queue, track, seq, upto=gdeg[j])
        label = len(selected) if minimal else j
        rep = {(label, one): fone} if track else None
        h, rep = red.reduce(gens[j], rep)
        if not h:
            continue
        selected.append(j)
        h, rep, t = red.make_monic(h, rep)
        k = red.append(h, rep, t)
        _update(red, queue, k, seq)
    _process_pairs(red, queue, track, seq)
    inputs = [gens[j] for j in selected] if minimal else gens
    gb = GroebnerBasis(ring, ambient, ideal, inputs, red, track)
    gb.selected = selected if minimal else list(range(len(gens)))
    return gb


def ideal_basis(ring: PolyRing, polys: Sequence[dict]) -> tuple:
    """Reduced Gröbner basis of a homogeneous ideal of S, as polynomial dicts."""
    for f in polys:
        ring.poly_degree(f)
    gens = [{(0, e): c for e, c in f.items()} for f in polys if f]
    gb = buchberger(ring, GradedFreeModule((0,)), gens, track=False)
    red = gb._red
    out = []
    for k, v in zip(gb._idx, gb.basis):
        # tail-reduce against the others
        red.active[k] = False
        rem, _ = red.reduce(v, None)
        red.active[k] = True
        if rem:
            rem, _, _ = red.make_monic(rem, None)
            red.vecs[k] = rem
        out.append({e: c for (_, e), c in (rem or v).items()})
    out.sort(key=lambda f: ring.order.key(max(f, key=ring.order.key)))
    return tuple(out)


def reduce_mod_ideal(v: Vec, ring: PolyRing, ideal: Sequence[dict]) -> Vec:
    """Normal form of every coordinate of ``v`` modulo the ideal basis."""
    if not ideal or not v:
        return v
    red = _ideal_reducer(ring, ideal)
    out: dict = {}
    positions = sorted({i for i, _ in v})
    for pos in positions:
        col = {(0, e): c for (i, e), c in v.items() if i == pos}
        rem, _ = red.reduce(col, None)
        for (_, e), c in rem.items():
            out[(pos, e)] = c
    return out


_IDEAL_REDUCERS: dict = {}


def _ideal_reducer(ring: PolyRing, ideal: Sequence[dict]) -> _Reducer:
    key = (ring, tuple(frozenset(f.items()) for f in ideal))
    red = _IDEAL_REDUCERS.get(key)
    if red is None:
        red = _Reducer(ring, (0,))
        for f in ideal:
            v, _, t = red.make_monic({(0, e): c for e, c in f.items()}, None)
            red.append(v, None, t)
        if len(_IDEAL_REDUCERS) > 256:
            _IDEAL_REDUCERS.clear()
        _IDEAL_REDUCERS[key] = red
    return red


def normal_form(v: Vec, gb: GroebnerBasis) -> Vec:
    return gb.normal_form(v)


def lift(v: Vec, gb: GroebnerBasis) -> Vec:
    return gb.lift(v)


@dataclass(frozen=True)
class SyzygyCertificate:
    syzygy_matrix: HomogeneousMatrix
    basis: GroebnerBasis


def syzygy_matrix(gb: GroebnerBasis) -> HomogeneousMatrix:
    """Columns generate the kernel of ``R^{inputs} -> ambient/I``."""
    src_degs = []
    for v in gb.inputs:
        d = vec_degree(v, gb.ambient.degrees, gb.ring) if v else None
        if d is None:
            raise DegreeError("zero generator has no degree; drop it before computing syzygies")
        src_degs.append(d)
    vecs = gb.syzygy_vectors()
    cols = sorted(vecs, key=lambda v: vec_degree(v, src_degs, gb.ring))
    degs = tuple(vec_degree(v, src_degs, gb.ring) for v in cols)
    return HomogeneousMatrix(gb.ring, GradedFreeModule(degs), GradedFreeModule(tuple(src_degs)),
                             cols, check=False)


def syzygies(gb: GroebnerBasis) -> SyzygyCertificate:
    return SyzygyCertificate(syzygy_matrix(gb), gb)


def _matrix_inputs(f: HomogeneousMatrix):
    """Columns of ``f`` with zero columns kept (they matter for kernels)."""
    return [dict(c) for c in f.columns]


def kernel_matrix(f: HomogeneousMatrix, ideal: Sequence[dict] = (), minimal: bool = True) -> HomogeneousMatrix:
    """Matrix whose columns generate ``ker(f)`` over ``S/I``.

    With ``minimal`` the generators form a minimal homogeneous generating set.
    """
    ring = f.ring
    nz = [j for j, c in enumerate(f.columns) if c]
    zero_cols = [j for j, c in enumerate(f.columns) if not c]
    one = ring.one_exps
    fone = ring.field.one
    vecs: List[Vec] = []
    if nz:
        gb = buchberger(ring, f.target, [f.columns[j] for j in nz], ideal, track=True)
        for v in gb.syzygy_vectors():
            vecs.append({(nz[i], e): c for (i, e), c in v.items()})
    for j in zero_cols:
        vecs.append({(j, one): fone})
    cols = vecs
    if minimal and cols:
        cols = minimal_generators(ring, f.source, cols, ideal)
    cols = sorted(cols, key=lambda v: vec_degree(v, f.source.degrees, ring))
    degs = tuple(vec_degree(v, f.source.degrees, ring) for v in cols)
    return HomogeneousMatrix(ring, GradedFreeModule(degs), f.source, cols, check=False)


def minimal_generators(ring: PolyRing, ambient: GradedFreeModule, vecs: Sequence[Vec],
                       ideal: Sequence[dict] = ()) -> List[Vec]:
    """A minimal homogeneous generating subset of ``span(vecs)`` modulo I."""
    vecs = [reduce_mod_ideal(v, ring, ideal) for v in vecs]
    gb = buchberger(ring, ambient, vecs, ideal, track=False, minimal=True)
    return list(gb.inputs)


def kernel_presentation(f: HomogeneousMatrix, ideal: Sequence[dict] = ()):
    """``(Z, P)``: ``Z`` generates ``ker(f)``, ``P`` presents it (``ker f = coker P``)."""
    Z = kernel_matrix(f, ideal)
    P = kernel_matrix(Z, ideal)
    return Z, P
