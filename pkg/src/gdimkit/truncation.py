"""Degree-by-degree linear algebra oracle, independent of the Gröbner engine.

Every graded piece is a finite-dimensional vector space: a free S-module in
degree t is spanned by monomial multiples of its basis vectors, and the
relations (I times the module, plus the image of a presentation) span a
subspace.  All answers reduce to ranks of sparse matrices over the base field.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from sympy import GF, QQ as SQQ
from sympy.polys.matrices import DomainMatrix


@lru_cache(maxsize=None)
def _monomials(t: int, weights: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
    if t < 0:
        return ()
    n = len(weights)
    if n == 0:
        return ((),) if t == 0 else ()
    out = []

    def rec(i, left, acc):
        if i == n - 1:
            if left % weights[i] == 0:
                out.append(tuple(acc) + (left // weights[i],))
            return
        for a in range(left // weights[i], -1, -1):
            rec(i + 1, left - a * weights[i], acc + [a])
    rec(0, t, [])
    return tuple(out)


class TruncationOracle:
    """Graded pieces of free modules over ``ring`` (a GradedRing), as coordinate spaces."""

    def __init__(self, ring):
        self.ring = ring
        S = ring.S
        self.weights = tuple(S.weights)
        self.p = S.field.p
        self.domain = GF(self.p) if self.p else SQQ
        self.ideal = [dict(f) for f in ring.ideal_gens]
        self._ideal_deg = [self._deg(next(iter(f))) for f in self.ideal]

    # -- coordinates -----------------------------------------------------------

    def _deg(self, e) -> int:
        return sum(a * w for a, w in zip(e, self.weights))

    def _coord(self, degs: Sequence[int], t: int) -> Dict[Tuple[int, tuple], int]:
        idx = {}
        for i, d in enumerate(degs):
            for m in _monomials(t - d, self.weights):
                idx[(i, m)] = len(idx)
        return idx

    def _conv(self, c):
        if self.p:
            return self.domain(int(c) % self.p)
        return self.domain(int(c.numerator), int(c.denominator))

    def _rank(self, rows: List[Dict[int, object]], dim: int) -> int:
        rows = [r for r in rows if r]
        if not rows or dim == 0:
            return 0
        data = {}
        for r in rows:
            row = {j: v for j, v in ((j, self._conv(c)) for j, c in r.items()) if v}
            if row:
                data[len(data)] = row
        if not data:
            return 0
        # sparse elimination must not see stored zeros (sums that vanish mod p)
        return DomainMatrix(data, (len(data), dim), self.domain).rank()

    @staticmethod
    def _shift(col: dict, m: tuple, idx: dict) -> Dict[int, object]:
        out: Dict[int, object] = {}
        for (i, e), c in col.items():
            j = idx[(i, tuple(a + b for a, b in zip(e, m)))]
            out[j] = out.get(j, 0) + c
        return {j: c for j, c in out.items() if c}

    def _ideal_rows(self, degs, t, idx):
        rows = []
        for i, d in enumerate(degs):
            for f, df in zip(self.ideal, self._ideal_deg):
                for m in _monomials(t - d - df, self.weights):
                    rows.append(self._shift({(i, e): c for e, c in f.items()}, m, idx))
        return rows

    def _image_rows(self, columns, src_degs, t, idx):
        rows = []
        for col, s in zip(columns, src_degs):
            if not col:
                continue
            for m in _monomials(t - s, self.weights):
                rows.append(self._shift(col, m, idx))
        return rows

    # -- free modules and maps -------------------------------------------------

    def free_dim(self, degs: Sequence[int], t: int) -> int:
        """dim_k of (R^degs)_t."""
        idx = self._coord(degs, t)
        return len(idx) - self._rank(self._ideal_rows(degs, t, idx), len(idx))

    def map_rank(self, f, t: int) -> int:
        """Rank of f: F_t -> G_t over R (f a HomogeneousMatrix)."""
        tdeg = f.target.degrees
        idx = self._coord(tdeg, t)
        rel = self._ideal_rows(tdeg, t, idx)
        img = self._image_rows(f.columns, f.source.degrees, t, idx)
        return self._rank(rel + img, len(idx)) - self._rank(rel, len(idx))

    def kernel_dim(self, f, t: int) -> int:
        return self.free_dim(f.source.degrees, t) - self.map_rank(f, t)

    def module_dim(self, u, t: int) -> int:
        """dim_k of coker(u)_t over R."""
        return self.free_dim(u.target.degrees, t) - self.map_rank(u, t)

    def hilbert_function(self, u, lo: int, hi: int) -> Dict[int, int]:
        return {t: self.module_dim(u, t) for t in range(lo, hi + 1)}

    def in_image(self, v: dict, f, t: int) -> bool:
        """Is the degree-t vector v in im(f) + I*target?"""
        tdeg = f.target.degrees
        idx = self._coord(tdeg, t)
        rows = self._ideal_rows(tdeg, t, idx) + self._image_rows(f.columns, f.source.degrees, t, idx)
        vv = {idx[k]: c for k, c in v.items()}
        return self._rank(rows, len(idx)) == self._rank(rows + [vv], len(idx))

    def generates_kernel(self, f, K, t: int) -> bool:
        """Do the columns of K span ker(f) in degree t (and lie in it)?"""
        comp_zero = self._composite_zero(f, K, t)
        return comp_zero and self.map_rank(K, t) == self.kernel_dim(f, t)

    def _composite_zero(self, f, K, t: int) -> bool:
        # f(K e_j) must lie in I*target; check degreewise
        tdeg = f.target.degrees
        idx = self._coord(tdeg, t)
        rel = self._ideal_rows(tdeg, t, idx)
        comp = []
        for col in K.columns:
            out: dict = {}
            for (j, e), c in col.items():
                for (i, g), a in f.columns[j].items():
                    key = (i, tuple(x + y for x, y in zip(e, g)))
                    out[key] = out.get(key, 0) + c * a
            comp.append({k: c for k, c in out.items() if c})
        img = self._image_rows(comp, K.source.degrees, t, idx)
        return self._rank(rel + img, len(idx)) == self._rank(rel, len(idx))

    def exact_at(self, d_in, d_out, t: int) -> bool:
        """im(d_in) = ker(d_out) in degree t."""
        return self.generates_kernel(d_out, d_in, t)

    # -- Hom complexes ---------------------------------------------------------

    def _hom_space(self, shifts: Sequence[int], v, t: int):
        """V = sum_j G0^S_{t+shift_j} with relation rows W = (I G0 + im v) in each block."""
        blocks = []
        offset = 0
        rows = []
        for a in shifts:
            idx = self._coord(v.target.degrees, t + a)
            blocks.append((idx, offset))
            for r in self._ideal_rows(v.target.degrees, t + a, idx) + \
                    self._image_rows(v.columns, v.source.degrees, t + a, idx):
                rows.append({j + offset: c for j, c in r.items()})
            offset += len(idx)
        return blocks, rows, offset

    def _cochain(self, d, src, tgt):
        """Images of V-basis of Hom(F_i, N)_t under d^T (d: F_{i+1} -> F_i)."""
        src_blocks, _, _ = src
        tgt_blocks, _, _ = tgt
        out = []
        for j, (idx_j, off_j) in enumerate(src_blocks):
            for (p, m), loc in idx_j.items():
                img: dict = {}
                for k, col in enumerate(d.columns):
                    idx_k, off_k = tgt_blocks[k]
                    for (row, e), c in col.items():
                        if row != j:
                            continue
                        key = idx_k[(p, tuple(x + y for x, y in zip(m, e)))] + off_k
                        img[key] = img.get(key, 0) + c
                out.append({k: c for k, c in img.items() if c})
        return out

    def _quot_rank(self, images, target) -> int:
        _, W, dim = target
        return self._rank(images + W, dim) - self._rank(W, dim)

    def ext_dim(self, maps, i: int, v, t: int) -> int:
        """dim_k Ext^i(M, N)_t from a free resolution ``maps`` (d_1, d_2, ...) of M, N = coker v."""
        def F(j):
            if j == 0:
                return maps[0].target.degrees
            if j - 1 < len(maps):
                return maps[j - 1].source.degrees
            return ()
        spaces = {j: self._hom_space(F(j), v, t) for j in (i - 1, i, i + 1) if j >= 0}
        Ci = spaces[i]
        dimC = Ci[2] - self._rank(Ci[1], Ci[2])
        if i < len(maps) and F(i + 1):
            out_rank = self._quot_rank(self._cochain(maps[i], Ci, spaces[i + 1]), spaces[i + 1])
        else:
            out_rank = 0
        if i >= 1 and F(i - 1) and i - 1 < len(maps):
            in_rank = self._quot_rank(self._cochain(maps[i - 1], spaces[i - 1], Ci), Ci)
        else:
            in_rank = 0
        return dimC - out_rank - in_rank
