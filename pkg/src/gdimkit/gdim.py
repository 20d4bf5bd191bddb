"""Depth, grade, the Gorenstein test and Gorenstein dimension.

All "local" invariants are taken at the irrelevant maximal ideal m of the
graded ring, which agrees with localizing there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .auslander import transpose
from .errors import InputError, TheoryViolation
from .fpmodules import (FPModule, GradedRing, ext, hilbert_series, is_zero, minimalize,
                        multiplication_map, resolve)
from .polyalg import GradedFreeModule, HomogeneousMatrix

INF = math.inf


def _ambient_pd(M: FPModule) -> int:
    """Projective dimension of M as a module over the ambient polynomial ring."""
    ring = M.ring
    S = ring.S
    u = M.presentation
    cols = list(u.columns)
    degs = list(u.source.degrees)
    for f in ring.gb:
        d = S.poly_degree(f)
        for i in range(u.target.rank):
            cols.append({(i, e): c for e, c in f.items()})
            degs.append(u.target.degrees[i] + d)
    free_ring = GradedRing(S, ())
    MS = FPModule(free_ring, HomogeneousMatrix(S, GradedFreeModule(tuple(degs)), u.target, cols))
    res = resolve(MS, S.n + 1)
    pd = res.projective_dimension()
    if pd is None:
        raise TheoryViolation("minimal resolution over a polynomial ring did not terminate")
    return pd


def depth(M: FPModule, cross_check: bool = True) -> int:
    """min{i : Ext^i(k, M) != 0}; also compared with n - pd_S(M)."""
    if is_zero(M):
        raise InputError("depth of the zero module is undefined")

    def compute():
        k = M.ring.residue_field()
        n = M.ring.S.n
        for i in range(n + 1):
            if not is_zero(ext(i, k, M)):
                return i
        raise TheoryViolation("Ext^i(k, M) vanished for all i <= n on a nonzero module")
    d = M._cache.get("depth", compute)
    if cross_check:
        other = M._cache.get("depth_ambient", lambda: M.ring.S.n - _ambient_pd(M))
        if other != d:
            raise TheoryViolation(f"depth via Ext(k,M) is {d}, via the ambient resolution {other}")
    return d


def ring_depth(R: GradedRing) -> int:
    return R.cached("depth", lambda: depth(R.free()))


def ring_dim(R: GradedRing) -> int:
    return R.krull_dim()


def grade(C: FPModule):
    """inf{i : Ext^i(C, R) != 0}, or ``math.inf`` for C = 0."""
    if is_zero(C):
        return INF
    for i in range(ring_dim(C.ring) + 1):
        if not is_zero(ext(i, C)):
            return i
    raise TheoryViolation("nonzero module with Ext^i(C,R) = 0 for all i <= dim R")


def is_gorenstein(R: GradedRing) -> bool:
    def compute():
        d = ring_depth(R)
        if d != ring_dim(R):
            return False
        E = ext(d, R.residue_field())
        return hilbert_series(E).length() == 1
    return R.cached("gorenstein", compute)


@dataclass
class GZeroCertificate:
    module: FPModule
    bound: int
    ok: bool
    failure: Optional[Tuple[str, int]] = None   # ("M" | "D", i)
    checked: List[Tuple[str, int]] = field(default_factory=list)

    @property
    def reflexive(self) -> Optional[bool]:
        """Implied by the vanishing of Ext^{1,2}(D(K), R); None if not decided."""
        if self.ok and self.bound >= 2:
            return True
        if self.failure and self.failure[0] == "D" and self.failure[1] <= 2:
            return False
        return None

    def __bool__(self):
        return self.ok


def gdim_zero(K: FPModule, bound: int) -> GZeroCertificate:
    """Ext^i(K,R) = Ext^i(D(K),R) = 0 for 1 <= i <= bound (a semi-decision)."""
    if bound < 1:
        raise InputError("bound must be at least 1")
    D = transpose(K)
    checked = []
    for i in range(1, bound + 1):
        for side, X in (("M", K), ("D", D)):
            checked.append((side, i))
            if not is_zero(ext(i, X)):
                return GZeroCertificate(K, bound, False, (side, i), checked)
    return GZeroCertificate(K, bound, True, None, checked)


ZERO_MODULE = "zero-module"
FINITE = "finite"
INFINITE = "infinite-up-to-bound"


@dataclass
class GDimReport:
    verdict: str
    g: Optional[int]
    bound: int
    ext_table: Dict[int, bool] = field(default_factory=dict)   # i -> Ext^i(M,R) != 0
    depth_M: Optional[int] = None
    depth_R: Optional[int] = None
    abf_consistent: Optional[bool] = None
    syzygy_step: Optional[GZeroCertificate] = None

    @property
    def finite(self) -> bool:
        return self.verdict == FINITE

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "g": self.g, "bound": self.bound,
                "ext_nonzero": [i for i, nz in sorted(self.ext_table.items()) if nz],
                "depth_M": self.depth_M, "depth_R": self.depth_R, "abf": self.abf_consistent}


def syzygy_module(M: FPModule, d: int) -> FPModule:
    """The d-th syzygy of M in its minimal resolution (d = 0 gives M itself)."""
    if d == 0:
        return minimalize(M)
    return FPModule(M.ring, resolve(M, d + 1).map(d + 1))


def gdim(M: FPModule, bound: Optional[int] = None) -> GDimReport:
    R = M.ring
    B = ring_dim(R) + 2 if bound is None else bound
    if B < 1:
        raise InputError("bound must be at least 1")
    if is_zero(M):
        return GDimReport(ZERO_MODULE, None, B)
    d = ring_depth(R)
    gor = is_gorenstein(R)
    K = syzygy_module(M, d)
    cert = gdim_zero(K, B)
    table = {i: not is_zero(ext(i, M)) for i in range(0, max(B, d) + 1)}
    if not cert.ok:
        if gor:
            raise TheoryViolation(f"syzygy of order {d} failed the gdim-0 test over a Gorenstein ring"
                                  f" at {cert.failure}")
        return GDimReport(INFINITE, None, B, table, None, d, None, cert)
    g = max((t for t in range(d + 1) if table[t]), default=0)
    if any(table[i] for i in range(g + 1, max(B, d) + 1)):
        raise TheoryViolation("Ext^i(M,R) nonzero beyond the Gorenstein dimension")
    dM = depth(M)
    abf = g + dM == d
    if not abf:
        raise TheoryViolation(f"g + depth(M) = {g} + {dM} differs from depth(R) = {d}")
    return GDimReport(FINITE, g, B, table, dM, d, True, cert)


@dataclass
class GradeProfile:
    result: bool
    k: int
    table: List[Tuple[int, float]]     # (i, grade Ext^i(M,R))

    def __bool__(self):
        return self.result


def ext_grade_profile(M: FPModule, k: int) -> GradeProfile:
    """Check grade(Ext^i(M,R)) >= i + k for 1 <= i <= dim R (and i = dim R + 1 if nonzero)."""
    n = ring_dim(M.ring)
    table = []
    ok = True
    for i in range(1, n + 2):
        E = ext(i, M)
        gr = grade(E)
        if i == n + 1 and gr == INF:
            break
        table.append((i, gr))
        if gr < i + k:
            ok = False
    return GradeProfile(ok, k, table)


def regular_on(x, M: FPModule) -> bool:
    """Is multiplication by x injective on M?"""
    if is_zero(M):
        return True
    return multiplication_map(M, x).is_injective()


def abf_check(M: FPModule, bound: Optional[int] = None) -> bool:
    rep = gdim(M, bound)
    if not rep.finite:
        raise InputError("Gorenstein dimension is not known to be finite")
    return rep.g + depth(M) == ring_depth(M.ring)
