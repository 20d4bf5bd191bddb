"""Duals, the Auslander transpose D(M), the evaluation map and pushforwards."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import InputError, NotTorsionless, TheoryViolation
from .fpmodules import (FPModule, ModuleMap, dual_data, ext, hilbert_series, is_zero, minimalize,
                        preimage, subquotient)
from .groebner import buchberger, kernel_matrix
from .polyalg import (GradedFreeModule, HomogeneousMatrix, matrix_compose, matrix_transpose,
                      vec_add)


def transpose(M: FPModule, minimal: bool = True) -> FPModule:
    """D(M) = coker(u^T); from the minimal presentation unless ``minimal`` is False."""
    u = minimalize(M).presentation if minimal else M.presentation
    return FPModule(M.ring, matrix_transpose(u))


# -- evaluation map ------------------------------------------------------------

@dataclass
class SigmaReport:
    module: FPModule
    K: FPModule
    C: FPModule
    ext1_of_DM: FPModule
    ext2_of_DM: FPModule
    torsionless: bool
    reflexive: bool


def _sigma_parts(M: FPModule, minimal: bool = True):
    """Kernel and cokernel of M -> M** read off the generators of M*."""
    u, Z, P = dual_data(M, minimal)
    ring = M.ring
    phiT = matrix_transpose(Z)           # F0 -> P0^*, the evaluation on generators
    K = subquotient(ring, kernel_matrix(phiT, ring.gb), u)
    Mss = kernel_matrix(matrix_transpose(P), ring.gb)   # M** inside P0^*
    C = subquotient(ring, Mss, phiT)
    return K, C


def sigma(M: FPModule) -> SigmaReport:
    """K_M and C_M computed from the evaluation map and, separately, as Ext^{1,2}(D(M), R)."""
    K, C = _sigma_parts(M)
    D = transpose(M)
    e1, e2 = ext(1, D), ext(2, D)
    if hilbert_series(K) != hilbert_series(e1):
        raise TheoryViolation("ker(sigma) and Ext^1(D(M),R) have different Hilbert series")
    if hilbert_series(C) != hilbert_series(e2):
        raise TheoryViolation("coker(sigma) and Ext^2(D(M),R) have different Hilbert series")
    kz = is_zero(K)
    return SigmaReport(M, K, C, e1, e2, kz, kz and is_zero(C))


def is_torsionless(M: FPModule) -> bool:
    K, _ = _sigma_parts(M)
    return is_zero(K)


def is_reflexive(M: FPModule) -> bool:
    K, C = _sigma_parts(M)
    return is_zero(K) and is_zero(C)


@dataclass(frozen=True)
class TorsionlessResult:
    result: bool
    k: int
    witness: Optional[int] = None   # first i with Ext^i(D(M),R) != 0

    def __bool__(self):
        return self.result


def is_k_torsionless(M: FPModule, k: int) -> TorsionlessResult:
    if k < 0:
        raise InputError("k must be non-negative")
    D = transpose(M)
    for i in range(1, k + 1):
        if not is_zero(ext(i, D)):
            return TorsionlessResult(False, k, i)
    return TorsionlessResult(True, k)


# -- universal pushforward -----------------------------------------------------

@dataclass
class PushforwardCertificate:
    """0 -> M --embedding--> free --> N -> 0 with Ext^1(N,R) = 0."""

    module: FPModule
    embedding: HomogeneousMatrix      # F0(M) -> P0^*
    N: FPModule
    ext1_vanishes: bool

    @property
    def n(self) -> int:
        return self.embedding.target.rank

    @property
    def free(self) -> GradedFreeModule:
        return self.embedding.target


def universal_pushforward(M: FPModule) -> PushforwardCertificate:
    """Embed M into the dual of a free cover of M*; M must be torsionless."""
    u, Z, _ = dual_data(M, minimal=False)
    ring = M.ring
    phiT = matrix_transpose(Z)
    K = subquotient(ring, kernel_matrix(phiT, ring.gb), u)
    if not is_zero(K):
        raise NotTorsionless("M is not torsionless: the evaluation map has a kernel")
    N = FPModule(ring, phiT)
    if not is_zero(ext(1, N)):
        raise TheoryViolation("pushforward cokernel has Ext^1(N,R) != 0")
    return PushforwardCertificate(M, phiT, N, True)


@dataclass
class SyzygyEmbedding:
    """Exact chain 0 -> M -> P_0 -> ... -> P_{k-1}, or the step where it broke."""

    module: FPModule
    k: int
    maps: List[HomogeneousMatrix]     # F0(M) -> P_0^*, then P_j -> P_{j+1}
    cokernels: List[FPModule]
    success: bool
    failed_at: Optional[int] = None

    def __bool__(self):
        return self.success


def syzygy_embedding(M: FPModule, k: int) -> SyzygyEmbedding:
    if k < 0:
        raise InputError("k must be non-negative")
    maps, coks = [], []
    cur = M
    for j in range(k):
        try:
            cert = universal_pushforward(cur)
        except NotTorsionless:
            return SyzygyEmbedding(M, k, maps, coks, False, j)
        maps.append(cert.embedding)
        coks.append(cert.N)
        cur = cert.N
    return SyzygyEmbedding(M, k, maps, coks, True)


# -- short exact sequences and the six-term dual sequence ----------------------

@dataclass
class ShortExactSequence:
    """0 -> M1 --iota--> M --p--> M2 -> 0, maps given on generators."""

    M1: FPModule
    M: FPModule
    M2: FPModule
    iota: HomogeneousMatrix
    p: HomogeneousMatrix

    def validate(self) -> List[str]:
        """Failed conditions (empty when the sequence is exact)."""
        reasons = []
        for A, B in ((self.M1, self.M), (self.M, self.M2)):
            if A.ring != B.ring:
                return ["modules over different rings"]
        try:
            i = ModuleMap(self.M1, self.M, self.iota)
            p = ModuleMap(self.M, self.M2, self.p)
        except Exception as exc:   # degree mismatch
            return [str(exc)]
        if not i.is_well_defined():
            reasons.append("iota not well defined")
        if not p.is_well_defined():
            reasons.append("p not well defined")
        if reasons:
            return reasons
        comp = matrix_compose(self.p, self.iota)
        if not all(self.M2.gb().contains(c) for c in comp.columns if c):
            reasons.append("p o iota != 0")
        if not i.is_injective():
            reasons.append("iota not injective")
        if not p.is_surjective():
            reasons.append("p not surjective")
        _, kp = p.kernel()
        im = buchberger(self.M.ring.S, self.M.presentation.target,
                        list(self.iota.columns) + list(self.M.presentation.columns),
                        self.M.ring.gb, track=False)
        if not all(im.contains(c) for c in kp.columns if c):
            reasons.append("ker p not contained in im iota")
        return reasons

    def is_valid(self) -> bool:
        return not self.validate()


def _lift_through(target_cols, gens: HomogeneousMatrix, extra: HomogeneousMatrix, ring):
    """For each v, coefficients a with gens*a = v modulo im(extra) + I."""
    cols = list(gens.columns) + list(extra.columns)
    gb = buchberger(ring.S, gens.target, [dict(c) for c in cols], ring.gb, track=True)
    m = gens.source.rank
    out = []
    for v in target_cols:
        a = gb.lift(v) if v else {}
        out.append({(i, e): c for (i, e), c in a.items() if i < m})
    return out


def stacked_presentation(ses: ShortExactSequence):
    """Presentation U = [[u1, -c], [0, u2]] of M on the generators F0(M1) + F0(M2).

    Returns ``(U, c)``; the generator map is [iota | s] with s lifting F0(M2).
    """
    ring = ses.M.ring
    S = ring.S
    u1, u, u2 = ses.M1.presentation, ses.M.presentation, ses.M2.presentation
    F = S.field
    unit = [{(k, S.one_exps): F.one} for k in range(u2.target.rank)]
    s_cols = _lift_through(unit, ses.p, u2, ring)
    s = HomogeneousMatrix(S, u2.target, u.target, s_cols)
    su2 = matrix_compose(s, u2)
    c_cols = _lift_through(su2.columns, ses.iota, u, ring)
    c = HomogeneousMatrix(S, u2.source, u1.target, c_cols)
    r1 = u1.target.rank
    top = [dict(col) for col in u1.columns]
    neg = [{k: -v for k, v in col.items()} for col in c.columns]
    right = [vec_add(a, {(r1 + i, e): v for (i, e), v in b.items()}, F)
             for a, b in zip(neg, u2.columns)]
    U = HomogeneousMatrix(S, u1.source + u2.source, u1.target + u2.target, top + right)
    return U, c


@dataclass
class SixTermResult:
    """0 -> M2* -> M* -> M1* -> D(M2) -> D(M) -> D(M1) -> 0."""

    maps: List[HomogeneousMatrix]
    exact_at: List[bool]             # positions M2*, M*, M1*, D(M2), D(M), D(M1)
    C: FPModule                      # coker(M* -> M1*)
    D: Tuple[FPModule, FPModule, FPModule]   # D(M2), D(M), D(M1)

    @property
    def exact(self) -> bool:
        return all(self.exact_at)


def _block_inclusion(S, small: GradedFreeModule, big: GradedFreeModule, offset: int):
    one = S.field.one
    return HomogeneousMatrix(S, small, big, [{(offset + i, S.one_exps): one} for i in range(small.rank)])


def _block_projection(S, big: GradedFreeModule, small: GradedFreeModule, offset: int):
    one = S.field.one
    cols = []
    for j in range(big.rank):
        i = j - offset
        cols.append({(i, S.one_exps): one} if 0 <= i < small.rank else {})
    return HomogeneousMatrix(S, big, small, cols)


def _exact_between(ring, A, f, B, h, C) -> bool:
    """Exactness of A -f-> B -h-> C for subquotients (gens, rels) of free modules."""
    gA, _ = A
    gB, rB = B
    gC, rC = C
    S = ring.S
    # composite vanishes
    if h is not None and gA is not None and f is not None:
        hfg = matrix_compose(h, matrix_compose(f, gA))
        if hfg.columns and any(hfg.columns):
            gb = buchberger(S, rC.target, [dict(c) for c in rC.columns], ring.gb, track=False)
            if not all(gb.contains(c) for c in hfg.columns if c):
                return False
    # ker h on B
    if h is None:
        kgen = gB.columns
    else:
        pre = preimage(matrix_compose(h, gB), rC, ring)
        kgen = matrix_compose(gB, pre).columns
    if f is None or gA is None:
        target = list(rB.columns)
    else:
        target = list(matrix_compose(f, gA).columns) + list(rB.columns)
    gb = buchberger(S, gB.target, [dict(c) for c in target if c], ring.gb, track=False)
    return all(gb.contains(c) for c in kgen if c)


def six_term(ses: ShortExactSequence) -> SixTermResult:
    reasons = ses.validate()
    if reasons:
        raise InputError("invalid short exact sequence: " + "; ".join(reasons))
    ring = ses.M.ring
    S = ring.S
    gb = ring.gb
    U, c = stacked_presentation(ses)
    u1, u2 = ses.M1.presentation, ses.M2.presentation
    F0_1, F0_2 = u1.target.dual(), u2.target.dual()
    F1_1, F1_2 = u1.source.dual(), u2.source.dual()
    F0, F1 = U.target.dual(), U.source.dual()
    u1T, u2T, UT = matrix_transpose(u1), matrix_transpose(u2), matrix_transpose(U)
    Z1 = kernel_matrix(u1T, gb)
    Z2 = kernel_matrix(u2T, gb)
    Z = kernel_matrix(UT, gb)
    f1 = _block_inclusion(S, F0_2, F0, F0_1.rank)
    f2 = _block_projection(S, F0, F0_1, 0)
    cT = matrix_transpose(c)
    f3 = HomogeneousMatrix(S, cT.source, cT.target, [{k: -v for k, v in col.items()} for col in cT.columns])
    f4 = _block_inclusion(S, F1_2, F1, F1_1.rank)
    f5 = _block_projection(S, F1, F1_1, 0)

    def zero_rels(F):
        return HomogeneousMatrix.zero(S, GradedFreeModule(()), F)
    A = [(Z2, zero_rels(F0_2)), (Z, zero_rels(F0)), (Z1, zero_rels(F0_1)),
         (HomogeneousMatrix.identity(S, F1_2), u2T), (HomogeneousMatrix.identity(S, F1), UT),
         (HomogeneousMatrix.identity(S, F1_1), u1T)]
    fs = [f1, f2, f3, f4, f5]
    exact = []
    for pos in range(6):
        prev = A[pos - 1] if pos > 0 else (None, None)
        f = fs[pos - 1] if pos > 0 else None
        h = fs[pos] if pos < 5 else None
        nxt = A[pos + 1] if pos < 5 else (None, None)
        exact.append(_exact_between(ring, prev, f, A[pos], h, nxt))
    C = subquotient(ring, Z1, matrix_compose(f2, Z))
    D = (FPModule(ring, u2T), FPModule(ring, UT), FPModule(ring, u1T))
    return SixTermResult(fs, exact, C, D)


def split_sequence(M1: FPModule, M2: FPModule) -> ShortExactSequence:
    """0 -> M1 -> M1 + M2 -> M2 -> 0."""
    from .fpmodules import direct_sum
    S = M1.ring.S
    M = direct_sum(M1, M2)
    F = M.presentation.target
    iota = _block_inclusion(S, M1.presentation.target, F, 0)
    p = _block_projection(S, F, M2.presentation.target, M1.num_generators)
    return ShortExactSequence(M1, M, M2, iota, p)
