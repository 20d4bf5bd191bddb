import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gdimkit.auslander as A
import gdimkit.fpmodules as FP
from gdimkit.cli.families import GORENSTEIN_FIXTURES, generate_family, random_module_fragment
from gdimkit.cli.suite import SES_KINDS, build_ses
from gdimkit.errors import InputError, NotTorsionless
from gdimkit.polyalg import HomogeneousMatrix

from conftest import build, ring_of

LINEAR = generate_family("prop8", {"n": 3})


def random_module(seed, spec):
    rng = random.Random(seed)
    return build(f"ring R = {spec};\n{random_module_fragment(rng, spec)}")


@pytest.mark.parametrize("k", range(3))
def test_linear_form_quotient_torsionless_pattern(k):
    M = build(LINEAR[k])
    assert A.is_k_torsionless(M, k)
    res = A.is_k_torsionless(M, k + 1)
    assert not res and res.witness == k + 1


def test_residue_field_is_not_torsionless():
    k = ring_of("QQ[x, y]").residue_field()
    rep = A.sigma(k)
    assert not rep.torsionless and not rep.reflexive
    assert FP.hilbert_series(rep.K) == FP.hilbert_series(k)
    with pytest.raises(NotTorsionless):
        A.universal_pushforward(k)


@pytest.mark.parametrize("spec", sorted(GORENSTEIN_FIXTURES.values()))
def test_free_modules_are_reflexive(spec):
    F = ring_of(spec).free((0, 1))
    assert A.is_reflexive(F)
    assert FP.is_zero(A.transpose(F))


@pytest.mark.parametrize("seed", range(8))
def test_sigma_parts_match_ext_of_transpose(seed, any_spec):
    M = random_module(seed, any_spec)
    rep = A.sigma(M)
    assert FP.hilbert_series(rep.K) == FP.hilbert_series(rep.ext1_of_DM)
    assert FP.hilbert_series(rep.C) == FP.hilbert_series(rep.ext2_of_DM)
    assert rep.torsionless == A.is_torsionless(M)
    assert rep.reflexive == A.is_reflexive(M)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(sorted(GORENSTEIN_FIXTURES)))
def test_transpose_is_an_involution_up_to_projectives(seed, key):
    # D(M) of a minimal presentation has no free summand, so D(D(X)) recovers it exactly
    X = A.transpose(random_module(seed, GORENSTEIN_FIXTURES[key]))
    XX = FP.minimalize(A.transpose(A.transpose(X)))
    assert FP.hilbert_series(XX) == FP.hilbert_series(X)
    assert sorted(XX.degrees) == sorted(FP.minimalize(X).degrees)


def test_free_summand_is_lost_by_double_transpose():
    M = build("ring R = QQ[x, y] / (x^2, y^2);\n"
              "module M = coker R [[0], [y]] target (0, 0) source (1);")
    DD = A.transpose(A.transpose(M))
    R = M.ring
    assert FP.hilbert_series(DD) + FP.hilbert_series(R.free()) == FP.hilbert_series(M)


@pytest.mark.parametrize("seed", range(6))
def test_raw_double_transpose_is_literal(seed, gorenstein_spec):
    M = random_module(seed, gorenstein_spec)
    DD = A.transpose(A.transpose(M, minimal=False), minimal=False)
    assert DD.presentation == M.presentation


@pytest.mark.parametrize("seed", range(6))
def test_pushforward_sequence(seed, gorenstein_spec):
    M = random_module(seed, gorenstein_spec)
    if not A.is_torsionless(M):
        with pytest.raises(NotTorsionless):
            A.universal_pushforward(M)
        return
    cert = A.universal_pushforward(M)
    assert cert.ext1_vanishes and FP.is_zero(FP.ext(1, cert.N))
    F = M.ring.free(cert.free.degrees)
    # exactness: HS(M) + HS(N) = HS(free)
    assert FP.hilbert_series(M) + FP.hilbert_series(cert.N) == FP.hilbert_series(F)


@pytest.mark.parametrize("k", range(3))
def test_syzygy_embedding_on_linear_form_quotients(k):
    M = build(LINEAR[k])
    emb = A.syzygy_embedding(M, k)
    assert emb and len(emb.maps) == k
    fail = A.syzygy_embedding(M, k + 1)
    assert not fail and fail.failed_at == k


@pytest.mark.parametrize("kind", SES_KINDS)
@pytest.mark.parametrize("seed", range(4))
def test_six_term_sequence_exact(kind, seed, gorenstein_spec):
    M = random_module(seed, gorenstein_spec)
    ses = build_ses(M, kind, seed)
    assert ses.validate() == []
    six = A.six_term(ses)
    assert six.exact, six.exact_at


def test_invalid_sequence_rejected():
    M = build("ring R = QQ[x, y];\nmodule M = coker R [[x]];")
    S = M.ring.S
    x, y = S.gens()
    F = M.ring.free((1,))
    bad = A.ShortExactSequence(F, M, M.ring.free((0,)),
                               HomogeneousMatrix.from_rows(S, [[y]], (0,), (1,)),
                               HomogeneousMatrix.identity(S, M.presentation.target))
    assert bad.validate()
    with pytest.raises(InputError):
        A.six_term(bad)


def test_split_sequence_is_valid():
    M = build("ring R = QQ[x, y] / (x^2);\nmodule M = coker R [[x]];")
    ses = A.split_sequence(M, M.ring.free((2,)))
    assert ses.is_valid()
    assert A.six_term(ses).exact


def test_negative_k_rejected():
    M = build(LINEAR[0])
    with pytest.raises(InputError):
        A.is_k_torsionless(M, -1)
