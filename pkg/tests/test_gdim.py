import math
import random

import pytest

import gdimkit.fpmodules as FP
import gdimkit.gdim as G
from gdimkit.cli.dsl import parse_poly
from gdimkit.cli.families import random_module_fragment
from gdimkit.errors import InputError

from conftest import build, ring_of


@pytest.mark.parametrize("spec,depth,dim,gor", [
    ("QQ[x, y]", 2, 2, True),
    ("QQ[x, y, z]", 3, 3, True),
    ("QQ[x, y] / (x^2)", 1, 1, True),
    ("QQ[x, y, z] / (x*y - z^2)", 2, 2, True),
    ("QQ[x, y] / (x^2, y^2)", 0, 0, True),
    ("QQ[x, y] / (x*y)", 1, 1, True),
    ("QQ[x, y] / (x^2, x*y)", 0, 1, False),
    ("QQ[x, y, z] / (x^2, x*y, y^2)", 1, 1, False),
])
def test_ring_invariants(spec, depth, dim, gor):
    R = ring_of(spec)
    assert G.ring_depth(R) == depth
    assert G.ring_dim(R) == dim
    assert G.is_gorenstein(R) == gor


@pytest.mark.parametrize("spec,g", [("QQ[x, y]", 2), ("QQ[x, y] / (x^2)", 1),
                                    ("QQ[x, y, z]", 3), ("QQ[x, y, z] / (x*y - z^2)", 2),
                                    ("QQ[x, y] / (x^2, y^2)", 0)])
def test_gdim_of_residue_field_is_dimension(spec, g):
    rep = G.gdim(ring_of(spec).residue_field())
    assert rep.finite and rep.g == g
    assert rep.depth_M == 0 and rep.abf_consistent


def test_non_gorenstein_residue_field_is_infinite():
    rep = G.gdim(ring_of("QQ[x, y] / (x^2, x*y)").residue_field(), 6)
    assert rep.verdict == G.INFINITE and rep.g is None
    assert all(rep.ext_table[i] for i in range(1, 7))


def test_cyclic_module_over_hypersurface_has_gdim_zero():
    M = build("ring R = QQ[x, y] / (x^2);\nmodule M = coker R [[x]];")
    assert G.gdim(M).g == 0
    assert G.gdim_zero(M, 4).ok
    # infinite projective dimension nonetheless
    assert FP.resolve(M, 4).projective_dimension() is None


def test_zero_module_verdict():
    M = build("ring R = QQ[x, y];\nmodule M = coker R [[1]] target (0) source (0);")
    rep = G.gdim(M)
    assert rep.verdict == G.ZERO_MODULE and rep.to_json()["g"] is None
    assert G.grade(M) == math.inf
    with pytest.raises(InputError):
        G.depth(M)


@pytest.mark.parametrize("bound", [0, -1])
def test_bad_bound(bound):
    M = ring_of("QQ[x, y]").residue_field()
    with pytest.raises(InputError):
        G.gdim(M, bound)
    with pytest.raises(InputError):
        G.gdim_zero(M, bound)


@pytest.mark.parametrize("script,grade", [
    ("ring R = QQ[x, y, z];\nmodule M = coker R [[x]];", 1),
    ("ring R = QQ[x, y, z];\nmodule M = coker R [[x, y]];", 2),
    ("ring R = QQ[x, y, z];\nmodule M = residue R;", 3),
    ("ring R = QQ[x, y] / (x^2);\nmodule M = coker R [[x]];", 0),
    ("ring R = QQ[x, y];\nmodule M = free R (0);", 0),
])
def test_grade(script, grade):
    assert G.grade(build(script)) == grade


@pytest.mark.parametrize("seed", range(8))
def test_abf_and_depth_routes_agree(seed, gorenstein_spec):
    rng = random.Random(seed)
    M = build(f"ring R = {gorenstein_spec};\n{random_module_fragment(rng, gorenstein_spec)}")
    if FP.is_zero(M):
        return
    rep = G.gdim(M)
    assert rep.finite
    assert rep.g + G.depth(M) == G.ring_depth(M.ring)
    assert G.abf_check(M)
    assert G.depth(M) == M.ring.S.n - G._ambient_pd(M)


@pytest.mark.parametrize("seed", range(6))
def test_syzygy_of_order_depth_is_gdim_zero(seed, gorenstein_spec):
    rng = random.Random(seed)
    M = build(f"ring R = {gorenstein_spec};\n{random_module_fragment(rng, gorenstein_spec)}")
    d = G.ring_depth(M.ring)
    K = G.syzygy_module(M, d)
    if not FP.is_zero(K):
        cert = G.gdim_zero(K, 3)
        assert cert.ok and cert.reflexive


def test_gdim_zero_failure_recorded():
    k = ring_of("QQ[x, y]").residue_field()
    cert = G.gdim_zero(k, 3)
    # Ext^1(k, R) = 0 but Ext^1(D(k), R) = ker(sigma) = k
    assert not cert and cert.failure == ("D", 1)
    assert cert.reflexive is False


def test_grade_profile_on_residue_field():
    k = ring_of("QQ[x, y]").residue_field()
    prof = G.ext_grade_profile(k, 0)
    assert prof.table == [(1, math.inf), (2, 2)]
    assert prof
    assert not G.ext_grade_profile(k, 1)


@pytest.mark.parametrize("poly,expected", [("y", True), ("x", False), ("x + y", True)])
def test_regular_on(poly, expected):
    M = build("ring R = QQ[x, y];\nmodule M = coker R [[x]];")
    assert G.regular_on(parse_poly(poly, M.ring.S), M) == expected


def test_abf_check_refuses_infinite():
    k = ring_of("QQ[x, y] / (x^2, x*y)").residue_field()
    with pytest.raises(InputError):
        G.abf_check(k, 3)
