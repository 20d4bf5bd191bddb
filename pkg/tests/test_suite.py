import json

import pytest

from gdimkit.cli.suite import (SUITES, VerificationRun, _Runner, load, minimize_counterexample,
                               theorem_suite)
from gdimkit.errors import InputError, TheoryViolation


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes_on_small_count(name):
    run = theorem_suite(name, seed=2, count=3)
    assert run.passed, run.to_json()["failures"]
    assert run.counterexample is None


def test_suite_json_is_deterministic():
    a = json.dumps(theorem_suite("thm40", 5, 4).to_json(), sort_keys=True)
    b = json.dumps(theorem_suite("thm40", 5, 4).to_json(), sort_keys=True)
    assert a == b


def test_unknown_suite():
    with pytest.raises(InputError):
        theorem_suite("nosuch")


FRAG = """ring R = QQ[x, y];
module M = coker R [[x, y, x^2], [y, 0, x*y]] target (0, 0) source (1, 1, 2);"""


def test_minimizer_drops_irrelevant_data():
    # "fails" while the module still needs two generators
    small = minimize_counterexample(FRAG, lambda f: len(load(f).degrees) >= 2)
    M = load(small)
    assert len(M.degrees) == 2
    assert M.presentation.source.rank == 0


def test_failing_check_records_counterexample():
    run = VerificationRun("demo", 0)
    r = _Runner(run)
    idx = r.instance(FRAG)
    r.check("Demo", idx, lambda f: (load(f).presentation.source.rank == 0, "has relations"))

    def raises(f):
        raise TheoryViolation("boom")
    r.check("Boom", idx, raises)
    assert not run.passed
    assert run.tags() == {"Demo": (0, 1), "Boom": (0, 1)}
    assert run.counterexample.startswith("# Demo: has relations")
    j = run.to_json()
    assert j["verdict"] == "fail" and len(j["failures"]) == 2
    assert "theory violation" in j["failures"][1]["detail"]
