import pytest

from gdimkit.cli.dsl import parse_script
from gdimkit.cli.families import GORENSTEIN_FIXTURES, NON_GORENSTEIN_FIXTURES


def build(text: str, name: str = "M"):
    """Module ``name`` from a short script."""
    return parse_script(text).module(name)


def ring_of(spec: str):
    return parse_script(f"ring R = {spec};\nmodule M = residue R;").module("M").ring


@pytest.fixture(params=sorted(GORENSTEIN_FIXTURES))
def gorenstein_spec(request):
    return GORENSTEIN_FIXTURES[request.param]


@pytest.fixture(params=sorted(GORENSTEIN_FIXTURES) + sorted(NON_GORENSTEIN_FIXTURES))
def any_spec(request):
    return {**GORENSTEIN_FIXTURES, **NON_GORENSTEIN_FIXTURES}[request.param]


# criterion number -> (passed, summary); filled by test_acceptance
ACCEPTANCE: dict = {}


def record(number: int, passed: bool, summary: str):
    ACCEPTANCE[number] = (passed, summary)
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {summary}"
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, summary = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {summary}")
