"""The thirteen acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (visible with ``-s`` or in the
terminal summary below) and fails with the criterion's details.
"""

import pytest

from monadpreserve.reproduce import CRITERIA, run_criterion

LINES = {}


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None and LINES:
        reporter.write_line("")
        reporter.write_sep("-", "acceptance criteria")
        for n in sorted(LINES):
            reporter.write_line(LINES[n])


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number):
    res = run_criterion(number)
    LINES[number] = res.line()
    print(res.line())
    assert res.passed, "\n".join([res.line()] + res.details)


def test_sabotaged_psi_fails_the_law_criterion():
    res = run_criterion(1, sabotage_psi=True)
    print(res.line())
    assert not res.passed
    assert any(d.startswith("FAIL") for d in res.details)
