"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import pytest

from mpsvar.reproduce import CHECKS, run_check

RESULTS = {}


@pytest.mark.parametrize("number", [c[0] for c in CHECKS],
                         ids=[f"criterion_{c[0]:02d}" for c in CHECKS])
def test_criterion(number, capsys):
    r = run_check(number, seed=0)
    RESULTS[number] = r
    with capsys.disabled():
        print("\n" + r.line())
    assert r.passed, r.detail
