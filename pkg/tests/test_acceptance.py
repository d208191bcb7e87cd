"""Exit criteria, run at their stated tolerances; one PASS/FAIL line per criterion."""

import pytest

from ellwk import suite

pytestmark = pytest.mark.acceptance


@pytest.mark.parametrize("fn", suite.CRITERIA, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_criterion(fn, capsys):
    result = fn()
    with capsys.disabled():
        print("\n" + result.line)
    assert result.passed, result.details
