"""Exit criteria; one PASS/FAIL line per criterion (run with -s to see them live)."""
import pytest

from ncrat import acceptance


@pytest.mark.acceptance
@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number, capsys):
    c = acceptance.run(number)
    with capsys.disabled():
        print("\n" + c.line())
    assert c.passed, c.detail
