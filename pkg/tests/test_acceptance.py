"""One test per acceptance criterion; each prints its PASS/FAIL line."""
import pytest
from conftest import ACCEPTANCE_KEY

from ghz_teleport import verify


@pytest.mark.parametrize("key", list(verify.CRITERIA))
def test_criterion(key, request):
    result = verify.CRITERIA[key]()
    line = result.line()
    print(line)
    request.config.stash[ACCEPTANCE_KEY].append(line)
    assert result.passed, line


def test_numbering_is_complete():
    numbers = [verify.CRITERIA[k]().number for k in ("basis", "determinism")]
    assert numbers == [1, 12]
    assert len(verify.CRITERIA) == 12
