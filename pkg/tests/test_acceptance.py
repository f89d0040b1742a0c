"""One test per acceptance criterion; every comparison is exact."""
import pytest

from hallforge.acceptance import CRITERIA, make_generics, run_criterion

RESULTS: list = []


@pytest.fixture(scope="module")
def generics():
    return make_generics()


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, generics):
    res = run_criterion(number, generics)
    RESULTS.append(res.line())
    print(res.line())
    assert res.passed, res.failures[:10]
