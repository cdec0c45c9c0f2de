import pytest

from bmop import verify
from bmop.errors import DomainError


def test_unknown_suite():
    with pytest.raises(DomainError):
        verify.run_suite("nope")


def test_single_suite_shape():
    reports = verify.run_suite("bessel")
    assert len(reports) == 1
    payload = reports[0].as_dict()
    assert payload["schema"] == "bmop/1"
    assert payload["suite"] == "bessel"
    assert isinstance(payload["pass"], bool)
    assert all({"name", "max_error", "tolerance", "pass"} == set(c)
               for c in payload["checks"])


def test_check_result_pass_logic():
    good = verify.CheckResult("x", 1e-12, 1e-10)
    bad = verify.CheckResult("y", 1e-8, 1e-10)
    assert good.passed and not bad.passed
    rep = verify.SuiteReport("s", [good, bad])
    assert not rep.passed
