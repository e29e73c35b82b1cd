import pytest

from xshuffle.verify import SUITES, run_suite


@pytest.mark.slow
@pytest.mark.parametrize("suite", list(SUITES))
def test_suite_passes(suite):
    results = run_suite(suite)
    failed = [(r.name, r.detail) for r in results if not r.ok]
    assert not failed
    assert all(r.seconds >= 0 for r in results)


def test_failure_is_reported(monkeypatch):
    import xshuffle.verify as v
    monkeypatch.setitem(v.SUITES, "series", [("always fails", lambda n: (False, "witness 42"))])
    (r,) = run_suite("series")
    assert not r.ok and r.detail == "witness 42"
