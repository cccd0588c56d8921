import pytest

from yukent.params import PhysicalParams, derive_scales


@pytest.fixture
def canonical():
    return PhysicalParams()


@pytest.fixture
def scales0(canonical):
    return derive_scales(canonical)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
