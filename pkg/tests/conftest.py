import pytest

from judgagg.document import load_fixture


@pytest.fixture(params=["F1", "F2", "F3", "F4", "PREF3"])
def any_fixture(request):
    return load_fixture(request.param)


@pytest.fixture
def f1():
    return load_fixture("F1")


@pytest.fixture
def f2():
    return load_fixture("F2")


@pytest.fixture
def f4():
    return load_fixture("F4")


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[n])
