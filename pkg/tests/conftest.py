import pytest
from hypothesis import settings

from dldd.graph import build_graph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def path3():
    return build_graph([(0, 1, 1), (1, 2, 1)], 3)


@pytest.fixture
def k2():
    return build_graph([(0, 1, 1), (1, 0, 1)], 2)


# acceptance report: one line per criterion, echoed inline and in the summary
_CRITERIA = {}


@pytest.fixture
def report(request):
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        _CRITERIA[number] = line
        with request.config.pluginmanager.get_plugin("capturemanager").global_and_fixture_disabled():
            print("\n" + line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])
