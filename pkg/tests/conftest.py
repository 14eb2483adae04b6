import pytest

from oracles import named_frames

_ACCEPTANCE = {}


@pytest.fixture(params=sorted(named_frames()))
def named_frame(request):
    return named_frames()[request.param]


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_ACCEPTANCE, key=lambda s: int(s.split("test_criterion_")[1].split("_")[0])):
        name = nodeid.split("::")[-1]
        verdict = "PASS" if _ACCEPTANCE[nodeid] == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
