import pytest

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        if report.outcome == "passed":
            _acceptance.setdefault(name, "PASS")
        else:
            _acceptance[name] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name]}  {name}")
    passed = sum(v == "PASS" for v in _acceptance.values())
    terminalreporter.write_line(f"{passed}/{len(_acceptance)} criteria passed")


@pytest.fixture
def rng():
    import random

    return random.Random(20240601)
