import numpy as np
import pytest

_criteria: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    detail = "; ".join(str(v) for k, v in report.user_properties if k == "detail")
    _criteria[str(marker.args[0])] = ("PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria, key=int):
        status, detail = _criteria[k]
        terminalreporter.write_line(f"criterion {k}: {status}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
