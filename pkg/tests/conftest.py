import pytest

_verdicts = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")
    config.stash[_verdicts] = {}


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    marker = item.get_closest_marker("criterion")
    if marker and (report.when == "call" or report.failed):
        number, title = marker.args
        status = "PASS" if report.passed else "FAIL"
        item.config.stash[_verdicts][number] = f"criterion {number:2d} {status}  {title}"
    return report


def pytest_terminal_summary(terminalreporter, config):
    verdicts = config.stash[_verdicts]
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for n in sorted(verdicts):
            terminalreporter.write_line(verdicts[n])
