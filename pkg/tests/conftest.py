import pytest

from sgcoherent import _accel

ACCEPTANCE = {}


@pytest.fixture
def record_criterion(request):
    """Store a one-line result for the acceptance summary."""

    def record(number, text):
        ACCEPTANCE[number] = (request.node.nodeid, text)

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        item.config._sg_outcomes = getattr(item.config, "_sg_outcomes", {})
        item.config._sg_outcomes[item.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    outcomes = getattr(config, "_sg_outcomes", {})
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        nodeid, text = ACCEPTANCE[number]
        status = "PASS" if outcomes.get(nodeid) == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {text}")


@pytest.fixture(params=[b for b in _accel.BACKENDS if b == "numpy" or _accel.HAVE_NUMBA])
def backend(request):
    previous = _accel.set_backend(request.param)
    yield request.param
    _accel.set_backend(previous)
