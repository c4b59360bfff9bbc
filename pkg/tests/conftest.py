import pytest

from quasiwhittaker import _kernels
from quasiwhittaker.catalog import build, phi_from_assignments

BACKENDS = _kernels.backends()


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    mod = BACKENDS[request.param]
    monkeypatch.setattr(_kernels, "row_reduce", mod.row_reduce)
    monkeypatch.setattr(_kernels, "act_monomial", mod.act_monomial)
    return request.param


@pytest.fixture
def make_phi():
    def make(name, values, params=None, rule=None, window=12):
        pres = build(name, params)
        return pres, phi_from_assignments(pres, values, rule, window)
    return make


_ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    if report.when == "call" or report.failed or report.skipped:
        prev = _ACCEPTANCE.get(number, (title, "PASS"))[1]
        status = "FAIL" if report.failed else "SKIP" if report.skipped else "PASS"
        _ACCEPTANCE[number] = (title, "FAIL" if "FAIL" in (prev, status) else status)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")
