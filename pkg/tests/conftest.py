import pytest

from goursatkit import Distribution, load_fixture

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def record_criterion(request):
    """Store ``(number, passed, detail)`` for the end-of-run acceptance summary."""
    store = request.config.stash[_RESULTS]

    def record(number: int, checks: list[tuple[str, bool, str]]):
        store[number] = checks
        return checks

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_RESULTS, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(store):
        checks = store[number]
        failed = [c for c in checks if not c[1]]
        status = "PASS" if not failed else "FAIL"
        line = f"{status} criterion {number}"
        if failed:
            line += ": " + "; ".join(f"{label} ({detail})" for label, _, detail in failed)
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fixture_system():
    cache = {}

    def get(name):
        if name not in cache:
            sf = load_fixture(name)
            cache[name] = (sf, Distribution(sf.chart, sf.generators()))
        return cache[name]

    return get
