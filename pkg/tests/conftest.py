import pytest

from ctsp.instance import Instance


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def T1():
    return Instance.from_triples([(1, 3, 1), (1, 1, 1)], name="T1")


@pytest.fixture
def T2():
    return Instance.from_triples([(2, 4, 2), (1, 2, 2)], name="T2")


@pytest.fixture
def T3():
    return Instance.from_triples([(2, 4, 2), (3, 1, 1)], name="T3")


# acceptance reporting: one line per criterion in the terminal summary

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or not (rep.when == "call" or rep.failed or rep.skipped):
        return
    entry = _CRITERIA.setdefault(mark.args[0], {"outcomes": [], "notes": []})
    entry["outcomes"].append(rep.outcome)
    entry["notes"].extend(v for k, v in item.user_properties if k == "note" and v not in entry["notes"])
    if rep.skipped and isinstance(rep.longrepr, tuple):
        reason = rep.longrepr[2].removeprefix("Skipped: ")
        if reason not in entry["notes"]:
            entry["notes"].append(reason)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(_CRITERIA):
        outs = _CRITERIA[num]["outcomes"]
        status = "FAIL" if "failed" in outs else "PASS" if "passed" in outs else "SKIP"
        notes = "; ".join(_CRITERIA[num]["notes"])
        terminalreporter.write_line(f"criterion {num:2d}: {status}" + (f"  ({notes})" if notes else ""))


@pytest.fixture
def note(request):
    """Attach a short result summary to the acceptance report."""
    return lambda text: request.node.user_properties.append(("note", text))
