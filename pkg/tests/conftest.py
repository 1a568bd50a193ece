import re

import pytest

from bubblestar.cayley import bubble_sort_star

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(cid, text): exit criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    cid, text = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        prev = _ACCEPTANCE.get(cid)
        ok = rep.passed and (prev is None or prev[0] == "PASS")
        _ACCEPTANCE[cid] = ("PASS" if ok else "FAIL", text)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    def key(cid):
        m = re.match(r"(\d+)(.*)", cid)
        return (int(m.group(1)), m.group(2)) if m else (0, cid)

    for cid in sorted(_ACCEPTANCE, key=key):
        status, text = _ACCEPTANCE[cid]
        terminalreporter.write_line(f"criterion {cid:<6} {status}  {text}")


@pytest.fixture(scope="session")
def bs2():
    return bubble_sort_star(2)


@pytest.fixture(scope="session")
def bs3():
    return bubble_sort_star(3)


@pytest.fixture(scope="session")
def bs4():
    return bubble_sort_star(4)


@pytest.fixture(scope="session")
def bs5():
    return bubble_sort_star(5)
