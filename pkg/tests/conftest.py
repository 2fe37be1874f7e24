import time

import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _RESULTS.setdefault(number, {"title": title, "status": "PASS", "seconds": 0.0, "note": ""})
    if rep.when == "call":
        entry["seconds"] += call.stop - call.start
    if rep.skipped and hasattr(rep, "wasxfail"):
        entry["status"] = "FAIL (expected)"
        entry["note"] = rep.wasxfail
    elif rep.failed:
        entry["status"] = "FAIL"
    elif rep.skipped and entry["status"] == "PASS":
        entry["status"] = "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        e = _RESULTS[number]
        line = f"criterion {number:>2}: {e['status']:<15} {e['title']} ({e['seconds']:.1f} s)"
        if e["note"]:
            line += f" -- {e['note']}"
        tr.write_line(line)
