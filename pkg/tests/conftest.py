import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    entry = _CRITERIA.setdefault(num, {"title": title, "state": "PASS", "detail": ""})
    if rep.skipped:
        if entry["state"] == "PASS":
            entry["state"] = "SKIP"
            entry["detail"] = str(rep.longrepr[-1]) if isinstance(rep.longrepr, tuple) else ""
    elif rep.failed:
        entry["state"] = "FAIL"
        crash = getattr(rep.longrepr, "reprcrash", None)
        msg = crash.message if crash is not None else rep.longreprtext.strip()
        entry["detail"] = msg.splitlines()[0][:160]
    elif rep.when == "call" and getattr(item, "_criterion_note", ""):
        entry["detail"] = item._criterion_note


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        e = _CRITERIA[num]
        line = f"criterion {num}: {e['state']}  {e['title']}"
        if e["detail"]:
            line += f"  [{e['detail']}]"
        tr.write_line(line)
