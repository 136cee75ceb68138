import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

# criterion number -> (title, [(test id, outcome, detail)])
_ACCEPTANCE: dict[int, tuple[str, list]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        number, title = marker.args
        details = [v for k, v in item.user_properties if k == "detail"]
        state = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _ACCEPTANCE.setdefault(number, (title, []))[1].append((item.name, state, "; ".join(details)))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, results = _ACCEPTANCE[number]
        states = {s for _, s, _ in results}
        verdict = "FAIL" if "FAIL" in states else ("SKIP" if states == {"SKIP"} else "PASS")
        tr.write_line(f"criterion {number:>2}: {verdict}  {title}")
        for name, state, detail in results:
            if detail or len(results) > 1:
                tr.write_line(f"              {state:<4} {name}{': ' + detail if detail else ''}")
