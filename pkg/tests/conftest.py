import re

_ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = "; ".join(f"{k}={v}" for k, v in report.user_properties)
        _ACCEPTANCE[int(m.group(1))] = (m.group(2).replace("_", " "), report.outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        name, outcome, detail = _ACCEPTANCE[k]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {k:2d} {name}" + (f" ({detail})" if detail else ""))
