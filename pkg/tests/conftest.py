import re
import time

_CRITERIA = {
    1: "F0.5 reproduces from reference P/R rows",
    2: "macro-average reproduces from reference rows",
    3: "alignment equals brute-force oracle",
    4: "edit roundtrip under both merge policies",
    5: "scorer fixed points",
    6: "staged training non-regression",
    7: "end-to-end correction lift",
    8: "external model scores out of scope, offline suite",
}

_results: dict[int, str] = {}
_t0 = time.perf_counter()


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    if report.when == "call":
        _results[num] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _results[num] = "failed" if report.failed else report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        outcome = _results.get(num)
        if outcome is None:
            status = "NOT RUN"
        else:
            status = {"passed": "PASS", "failed": "FAIL"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"criterion {num} ({_CRITERIA[num]}): {status}")
    terminalreporter.write_line(
        f"total suite wall time: {time.perf_counter() - _t0:.1f}s"
    )
