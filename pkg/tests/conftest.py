import re

CRITERIA = {
    1: "isothermal identity",
    2: "canonical construction",
    3: "curvature route equivalence",
    4: "anchor values",
    5: "closed-form surface",
    6: "degeneracy",
    7: "spinor suite",
    8: "motion and Mobius action",
    9: "associated family",
    10: "parser",
    11: "determinism",
}

_outcomes = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_ac(\d+)_", report.nodeid)
    if not m or "test_acceptance" not in report.nodeid:
        return
    k = int(m.group(1))
    failed = report.failed or (report.when == "call" and report.skipped)
    if failed:
        _outcomes[k] = False
    elif report.when == "call":
        _outcomes.setdefault(k, True)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k, name in CRITERIA.items():
        if k in _outcomes:
            status = "PASS" if _outcomes[k] else "FAIL"
            terminalreporter.write_line(f"AC{k:<2} {name}: {status}")
