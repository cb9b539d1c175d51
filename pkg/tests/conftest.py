import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, taken from the test outcomes."""
    rows = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            m = _CRITERION.search(getattr(rep, "nodeid", ""))
            if not m or (rep.when != "call" and rep.passed):
                continue
            num = int(m.group(1))
            prev_ok, _, prev_secs = rows.get(num, (True, "", 0.0))
            rows[num] = (prev_ok and rep.passed, m.group(2).replace("_", " "), prev_secs + rep.duration)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(rows):
        ok, name, secs = rows[num]
        terminalreporter.write_line(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {name}  ({secs:.2f} s)")
