"""Repeats the acceptance verdict lines after the run, uncaptured."""


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    results = getattr(test_acceptance, "RESULTS", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        ok, note = results[num]
        line = f"CRITERION {num}: {'PASS' if ok else 'FAIL'}"
        if note:
            line += f"  [{note}]"
        terminalreporter.write_line(line)
