def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, format_line
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(format_line(n))
