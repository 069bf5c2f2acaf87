def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
