from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

# acceptance lines, filled by tests/test_acceptance.py and printed at the end
ACCEPTANCE: list[tuple[int, bool, float, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for k, ok, secs, note in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {secs:7.1f}s  {note}")
