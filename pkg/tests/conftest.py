import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion; returns the verdict."""
    lines = request.config.stash.setdefault(_LINES, [])

    def report(number: int, title: str, checks: list[tuple[str, bool]]) -> bool:
        failed = [label for label, ok in checks if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {number:2d}: {status}  {title}"
        if failed:
            line += "  [failed: " + "; ".join(failed) + "]"
        lines.append(line)
        print(line)
        return not failed

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for ln in sorted(lines):
            terminalreporter.write_line(ln)
