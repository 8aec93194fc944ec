import pytest

_KEY = pytest.StashKey[dict]()


@pytest.fixture
def record_criterion(request):
    """Record the outcome of an acceptance criterion for the terminal summary."""
    results = request.config.stash.setdefault(_KEY, {})

    def record(number: int, title: str, ok: bool, detail: str = ""):
        results[number] = (title, ok, detail)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok, detail = results[number]
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
