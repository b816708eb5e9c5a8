import pytest

_criteria: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    num = getattr(item.function, "criterion", None)
    if num is None or rep.when != "call":
        return
    detail = item.funcargs.get("criterion_detail", {})
    line = f"criterion {num:>2}: {'PASS' if rep.passed else 'FAIL'}"
    if detail:
        line += "  " + ", ".join(f"{k}={v}" for k, v in detail.items())
    _criteria[num] = line
    print(f"\n{line}")


@pytest.fixture
def criterion_detail():
    """Dict a criterion test fills with the numbers behind its verdict."""
    return {}


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        terminalreporter.write_line(_criteria[num])
