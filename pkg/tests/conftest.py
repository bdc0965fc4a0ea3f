import pytest

CRITERIA = {
    1: "square inverse-precoded advantage near n^2",
    2: "ZF breaks the hardness regime",
    3: "B and E agree under equal noise conditions",
    4: "SVD-precoder advantage limit",
    5: "extreme singular value edges",
    6: "least singular value law",
    7: "deterministic inequality suite",
    8: "closed-form bounds hold one-sided",
    9: "ML never worse than ZF",
    10: "byte-identical reproducibility",
}

_outcomes: dict[int, list[tuple[str, bool, list[str]]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        details = [v for k, v in item.user_properties if k == "detail"]
        _outcomes.setdefault(marker.args[0], []).append((item.name, report.passed, details))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        runs = _outcomes.get(n)
        if not runs:
            tr.write_line(f"criterion {n:>2}: NOT RUN  {CRITERIA[n]}")
            continue
        ok = all(passed for _, passed, _ in runs)
        tr.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {CRITERIA[n]}")
        for _, _, details in runs:
            for d in details:
                tr.write_line(f"               {d}")


@pytest.fixture
def detail(record_property):
    """Attach a measured value to the acceptance summary line."""

    def add(text: str):
        record_property("detail", text)

    return add
