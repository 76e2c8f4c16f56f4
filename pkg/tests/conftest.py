from __future__ import annotations

import pytest

from arrmono.cache import construct
from arrmono.exactring import gen_primes
from arrmono.g31build import gradient
from arrmono.koszul import build_minor_table, syzygy_families
from arrmono.pipeline import RunConfig, run_pipeline


@pytest.fixture(scope="session")
def arr():
    return construct()


@pytest.fixture(scope="session")
def grad(arr):
    return gradient(arr.f)


@pytest.fixture(scope="session")
def minors(arr):
    return build_minor_table(arr.P)


@pytest.fixture(scope="session")
def families(arr):
    return syzygy_families(arr.E, arr.P)


@pytest.fixture(scope="session")
def primes():
    return gen_primes(2, 62, 0)


@pytest.fixture(scope="session")
def full_run(tmp_path_factory):
    """One complete default pipeline run shared by the report and acceptance tests."""
    cache = tmp_path_factory.mktemp("cache")
    config = RunConfig(cache_dir=str(cache))
    report, code = run_pipeline(config)
    return config, report, code


# one line per acceptance criterion, printed after the run
CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.fixture
def criterion():
    """Record the outcome of one acceptance criterion, including failures."""

    class Recorder:
        def __init__(self):
            self.number = None
            self.detail = ""

        def __call__(self, number: int, detail: str = ""):
            self.number, self.detail = number, detail
            CRITERIA[number] = ("FAIL", detail)
            return self

        def note(self, detail: str):
            self.detail = detail

    rec = Recorder()
    yield rec
    if rec.number is not None:
        CRITERIA[rec.number] = (CRITERIA[rec.number][0], rec.detail)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rec = item.funcargs.get("criterion") if hasattr(item, "funcargs") else None
    if rec is not None and rec.number is not None and rep.when == "call":
        state = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        CRITERIA[rec.number] = (state, rec.detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        state, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {state}  {detail}")
