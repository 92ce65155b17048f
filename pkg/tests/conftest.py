import os

import pytest

from semioval.plane import plane_of_order

SEED = int(os.environ.get("SEMIOVAL_TEST_SEED", "20240611"))


@pytest.fixture(scope="session")
def seed():
    return SEED


@pytest.fixture(scope="session")
def pg11():
    return plane_of_order(11)


@pytest.fixture(scope="session")
def size26(pg11):
    from semioval.analysis import PointSet
    from semioval.fixtures import SIZE26, fixture_text
    from semioval.plane import parse_points

    return PointSet(pg11, parse_points(fixture_text(SIZE26), pg11))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        status, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {status} - {detail}")


def pytest_runtest_logreport(report):
    # a criterion that errored before recording still gets its FAIL line
    name = report.nodeid.rsplit("::", 1)[-1]
    if report.when != "call" or not report.failed or not name.startswith("test_criterion_"):
        return
    from test_acceptance import RESULTS

    n = int(name.split("_")[2])
    if n not in RESULTS:
        RESULTS[n] = ("FAIL", str(report.longrepr).splitlines()[-1][:200])
