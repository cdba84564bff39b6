import pytest

from hvtcheck import zoo


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture(scope="session")
def rev():
    return zoo.reversible_ca()


@pytest.fixture(scope="session")
def spin():
    return zoo.true_spin_model()


@pytest.fixture(scope="session")
def pr():
    return zoo.pr_box_spacetime()


@pytest.fixture(scope="session")
def stoch():
    return zoo.local_stochastic()
