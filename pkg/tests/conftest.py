import pytest

from chebsylv import BUILTINS, build_sieve, e_profile

_ACCEPTANCE_OUTCOMES: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "::test_criterion_" in report.nodeid:
        _ACCEPTANCE_OUTCOMES[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion."""
    if not _ACCEPTANCE_OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE_OUTCOMES):
        verdict = "PASS" if _ACCEPTANCE_OUTCOMES[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{name}: {verdict}")


@pytest.fixture(scope="session")
def tables_10k():
    return build_sieve(10**4)


@pytest.fixture(scope="session")
def tables_100k():
    return build_sieve(10**5)


@pytest.fixture(scope="session")
def tables_1m():
    return build_sieve(10**6)


@pytest.fixture(scope="session")
def profiles():
    """E-profiles of every built-in scheme, computed once."""
    return {name: e_profile(s) for name, s in BUILTINS.items()}
