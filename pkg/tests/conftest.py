import pytest
from hypothesis import HealthCheck, settings

from plabic_dimer.collection import enumerate_maximal_collections
from plabic_dimer.dimer import figure_collection, gamma_of_collection

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SWEEP = [(2, 4), (2, 5), (2, 6), (3, 6)]


@pytest.fixture(scope="session")
def fig():
    C = figure_collection()
    return C, gamma_of_collection(C)


@pytest.fixture(scope="session")
def swept():
    """(collection, quiver) for every enumerated collection plus the (3,7) figure."""
    out = []
    for k, n in SWEEP:
        for C in enumerate_maximal_collections(k, n):
            out.append((C, gamma_of_collection(C)))
    C = figure_collection()
    out.append((C, gamma_of_collection(C)))
    return out


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
