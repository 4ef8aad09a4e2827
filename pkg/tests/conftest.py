import os

import pytest
from hypothesis import HealthCheck, settings

from iamspace.corpus import divergent_corpus, random_corpus
from iamspace.terms import parse

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=500,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

EXAMPLE = r"(\z.z)((\x.x x)(\y.y))"
IDAPP = r"(\x.x)(\y.y)"
OMEGA = r"(\x.x x)(\x.x x)"

CORPUS_SIZE = 500
CORPUS_SEED = 0


@pytest.fixture(scope="session")
def example():
    return parse(EXAMPLE)


@pytest.fixture(scope="session")
def idapp():
    return parse(IDAPP)


@pytest.fixture(scope="session")
def omega():
    return parse(OMEGA)


@pytest.fixture(scope="session")
def corpus():
    return random_corpus(CORPUS_SIZE, CORPUS_SEED)


@pytest.fixture(scope="session")
def divergent():
    return divergent_corpus(50, CORPUS_SEED)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    results = test_acceptance.RESULTS
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(test_acceptance.TITLES):
        status, title, detail = results.get(n, ("NOT RUN", test_acceptance.TITLES[n], ""))
        terminalreporter.write_line(f"criterion {n} {status}: {title}" + (f" ({detail})" if detail else ""))
