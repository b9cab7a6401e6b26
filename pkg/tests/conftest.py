import pytest

from plam.gen import closed_corpus

CORPUS_SEED = 12345
CORPUS_SIZE = 500
CORPUS_MAX_TERM = 12


@pytest.fixture(scope="session")
def corpus():
    """The deterministic closed-term corpus shared by the heavier suites."""
    return closed_corpus(CORPUS_SEED, CORPUS_SIZE, max_size=CORPUS_MAX_TERM)


@pytest.fixture(scope="session")
def small_corpus():
    """A smaller corpus for the game-certificate and tree suites."""
    return closed_corpus(777, 120, max_size=8)
