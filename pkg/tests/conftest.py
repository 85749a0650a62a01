import random

import pytest

from proxyvote.groups import setup_group


@pytest.fixture(scope="session")
def ctx():
    """One shared group context; immutable, so sharing across tests is safe."""
    return setup_group(b"pv-test-suite-v1")


@pytest.fixture()
def rng():
    return random.Random(0xC0FFEE)


def make_rng(seed):
    return random.Random(seed)
