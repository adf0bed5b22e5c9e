import pathlib

import pytest

from ddcat import load_signature, translate_signature

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def load_fixture_sig(name):
    return load_signature((FIXTURES / name).read_text())


@pytest.fixture(scope="session")
def s0():
    return load_fixture_sig("s0.json")


@pytest.fixture(scope="session")
def s0_sig2(s0):
    return translate_signature(s0)


@pytest.fixture(scope="session")
def chain_sig():
    return load_fixture_sig("chain.json")


@pytest.fixture(scope="session")
def pinwheel_sig():
    return load_fixture_sig("pinwheel.json")


@pytest.fixture(scope="session")
def mix_sig():
    return load_fixture_sig("mix.json")


@pytest.fixture(scope="session")
def glufig_sig():
    return load_fixture_sig("glufig.json")


def fixture_path(name):
    return str(FIXTURES / name)
