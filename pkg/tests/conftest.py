import random

import pytest

from chebauth.cheb import gen_modulus
from chebauth.harness import build_deployment

TOY_SEED = 7


@pytest.fixture(scope="session")
def toy_deployment():
    """64-bit modulus deployment shared across tests; runs stay cheap."""
    return build_deployment(TOY_SEED, bits=64)


@pytest.fixture(scope="session")
def cert256():
    return gen_modulus(256, 200, random.Random(42))


@pytest.fixture(scope="session")
def deployment256(cert256):
    return build_deployment(11, bits=256, certificate=cert256)
