import random

import pytest

from ntruvfk import ntru_hps, ntru_prime, vfk


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture(scope="session")
def toy_lattice():
    # N=2, q=8 -> (k, P) = (3, 2); small enough for exhaustive checks
    return vfk.build(2, 8, 3, 2)


@pytest.fixture(scope="session")
def small_lattice():
    # N=3, q=32 -> (k, P) = (8, 3)
    return vfk.build(3, 32, 8, 3)


@pytest.fixture(scope="session")
def tiny_hps():
    # smallest registered-shape hps set; decryption-failure-free
    return ntru_hps.HpsParams("toyhps512101", 101, 512)


@pytest.fixture(scope="session")
def tiny_prime():
    # (17, 149, 8): x^17 - x - 1 verified irreducible mod 149
    return ntru_prime.PrimeParams("tinyprime", 17, 149, 8)
