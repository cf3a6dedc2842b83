import random

import pytest

from trsattack import mceliece, trs
from trsattack.fields import tower_create


@pytest.fixture(scope="session")
def tower_small():
    """q0 = 4 inside F_16; the tiny tower used for exhaustive oracles."""
    return tower_create(2, 1)


@pytest.fixture(scope="session")
def tower_127():
    """q0 = 2^7 inside F_2^14; the small strict-valid parameter field."""
    return tower_create(7, 1)


@pytest.fixture(scope="session")
def params_127():
    return trs.make_params(128, 127, 60, 1)


@pytest.fixture(scope="session")
def keypair_127(params_127):
    return mceliece.keygen(params_127, random.Random(0xC0DE))


def planted_scale(tower, alpha_true, alpha_hat):
    """The base-field a with alpha_hat = a * alpha_true, or None."""
    a = None
    for x, y in zip(alpha_true, alpha_hat):
        if int(x):
            a = tower.div(int(y), int(x))
            break
    if a is None:
        return None
    for x, y in zip(alpha_true, alpha_hat):
        if tower.mul(a, int(x)) != int(y):
            return None
    return a


def affine_fit(tower, alpha_true, alpha_prime):
    """(a, b) with alpha_prime = a*alpha_true + b on all coordinates, or None."""
    x0, x1 = int(alpha_true[0]), int(alpha_true[1])
    y0, y1 = int(alpha_prime[0]), int(alpha_prime[1])
    a = tower.div(y0 ^ y1, x0 ^ x1)
    b = y0 ^ tower.mul(a, x0)
    for x, y in zip(alpha_true, alpha_prime):
        if tower.mul(a, int(x)) ^ b != int(y):
            return None
    return a, b
