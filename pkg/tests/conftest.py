import math

import numpy as np
import pytest

from isoparam import ParamSet, SupportFourier, check_conditions

PI = math.pi


def random_params(rng):
    """Uniform draw in [-5, 5]^8 projected onto the base condition block.

    eta, xi, zeta are clamped to >= 0 and lambda to <= 0; draws whose three
    linear forms come out negative are rejected.
    """
    while True:
        alpha, delta, mu, sigma, eta, lam, xi, zeta = rng.uniform(-5, 5, 8)
        p = ParamSet(alpha, delta, mu, sigma, max(eta, 0.0), min(lam, 0.0), max(xi, 0.0), max(zeta, 0.0))
        if check_conditions(p).ok_1_9:
            return p


@pytest.fixture
def disk():
    return SupportFourier(1.0)


@pytest.fixture
def oval():
    # 1 + 0.1 cos 2t
    return SupportFourier(1.0, [0.0, 0.1], [0.0, 0.0])


@pytest.fixture
def trefoil():
    # 1 + 0.05 cos 3t
    return SupportFourier(1.0, [0.0, 0.0, 0.05], [0.0, 0.0, 0.0])


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)
