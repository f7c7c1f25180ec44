import numpy as np
import pytest
from hypothesis import settings, strategies as st

from ffrigidity.ffield import Poly

# repeatable property runs
settings.register_profile("repeatable", derandomize=True)
settings.load_profile("repeatable")

PRIMES = (2, 3, 5)


def polys(p, max_deg=8, nonzero=False):
    coeffs = st.lists(st.integers(0, p - 1), min_size=0, max_size=max_deg + 1)
    s = coeffs.map(lambda c: Poly(c, p))
    return s.filter(lambda a: not a.is_zero()) if nonzero else s


def random_poly(rng, p, deg, monic=False):
    c = [int(v) for v in rng.integers(0, p, deg + 1)]
    c[-1] = 1 if monic else int(rng.integers(1, p))
    return Poly(c, p)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)
