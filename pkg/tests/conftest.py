import numpy as np
import pytest

from pointaffine import catalog


@pytest.fixture
def rng():
    return np.random.default_rng(catalog.rng_seed())
