import numpy as np
import pytest

from meantransform.generators import ginibre, haar_unitary


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_matrix(seed, n):
    return ginibre(np.random.default_rng(seed), n)


def random_unitary(seed, n):
    return haar_unitary(np.random.default_rng(seed), n)


def opnorm(A):
    return np.linalg.norm(A, 2)
