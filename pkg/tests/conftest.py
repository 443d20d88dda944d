import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import twistedfock as tf

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@pytest.fixture(scope="session")
def scalar_base():
    return tf.make_base([[1.0]])


@pytest.fixture(scope="session")
def diag_base():
    return tf.make_base(np.diag([2.0, 1.0]))


@pytest.fixture(scope="session")
def scalar_tc(scalar_base):
    return tf.make_multiplicity_corr(scalar_base, 1)


@pytest.fixture(scope="session")
def aw_tc(scalar_base):
    # scalar base, two-dimensional multiplicity with flow diag(1, -1)
    # and conjugation swapping the two frequencies
    a = np.diag([1.0, -1.0]).astype(complex)
    return tf.make_multiplicity_corr(scalar_base, 2, SWAP, a)


@pytest.fixture(scope="session")
def matrix_tc(diag_base):
    a = np.diag([1.0, -1.0]).astype(complex)
    return tf.make_multiplicity_corr(diag_base, 2, SWAP, a)
