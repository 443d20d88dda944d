import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from twistedfock import oracles


def test_q_factorial_known_values():
    assert oracles.q_factorial(4, 0.5) == 4.921875
    assert oracles.q_factorial(3, 0.5) == 2.625
    assert oracles.q_factorial(0, 0.7) == 1.0
    assert oracles.q_factorial(1, 0.7) == 1.0


@given(st.integers(min_value=0, max_value=6),
       st.floats(min_value=-0.95, max_value=0.95))
def test_q_factorial_inversion_sum_matches_product(n, q):
    # sum over permutations of q^inv(sigma) versus prod_j (1-q^j)/(1-q)
    assert math.isclose(oracles.q_factorial(n, q),
                        oracles.q_factorial_product(n, q),
                        rel_tol=1e-12, abs_tol=1e-12)


def test_q_factorial_limits():
    for n in range(6):
        assert oracles.q_factorial(n, 0.0) == 1.0
        assert oracles.q_factorial(n, 1.0) == math.factorial(n)


def test_catalan():
    assert [oracles.catalan(m) for m in range(6)] == [1, 1, 2, 5, 14, 42]


def test_pair_partition_count():
    # (2m-1)!! pairings of 2m points
    for m, count in [(1, 1), (2, 3), (3, 15), (4, 105)]:
        assert len(oracles.pair_partitions(2 * m)) == count
    assert oracles.pair_partitions(3) == []


def test_crossings_known():
    assert oracles.crossings([(0, 1), (2, 3)]) == 0
    assert oracles.crossings([(0, 3), (1, 2)]) == 0
    assert oracles.crossings([(0, 2), (1, 3)]) == 1


def test_crossing_generating_function_order6():
    # over the 15 pairings of 6 points: 5 + 6q + 3q^2 + q^3
    e = np.array([1.0 + 0.0j])
    for q in (0.0, 0.3, 0.5, -0.5):
        val = oracles.moment_oracle(q, [e] * 6)
        assert np.isclose(val, 5 + 6 * q + 3 * q ** 2 + q ** 3, atol=1e-13)


def test_moment_oracle_free_case_is_catalan():
    e = np.array([1.0 + 0.0j])
    for m in range(1, 5):
        assert np.isclose(oracles.moment_oracle(0.0, [e] * (2 * m)),
                          oracles.catalan(m))


def test_moment_oracle_vector_kernel():
    e1 = np.array([1.0, 0.0], dtype=complex)
    e2 = np.array([0.0, 1.0], dtype=complex)
    # only the nested pairing (1,4)(2,3) pairs equal vectors; it has no
    # crossing, so the value is q-independent
    for q in (0.0, 0.5, -0.7):
        assert np.isclose(oracles.moment_oracle(q, [e1, e2, e2, e1]), 1.0)
    # odd words vanish
    assert oracles.moment_oracle(0.5, [e1, e2, e1]) == 0


def test_moment_oracle_fourth_moment():
    e = np.array([1.0 + 0.0j])
    for q in (0.5, -0.5, 0.25):
        assert np.isclose(oracles.moment_oracle(q, [e] * 4), 2 + q, atol=1e-14)
