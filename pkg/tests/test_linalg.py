import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from twistedfock import _linalg as la

finite = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)


def _rand(seed, *shape):
    return la.rand_complex(la.rng_from_seed(seed), *shape)


def test_vec_unvec_roundtrip():
    x = _rand(1, 3, 3)
    assert np.array_equal(la.unvec(la.vec(x), 3), x)


@given(arrays(np.float64, (3, 3), elements=finite),
       arrays(np.float64, (3, 3), elements=finite),
       arrays(np.float64, (3, 3), elements=finite))
def test_vec_sandwich_identity(a, x, b):
    # row-major convention: vec(A X B) = (A kron B^T) vec(X)
    lhs = la.vec(a @ x @ b)
    rhs = np.kron(a, b.T) @ la.vec(x)
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_dag_and_herm_part():
    x = _rand(2, 4, 4)
    assert np.allclose(la.dag(la.dag(x)), x)
    h = la.herm_part(x)
    assert np.allclose(h, la.dag(h))
    assert np.allclose(la.herm_part(h), h)


def test_transpose_perm():
    p = la.transpose_perm(3)
    x = _rand(3, 3, 3)
    assert np.allclose(p @ la.vec(x), la.vec(x.T))
    assert np.allclose(p @ p, np.eye(9))


def test_axis_perm_on_kron_vectors():
    u = _rand(4, 2)
    v = _rand(5, 3)
    p = la.axis_perm([2, 3], (1, 0))
    assert np.allclose(p @ np.kron(u, v), np.kron(v, u))


def test_axis_perm_three_factors():
    u, v, w = _rand(6, 2), _rand(7, 2), _rand(8, 3)
    p = la.axis_perm([2, 2, 3], (2, 0, 1))
    assert np.allclose(p @ np.kron(np.kron(u, v), w),
                       np.kron(np.kron(w, u), v))


def test_reverse_perm():
    vs = [_rand(s, 2) for s in (9, 10, 11)]
    p = la.reverse_perm(2, 3)
    assert np.allclose(p @ la.kron_all(vs).ravel(),
                       la.kron_all(vs[::-1]).ravel())


def test_leg_embed_positions():
    t = _rand(12, 4, 4)
    e2 = np.eye(2)
    assert np.allclose(la.leg_embed(t, 2, 1, 3), np.kron(t, e2))
    assert np.allclose(la.leg_embed(t, 2, 2, 3), np.kron(e2, t))


def test_nullspace_rank():
    a = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]])
    ns = la.nullspace(a)
    assert ns.shape == (3, 1)
    assert np.linalg.norm(a @ ns) < 1e-12


def test_anti_composition():
    c1 = _rand(13, 3, 3)
    c2 = _rand(14, 3, 3)
    x = _rand(15, 3, 3)
    xi = _rand(16, 3)
    # (K1 K2) xi = C1 conj(C2 conj(xi)) = C1 conj(C2) xi
    lhs = la.anti_apply(c1, la.anti_apply(c2, xi))
    assert np.allclose(lhs, c1 @ np.conj(c2) @ xi)
    # anti-linear sandwich K X K^{-1} with K an involution
    c = la.transpose_perm(3).astype(complex) @ np.eye(9, dtype=complex)
    y = _rand(17, 9, 9)
    sand = la.anti_sandwich(c, y)
    assert np.allclose(sand @ la.anti_apply(c, _rand(18, 9)),
                       la.anti_apply(c, y @ _rand(18, 9)))


def test_anti_composition_helpers():
    c = _rand(19, 3, 3)
    lmat = _rand(20, 3, 3)
    xi = _rand(21, 3)
    assert np.allclose(la.anti_after_linear(lmat, c) @ np.conj(xi),
                       la.anti_apply(c, lmat @ xi))
    assert np.allclose(la.linear_after_anti(lmat, c) @ np.conj(xi),
                       lmat @ la.anti_apply(c, xi))


def test_herm_eig_and_pd_power():
    h = np.diag([4.0, 1.0]).astype(complex)
    w, v = la.herm_eig(h)
    assert np.allclose(sorted(w), [1.0, 4.0])
    assert np.allclose(la.pd_power(h, 0.5), np.diag([2.0, 1.0]))
    assert np.allclose(la.pd_power(h, -1.0) @ h, np.eye(2))


def test_require_hermitian_raises():
    from twistedfock.errors import NotHermitian
    with pytest.raises(NotHermitian):
        la.require_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]), what="probe")


def test_rand_unitary_and_determinism():
    u = la.rand_unitary(la.rng_from_seed(5), 4)
    assert np.allclose(la.dag(u) @ u, np.eye(4), atol=1e-12)
    again = la.rand_unitary(la.rng_from_seed(5), 4)
    assert np.array_equal(u, again)


def test_expm_matches_eigen_route():
    h = la.rand_hermitian(la.rng_from_seed(6), 3)
    w, v = la.herm_eig(h)
    direct = (v * np.exp(1j * w)) @ la.dag(v)
    assert np.allclose(la.expm(1j * h), direct, atol=1e-12)
