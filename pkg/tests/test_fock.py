import numpy as np
import pytest

import twistedfock as tf
from twistedfock import _linalg as la
from twistedfock import oracles
from twistedfock.errors import (
    BudgetExceeded,
    HypothesisViolation,
    IncompatibleTwist,
    RealityViolation,
    VectorDimensionMismatch,
    WordTooLongForCutoff,
)

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def _fock(tc, q, N, budget=4096):
    k = tc.meta["k"]
    t = tf.make_twist("q", k=k, q=q)
    return tf.build_fock(tc, t.T, N, budget=budget)


def _real_left(tc, seed):
    rng = la.rng_from_seed(seed)
    v = tf.real_project_left(tc, la.rand_complex(rng, tc.m))
    return v / np.linalg.norm(v)


def _real_right(tc, seed):
    rng = la.rng_from_seed(seed)
    v = tf.real_project_right(tc, la.rand_complex(rng, tc.m))
    return v / np.linalg.norm(v)


# -- construction ------------------------------------------------------------------

def test_fock_dims(matrix_tc):
    F = _fock(matrix_tc, 0.5, 3)
    assert F.g0 == 4 and F.k == 2
    assert F.dims == (4, 8, 16, 32)
    assert F.D == 60
    assert F.offsets == (0, 4, 12, 28)


def test_fock_scalar_dims(scalar_tc):
    F = _fock(scalar_tc, 0.3, 4)
    assert F.dims == (1, 1, 1, 1, 1)


def test_fock_fermionic_truncates(scalar_base):
    tc = tf.make_multiplicity_corr(scalar_base, 2, SWAP,
                                   np.diag([1.0, -1.0]).astype(complex))
    F = _fock(tc, -1.0, 3)
    # antisymmetric levels over C^2: 1, 2, 1, 0
    assert F.dims == (1, 2, 1, 0)
    xi = _real_left(tc, 0)
    s = tf.make_field_left(F, xi)
    assert s.matrix.shape == (4, 4)


def test_fock_budget_guard(diag_base):
    tc = tf.make_multiplicity_corr(diag_base, 4)
    with pytest.raises(BudgetExceeded):
        _fock(tc, 0.0, 8)


def test_fock_rejects_wrong_twist_size(matrix_tc):
    t = tf.make_twist("q", k=3, q=0.5)
    with pytest.raises(IncompatibleTwist):
        tf.build_fock(matrix_tc, t.T, 3)


def test_flow_unitary_conjugation_antiunitary(matrix_tc):
    F = _fock(matrix_tc, 0.5, 3)
    U = tf.fock_flow(F, 0.83)
    assert np.allclose(la.dag(U) @ U, np.eye(F.D), atol=1e-10)
    C = tf.fock_conjugation(F)
    assert np.allclose(C @ np.conj(C), np.eye(F.D), atol=1e-10)
    assert np.allclose(la.dag(C) @ C, np.eye(F.D), atol=1e-10)


# -- weight, vacuum, conditional expectation ----------------------------------------

def test_vacuum_weight_consistency(matrix_tc):
    # <pi_l(x) Omega, pi_l(y) Omega> = phi(x* y) for the unnormalized weight
    F = _fock(matrix_tc, 0.5, 3)
    om = tf.vacuum_vector(F)
    rng = la.rng_from_seed(1)
    x = la.rand_complex(rng, 2, 2)
    y = la.rand_complex(rng, 2, 2)
    lhs = np.vdot(tf.pi_left(F, x) @ om, tf.pi_left(F, y) @ om)
    rhs = tf.weight_value(matrix_tc.kernel.base, la.dag(x) @ y)
    assert np.isclose(lhs, rhs, atol=1e-12)


def test_conditional_expectation_properties(matrix_tc):
    F = _fock(matrix_tc, 0.5, 3)
    rng = la.rng_from_seed(2)
    x = la.rand_complex(rng, 2, 2)
    # E(pi_l(x)) = x and E(1) = 1
    assert np.allclose(tf.conditional_expectation(F, tf.pi_left(F, x)), x,
                       atol=1e-12)
    assert np.allclose(tf.conditional_expectation(F, np.eye(F.D)), np.eye(2),
                       atol=1e-12)
    # positivity on sampled X*X
    X = la.rand_complex(rng, F.D, F.D)
    ex = tf.conditional_expectation(F, la.dag(X) @ X)
    assert la.min_eig_herm(la.herm_part(ex)) > -1e-10


def test_pi_left_is_homomorphism(matrix_tc):
    F = _fock(matrix_tc, 0.5, 3)
    rng = la.rng_from_seed(3)
    x = la.rand_complex(rng, 2, 2)
    y = la.rand_complex(rng, 2, 2)
    assert np.allclose(tf.pi_left(F, x) @ tf.pi_left(F, y),
                       tf.pi_left(F, x @ y), atol=1e-10)
    assert np.allclose(tf.pi_right(F, x) @ tf.pi_left(F, y),
                       tf.pi_left(F, y) @ tf.pi_right(F, x), atol=1e-10)


# -- moments ------------------------------------------------------------------------

def test_vacuum_moments_match_oracle(scalar_tc):
    e = np.array([1.0 + 0.0j])
    for q in (0.0, 0.5, -0.5, 0.9):
        F = _fock(scalar_tc, q, 8)
        for m in (1, 2, 3, 4):
            got = tf.vacuum_moment(F, [e] * (2 * m))
            want = tf.moment_oracle(q, [e] * (2 * m))
            assert np.isclose(got, want, atol=1e-10), (q, m)


def test_vacuum_moments_free_catalan(scalar_tc):
    e = np.array([1.0 + 0.0j])
    F = _fock(scalar_tc, 0.0, 10)
    for m in range(1, 6):
        assert np.isclose(tf.vacuum_moment(F, [e] * (2 * m)),
                          oracles.catalan(m), atol=1e-10)


def test_vacuum_moment_multidim_oracle(scalar_base):
    tc = tf.make_multiplicity_corr(scalar_base, 2)
    F = _fock(tc, 0.4, 4)
    e1 = np.array([1.0, 0.0], dtype=complex)
    e2 = np.array([0.0, 1.0], dtype=complex)
    for word in ([e1, e2, e2, e1], [e1, e1, e2, e2], [e1, e2, e1, e2]):
        got = tf.vacuum_moment(F, word)
        want = tf.moment_oracle(0.4, word)
        assert np.isclose(got, want, atol=1e-10)


def test_word_too_long(scalar_tc):
    F = _fock(scalar_tc, 0.5, 3)
    e = np.array([1.0 + 0.0j])
    with pytest.raises(WordTooLongForCutoff):
        tf.vacuum_moment(F, [e] * 4)


def test_moments_exact_under_cutoff(matrix_tc):
    # enlarging the cutoff must not change moments of short words
    xi = _real_left(matrix_tc, 4)
    eta = _real_left(matrix_tc, 5)
    F3 = _fock(matrix_tc, 0.5, 3)
    F4 = _fock(matrix_tc, 0.5, 4)
    for word in ([xi, eta], [xi, xi], [xi, eta, xi]):
        assert np.isclose(tf.vacuum_moment(F3, word),
                          tf.vacuum_moment(F4, word), atol=1e-12)


# -- field operators ----------------------------------------------------------------

def test_field_vector_dimension_guard(matrix_tc):
    F = _fock(matrix_tc, 0.5, 3)
    with pytest.raises(VectorDimensionMismatch):
        tf.make_field_left(F, np.ones(3, dtype=complex))


def test_field_is_selfadjoint(matrix_tc):
    F = _fock(matrix_tc, 0.5, 3)
    s = tf.make_field_left(F, _real_left(matrix_tc, 6))
    # annihilation blocks are conjugate transposes of creation by assembly
    assert np.array_equal(s.matrix, la.dag(s.matrix))


def test_field_creates_from_vacuum(matrix_tc):
    F = _fock(matrix_tc, 0.5, 3)
    xi = _real_left(matrix_tc, 7)
    s = tf.make_field_left(F, xi)
    out = s.matrix @ tf.vacuum_vector(F)
    lo, hi = F.offsets[1], F.offsets[1] + F.dims[1]
    assert np.allclose(out[lo:hi], xi, atol=1e-12)
    assert np.linalg.norm(out[hi:]) < 1e-12


def test_field_norm_margins(matrix_tc):
    F = _fock(matrix_tc, 0.5, 3)
    s = tf.make_field_left(F, _real_left(matrix_tc, 8))
    assert all(m > -1e-10 for m in s.norm_margins)


def test_field_reality_enforced(matrix_tc):
    F = _fock(matrix_tc, 0.5, 3)
    rng = la.rng_from_seed(9)
    raw = la.rand_complex(rng, matrix_tc.m)  # generic: not J-real
    with pytest.raises(RealityViolation):
        tf.conj_intertwining_residual(F, raw)
    with pytest.raises(RealityViolation):
        tf.locality_residual(F, raw, _real_right(matrix_tc, 10))


# -- modular structure ---------------------------------------------------------------

def test_modular_level1(aw_tc):
    for q in (0.0, 0.5):
        F = _fock(aw_tc, q, 5)
        assert tf.modular_level1_residual(F) < 1e-9


def test_kms_words(aw_tc):
    for q in (0.0, 0.5):
        F = _fock(aw_tc, q, 5)
        for seeds in [(11,), (12, 13), (14, 15, 16)]:
            word = [_real_left(aw_tc, s) for s in seeds]
            assert tf.kms_residual(F, word) < 1e-9, (q, seeds)


def test_conjugation_intertwining(aw_tc):
    for q in (0.0, 0.5):
        F = _fock(aw_tc, q, 5)
        xi = _real_left(aw_tc, 17)
        assert tf.conj_intertwining_residual(F, xi) < 1e-9


def test_locality(aw_tc):
    for q in (0.0, 0.5):
        F = _fock(aw_tc, q, 5)
        for sl, sr in [(18, 19), (20, 21)]:
            xi = _real_left(aw_tc, sl)
            eta = _real_right(aw_tc, sr)
            assert tf.locality_residual(F, xi, eta) < 1e-10


def test_locality_matrix_base(matrix_tc):
    F = _fock(matrix_tc, 0.5, 3)
    xi = _real_left(matrix_tc, 22)
    eta = _real_right(matrix_tc, 23)
    assert tf.locality_residual(F, xi, eta) < 1e-10


def test_kms_word_too_long(scalar_tc):
    F = _fock(scalar_tc, 0.5, 3)
    e = np.array([1.0 + 0.0j])
    with pytest.raises(WordTooLongForCutoff):
        tf.kms_residual(F, [e, e, e])


# -- factorization checks -------------------------------------------------------------

def test_type_one_factorization(diag_base):
    a2 = np.diag([1.0, -1.0]).astype(complex)
    cases = [
        (1, np.eye(1, dtype=complex), np.zeros((1, 1)), 0.0),
        (1, np.eye(1, dtype=complex), np.zeros((1, 1)), 0.5),
        (2, SWAP, a2, 0.0),
        (2, SWAP, a2, 0.5),
    ]
    for k, c, a, q in cases:
        t = tf.make_twist("q", k=k, q=q)
        rep = tf.type_I_factorization_check(diag_base, k, c, a, t.T, 3)
        assert rep["max_residual"] < 1e-9, (k, q, rep)


def test_crossed_product_sign_rep():
    table = np.array([[0, 1], [1, 0]])
    sign = [np.eye(1, dtype=complex), -np.eye(1, dtype=complex)]
    for q in (0.0, 0.3):
        t = tf.make_twist("q", k=1, q=q)
        rep = tf.crossed_product_check(table, sign, t.T, 3)
        assert rep["max_residual"] < 1e-9, q


def test_crossed_product_trivial_rep_degenerates():
    table = np.array([[0, 1], [1, 0]])
    triv = [np.eye(1, dtype=complex), np.eye(1, dtype=complex)]
    t = tf.make_twist("q", k=1, q=0.3)
    rep = tf.crossed_product_check(table, triv, t.T, 3)
    assert rep["max_residual"] < 1e-12


def test_crossed_product_z3_rotation():
    table = np.array([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    reps = []
    for g in range(3):
        th = 2.0 * np.pi * g / 3.0
        reps.append(np.array([[np.cos(th), -np.sin(th)],
                              [np.sin(th), np.cos(th)]], dtype=complex))
    t = tf.make_twist("q", k=2, q=0.0)
    rep = tf.crossed_product_check(table, reps, t.T, 3)
    assert rep["max_residual"] < 1e-10


def test_crossed_product_equivariance_guard():
    table = np.array([[0, 1], [1, 0]])
    # rep acts by swap; a twist built from an asymmetric q-matrix does not
    # commute with swap x swap
    reps = [np.eye(2, dtype=complex), SWAP.copy()]
    qm = np.array([[0.5, 0.0], [0.0, -0.5]])
    t = tf.make_twist("mixed_q", k=2, q_matrix=qm)
    from twistedfock.errors import EquivarianceViolation
    with pytest.raises(EquivarianceViolation):
        tf.crossed_product_check(table, reps, t.T, 2)


# -- spectral gap experiment -----------------------------------------------------------

def _gap_setup(m=6, N=3, q=0.0):
    base = tf.make_base([[1.0]])
    tc = tf.make_multiplicity_corr(base, m)
    t = tf.make_twist("q", k=m, q=q)
    F = tf.build_fock(tc, t.T, N, budget=8192)
    xis = [np.eye(m, dtype=complex)[:, i] for i in range(m)]
    return F, xis


def _centered_word(F, seeds, length=2):
    rng = la.rng_from_seed(seeds)
    m = F.tc.m
    w = np.eye(F.D, dtype=complex)
    for _ in range(length):
        coeff = rng.normal(size=m).astype(complex)
        w = w @ tf.make_field_left(F, coeff).matrix
    return w - tf.pi_left(F, tf.conditional_expectation(F, w))


def test_gap_experiment_certified():
    F, xis = _gap_setup(m=6)
    xs = [_centered_word(F, s) for s in (1, 2, 3)]
    rep = tf.spectral_gap_experiment(F, xs, xis)
    assert rep["certified"]
    assert np.isclose(rep["kappa"], np.sqrt(6) - 1 / np.sqrt(6) - 2)
    assert rep["n_flagged"] == 0
    assert rep["min_margin"] > -1e-6


def test_gap_experiment_uncertified_small_family():
    F, xis = _gap_setup(m=4)
    xs = [_centered_word(F, 4)]
    rep = tf.spectral_gap_experiment(F, xs, xis)
    assert not rep["certified"]
    assert rep["kappa"] < 0
    # inequality not asserted: no sample may be flagged
    assert rep["n_flagged"] == 0


def test_gap_experiment_central_sample_is_degenerate():
    F, xis = _gap_setup(m=6)
    x = tf.pi_left(F, np.array([[0.7 + 0.0j]])) - tf.pi_left(
        F, tf.conditional_expectation(F, tf.pi_left(F, np.array([[0.7 + 0.0j]]))))
    rep = tf.spectral_gap_experiment(F, [x], xis)
    s = rep["samples"][0]
    assert s["lhs"] < 1e-12
    assert s["phi_centered_sq"] < 1e-12


def test_gap_experiment_rejects_bad_family():
    F, xis = _gap_setup(m=6)
    xis_bad = list(xis)
    xis_bad[1] = xis_bad[0]  # not orthonormal
    with pytest.raises(HypothesisViolation):
        tf.spectral_gap_experiment(F, [_centered_word(F, 5)], xis_bad)
