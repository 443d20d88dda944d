"""Dense linear algebra helpers shared by all modules.

Conventions, fixed once here and relied on everywhere:

* Vectorization is row-major: ``vec(X)[i*d + j] = X[i, j]``, so
  ``vec(A @ X @ B) = kron(A, B.T) @ vec(X)``.  Left multiplication acts as
  ``kron(A, I)``, right multiplication as ``kron(I, B.T)``.
* Tensor legs are ordered with leg 1 slowest (plain Kronecker order).
* Anti-linear operators are carried as a plain matrix ``C`` with the
  conjugation implicit: the operator sends ``xi`` to ``C @ conj(xi)``.
  Composition rules (all derivable by applying to a vector):

      (C1, conj) o (C2, conj) = C1 @ conj(C2)            -- linear
      (C, conj) o L           = C @ conj(L)              -- anti-linear
      L o (C, conj)           = L @ C                    -- anti-linear
      adjoint of (C, conj)    = (C.T, conj)

  Hence (C, conj) is anti-unitary iff C is unitary, and an involution iff
  C @ conj(C) = I.
* Inner products are conjugate-linear in the first argument (np.vdot).
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm as _expm

from .errors import NotHermitian, NotPositiveDefinite

COMPLEX = np.complex128


def asarray(a):
    return np.asarray(a, dtype=COMPLEX)


def dag(a):
    return np.conj(np.asarray(a)).T


def vec(x):
    return np.asarray(x).reshape(-1)


def unvec(v, rows, cols=None):
    v = np.asarray(v)
    if cols is None:
        cols = v.size // rows
    return v.reshape(rows, cols)


def kron_all(mats):
    out = np.array([[1.0 + 0.0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def op_norm(a):
    a = np.atleast_2d(np.asarray(a))
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def herm_part(a):
    a = asarray(a)
    return 0.5 * (a + dag(a))


def herm_eig(a):
    """Eigendecomposition after symmetrizing float noise away."""
    return np.linalg.eigh(herm_part(a))


def require_hermitian(a, tol=1e-12, what="matrix"):
    a = asarray(a)
    scale = max(1.0, op_norm(a))
    if op_norm(a - dag(a)) > tol * scale:
        raise NotHermitian(f"{what} is not Hermitian within {tol:g}")
    return herm_part(a)


def herm_fn(a, f):
    """Apply a scalar function to a Hermitian matrix by eigendecomposition."""
    w, q = herm_eig(a)
    return (q * f(w)) @ dag(q)


def pd_power(h, z, what="weight matrix"):
    """h**z for positive definite h and arbitrary complex exponent z."""
    w, q = herm_eig(h)
    if w.min() <= 1e-12 * max(w.max(), 0.0):
        raise NotPositiveDefinite(f"{what} is not positive definite")
    return (q * np.exp(z * np.log(w))) @ dag(q)


def expm(a):
    return _expm(asarray(a))


def min_eig_herm(a):
    return float(herm_eig(a)[0].min())


def psd_margin_ok(a, tol=1e-10):
    """Scale-aware positivity guard: min eig >= -tol * max(1, max eig)."""
    w = herm_eig(a)[0]
    return w.min() >= -tol * max(1.0, float(w.max()))


# -- permutations on tensor legs ----------------------------------------------

def transpose_perm(d):
    """Matrix P with P @ vec(X) = vec(X.T) for d x d matrices X."""
    p = np.zeros((d * d, d * d), dtype=COMPLEX)
    for i in range(d):
        for j in range(d):
            p[i * d + j, j * d + i] = 1.0
    return p


def axis_perm(dims, order):
    """Permutation matrix reordering tensor legs of sizes ``dims`` by ``order``.

    The result maps e_{i_1} x ... x e_{i_n} to the same elementary tensor with
    legs rearranged so leg ``order[j]`` of the input lands in slot j.
    """
    n = int(np.prod(dims))
    src = np.arange(n).reshape(dims)
    dst = np.transpose(src, order).reshape(-1)
    p = np.zeros((n, n), dtype=COMPLEX)
    p[np.arange(n), dst] = 1.0
    return p


def reverse_perm(k, n):
    """Permutation reversing the order of n legs of dimension k each."""
    if n <= 1:
        return np.eye(k ** max(n, 0), dtype=COMPLEX)
    return axis_perm([k] * n, list(range(n - 1, -1, -1)))


def leg_embed(t2, k, pos, n):
    """Embed an operator on legs (pos, pos+1) of n legs of dimension k.

    ``t2`` acts on C^{k^2}; ``pos`` is 1-based; leg 1 is slowest.
    """
    if not 1 <= pos <= n - 1:
        raise ValueError(f"leg position {pos} out of range for {n} legs")
    left = np.eye(k ** (pos - 1), dtype=COMPLEX)
    right = np.eye(k ** (n - pos - 1), dtype=COMPLEX)
    return np.kron(np.kron(left, asarray(t2)), right)


# -- anti-linear helpers -------------------------------------------------------

def anti_apply(c, xi):
    return asarray(c) @ np.conj(asarray(xi))


def anti_sandwich(c, x):
    """Matrix of K∘X∘K for K = (c, conj) and linear X."""
    c = asarray(c)
    return c @ np.conj(asarray(x)) @ np.conj(c)


def anti_after_linear(l, c):
    """(c, conj) composed after linear l, as an anti-linear matrix."""
    return asarray(c) @ np.conj(asarray(l))


def linear_after_anti(l, c):
    return asarray(l) @ asarray(c)


# -- nullspaces and randomness --------------------------------------------------

def nullspace(a, rtol=1e-8):
    """Orthonormal basis (columns) of the numerical kernel of a."""
    a = np.atleast_2d(asarray(a))
    if a.shape[0] == 0:
        return np.eye(a.shape[1], dtype=COMPLEX)
    u, s, vh = np.linalg.svd(a)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * max(smax, 1.0)))
    return dag(vh)[:, rank:]


def rng_from_seed(seed):
    """Counter-based generator; the only sanctioned randomness source."""
    return np.random.Generator(np.random.Philox(key=int(seed)))


def rand_complex(rng, *shape):
    if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
        shape = tuple(shape[0])
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def rand_unitary(rng, n):
    q, r = np.linalg.qr(rand_complex(rng, n, n))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def rand_hermitian(rng, n):
    a = rand_complex(rng, n, n)
    return herm_part(a)
