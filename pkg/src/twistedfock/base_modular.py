"""Matrix algebra bases with a faithful weight and their modular data.

The base is M_d with weight phi(x) = Tr(h x) for a positive definite h.
The GNS space L2(M_d) is the space of d x d matrices with the
Hilbert-Schmidt inner product, embedded by

    Lambda(x)  = x h^{1/2}        (left embedding)
    Lambda'(y) = h^{1/2} y        (right embedding)

so that <Lambda(x), Lambda(y)> = phi(x* y).  The modular objects are

    Delta^{iz} xi = h^{iz} xi h^{-iz}     (z complex; unitary for real z)
    J xi          = xi*                   (anti-unitary involution)
    sigma_z(x)    = h^{iz} x h^{-iz}      (modular automorphism group)

which satisfy S = J Delta^{1/2}, S Lambda(x) = Lambda(x*), and the KMS
identity phi(x y) = phi(y sigma_{-i}(x)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _linalg as la
from .errors import NotHermitian, NotPositiveDefinite

__all__ = [
    "BaseAlgebra",
    "make_base",
    "modular_apply",
    "modular_conjugate",
    "sigma_apply",
    "weight_value",
    "NotHermitian",
    "NotPositiveDefinite",
]


@dataclass(frozen=True)
class BaseAlgebra:
    """M_d with weight Tr(h .) and cached modular data."""

    h: np.ndarray
    d: int
    eigvals: np.ndarray = field(repr=False)
    eigvecs: np.ndarray = field(repr=False)

    @property
    def gns_dim(self):
        return self.d * self.d

    @property
    def trace_h(self):
        return float(np.real(np.trace(self.h)))

    def h_power(self, z):
        """h**z as a matrix, z any complex number."""
        w = np.exp(z * np.log(self.eigvals))
        return (self.eigvecs * w) @ la.dag(self.eigvecs)

    @property
    def sqrt_h(self):
        return self.h_power(0.5)

    @property
    def inv_sqrt_h(self):
        return self.h_power(-0.5)

    @property
    def log_h(self):
        return (self.eigvecs * np.log(self.eigvals)) @ la.dag(self.eigvecs)


def make_base(h, tol=1e-12):
    h = la.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("h must be a square matrix")
    h = la.require_hermitian(h, tol=tol, what="h")
    w, q = np.linalg.eigh(h)
    if w.min() <= 1e-12 * w.max():
        raise NotPositiveDefinite("h must be positive definite")
    return BaseAlgebra(h=h, d=h.shape[0], eigvals=w, eigvecs=q)


def gns_left(base, x):
    """Lambda(x) = x h^{1/2} as a d x d matrix."""
    return la.asarray(x) @ base.sqrt_h


def gns_right(base, y):
    """Lambda'(y) = h^{1/2} y."""
    return base.sqrt_h @ la.asarray(y)


def modular_apply(base, z, xi):
    """Delta^{iz} xi = h^{iz} xi h^{-iz} on a GNS vector (d x d matrix)."""
    hz = base.h_power(1j * z)
    hmz = base.h_power(-1j * z)
    return hz @ la.asarray(xi) @ hmz


def modular_conjugate(base, xi):
    """J xi = xi* (conjugate transpose of the GNS matrix)."""
    return la.dag(xi)


def sigma_apply(base, z, x):
    """Modular automorphism sigma_z(x) = h^{iz} x h^{-iz}."""
    return base.h_power(1j * z) @ la.asarray(x) @ base.h_power(-1j * z)


def weight_value(base, x):
    """phi(x) = Tr(h x)."""
    return complex(np.trace(base.h @ la.asarray(x)))


# -- vectorized forms used by the correspondence machinery ---------------------

def left_mult_vec(base, x):
    """Left multiplication by x on vec coordinates of L2(M_d)."""
    return np.kron(la.asarray(x), np.eye(base.d, dtype=la.COMPLEX))


def right_mult_vec(base, y):
    """Right multiplication by y on vec coordinates."""
    return np.kron(np.eye(base.d, dtype=la.COMPLEX), la.asarray(y).T)


def conj_vec(base):
    """C-matrix of J on vec coordinates: vec(xi*) = C @ conj(vec(xi))."""
    return la.transpose_perm(base.d)


def log_delta_vec(base):
    """Hermitian generator of Delta^{it} on vec coordinates."""
    lh = base.log_h
    eye = np.eye(base.d, dtype=la.COMPLEX)
    return np.kron(lh, eye) - np.kron(eye, lh.T)


def delta_vec(base, t):
    """Delta^{it} on vec coordinates."""
    return np.kron(base.h_power(1j * t), base.h_power(-1j * t).T)
