"""Alicki-form Lindblad generators and their Bohr spectra.

A generator is specified by a positive definite h on C^n and jump operators
v_j with h v_j h^{-1} = e^{-omega_j} v_j, the jump set closed under adjoints.
Then

    L(x) = sum_j e^{-omega_j/2} (v_j* [v_j, x] - [v_j*, x] v_j)

generates a GNS-symmetric quantum Markov semigroup P_t = e^{-tL} for the
weight Tr(h .), and its Bohr spectrum is recovered two ways: directly from
the omega_j and through the disintegration of the associated Tomita
correspondence HS(C^n) x C^d.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _linalg as la
from . import base_modular as bm
from . import correspondence as corr
from .errors import (
    EigenrelationViolated,
    NotAdjointClosed,
    RoundTripMismatch,
    ZeroJump,
)

__all__ = [
    "AlickiGenerator",
    "BohrSpectrumReport",
    "make_alicki",
    "generator_apply",
    "lindblad_super",
    "semigroup",
    "gns_symmetry_residual",
    "cp_residual",
    "qms_correspondence",
    "bohr_spectrum",
]

PAIR_TOL = 1e-10


@dataclass(frozen=True)
class AlickiGenerator:
    base: bm.BaseAlgebra
    jumps: tuple          # ((v_j, omega_j), ...)
    pairing: tuple        # involution with v_{pairing[j]} = v_j*

    @property
    def n(self):
        return self.base.d

    @property
    def n_jumps(self):
        return len(self.jumps)


def make_alicki(h, jumps):
    """Validate the eigenvalue relations and compute the adjoint pairing."""
    base = bm.make_base(h)
    vs = []
    for v, om in jumps:
        v = la.asarray(v)
        om = float(om)
        nv = la.op_norm(v)
        if nv == 0.0:
            raise ZeroJump("jump operator is zero")
        resid = la.op_norm(base.h @ v @ np.linalg.inv(base.h) - np.exp(-om) * v)
        if resid > PAIR_TOL * max(1.0, nv):
            raise EigenrelationViolated(
                f"h v h^-1 = e^(-omega) v fails for omega={om:.6g} "
                f"(residual {resid:.3e})"
            )
        vs.append((v, om))
    m = len(vs)
    pairing = [-1] * m
    for j in range(m):
        if pairing[j] >= 0:
            continue
        vd = la.dag(vs[j][0])
        best, best_dist = None, np.inf
        for l in range(m):
            if pairing[l] >= 0:
                continue
            dist = la.op_norm(vs[l][0] - vd)
            if dist < best_dist:
                best, best_dist = l, dist
        if best is None or best_dist > PAIR_TOL * max(1.0, la.op_norm(vd)):
            raise NotAdjointClosed(
                f"no jump matches the adjoint of jump {j} "
                f"(closest distance {best_dist:.3e})"
            )
        if abs(vs[best][1] + vs[j][1]) > PAIR_TOL:
            raise NotAdjointClosed(
                f"adjoint pair ({j}, {best}) has omegas "
                f"{vs[j][1]:.6g}, {vs[best][1]:.6g}; need omega_j* = -omega_j"
            )
        pairing[j] = best
        pairing[best] = j
    return AlickiGenerator(base=base, jumps=tuple(vs), pairing=tuple(pairing))


def generator_apply(gen, x):
    x = la.asarray(x)
    out = np.zeros_like(x, dtype=la.COMPLEX)
    for v, om in gen.jumps:
        vd = la.dag(v)
        out += np.exp(-om / 2.0) * (vd @ (v @ x - x @ v) - (vd @ x - x @ vd) @ v)
    return out


def lindblad_super(gen):
    """L as a matrix on row-major vec coordinates."""
    n = gen.n
    eye = np.eye(n, dtype=la.COMPLEX)
    K = np.zeros((n * n, n * n), dtype=la.COMPLEX)
    for v, om in gen.jumps:
        vd = la.dag(v)
        w = np.exp(-om / 2.0)
        K += w * (np.kron(vd @ v, eye) - 2.0 * np.kron(vd, v.T)
                  + np.kron(eye, (vd @ v).T))
    return K


def semigroup(gen, t):
    """Superoperator of P_t = e^{-tL}."""
    if t < 0:
        raise ValueError("semigroup time must be nonnegative")
    return la.expm(-t * lindblad_super(gen))


def gns_symmetry_residual(gen, ts=(0.3, 1.0)):
    """max |phi(P_t(x)* y) - phi(x* P_t(y))| over basis pairs and sampled t."""
    M = np.kron(np.eye(gen.n, dtype=la.COMPLEX), gen.base.h.T)
    out = 0.0
    for t in ts:
        S = semigroup(gen, t)
        out = max(out, float(np.abs(la.dag(S) @ M - M @ S).max()))
    return out


def cp_residual(gen, ts=(0.1, 1.0)):
    """Min Choi eigenvalue of P_t over sampled t (>= -1e-9 expected)."""
    n = gen.n
    worst = np.inf
    for t in ts:
        S = semigroup(gen, t)
        choi = np.zeros((n * n, n * n), dtype=la.COMPLEX)
        for i in range(n):
            for j in range(n):
                e = np.zeros((n, n), dtype=la.COMPLEX)
                e[i, j] = 1.0
                choi[i * n:(i + 1) * n, j * n:(j + 1) * n] = la.unvec(S @ la.vec(e), n)
        worst = min(worst, la.min_eig_herm(la.herm_part(choi)))
    return float(worst)


def qms_correspondence(gen):
    """The Tomita correspondence HS(C^n) x C^d of the generator.

    U_t multiplies the j-th copy by e^{i omega_j t} and J conjugates into the
    adjoint-paired copy, so the flow-conjugation sign condition holds because
    omega_{j*} = -omega_j.
    """
    m = gen.n_jumps
    C = np.zeros((m, m), dtype=la.COMPLEX)
    for j, js in enumerate(gen.pairing):
        C[j, js] = 1.0
    a = np.diag([om for _, om in gen.jumps]).astype(la.COMPLEX)
    return corr.make_multiplicity_corr(gen.base, m, C, a)


@dataclass(frozen=True)
class BohrSpectrumReport:
    frequencies: tuple    # ((omega, multiplicity), ...) sorted by omega
    source: str


def _collapse(values, mults, tol=1e-8):
    pairs = sorted(zip(values, mults))
    out = []
    for om, mult in pairs:
        if out and abs(om - out[-1][0]) <= tol:
            prev_om, prev_m = out[-1]
            total = prev_m + mult
            out[-1] = ((prev_om * prev_m + om * mult) / total, total)
        else:
            out.append((om, mult))
    return tuple(out)


def bohr_spectrum(gen, tol=1e-8):
    """Bohr spectrum from the jump data and from disintegration; both must
    agree as multisets within tol."""
    n2 = gen.n * gen.n
    from_jumps = BohrSpectrumReport(
        frequencies=_collapse([om for _, om in gen.jumps],
                              [n2] * gen.n_jumps, tol),
        source="from_jumps",
    )
    tc = qms_correspondence(gen)
    bd = corr.disintegrate(tc)
    from_dis = BohrSpectrumReport(
        frequencies=_collapse([s.omega for s in bd.sectors],
                              [s.dim for s in bd.sectors], tol),
        source="from_disintegration",
    )
    fj, fd = from_jumps.frequencies, from_dis.frequencies
    if len(fj) != len(fd):
        raise RoundTripMismatch(
            f"jump route found {len(fj)} frequencies, disintegration {len(fd)}"
        )
    resid = 0.0
    for (om1, m1), (om2, m2) in zip(fj, fd):
        if abs(om1 - om2) > tol or m1 != m2:
            raise RoundTripMismatch(
                f"frequency mismatch: ({om1:.6g}, {m1}) vs ({om2:.6g}, {m2})"
            )
        resid = max(resid, abs(om1 - om2))
    return {
        "from_jumps": from_jumps,
        "from_disintegration": from_dis,
        "collapsed": tuple(om for om, _ in fj),
        "match_residual": resid,
        "decomposition_residuals": bd.residuals,
    }
