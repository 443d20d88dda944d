"""Twists on tensor squares: positivity tower, sandwich bounds, gap constants.

A twist is a Hermitian contraction T on V (x) V.  Leg embeddings T_j act on
legs (j, j+1) of V^(x)n with leg 1 slowest (row-major).  The tower

    P_1 = 1,   P_{n+1} = (1 (x) P_n) R_{n+1},
    R_n = 1 + T_1 + T_1 T_2 + ... + T_1...T_{n-1}

defines the twisted inner products <xi, P_n eta>.  When T satisfies the
Yang-Baxter equation the reversed recursion (P_n (x) 1) R~_{n+1} with
R~_n = 1 + T_{n-1} + T_{n-1}T_{n-2} + ... agrees; the defect is recorded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _linalg as la
from . import correspondence as corr
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    LevelMismatch,
    NormExceedsOne,
    NotATwist,
    NotHermitian,
    QOutOfRange,
)

__all__ = [
    "Twist",
    "TowerLevel",
    "TwistTower",
    "GapConstants",
    "make_twist",
    "ybe_residual",
    "build_tower",
    "lift_twist",
    "compatibility_residuals",
    "sandwich_bounds_report",
    "gap_constants",
    "c_n",
    "d_n",
]

DEFAULT_BUDGET = 4096
PSD_TOL = 1e-10


@dataclass(frozen=True)
class Twist:
    space_dim: int
    T: np.ndarray
    level: str                 # "multiplicity" | "bimodule"
    norm: float
    meta: dict = field(default_factory=dict, repr=False)
    residuals: dict = field(default_factory=dict)


def _leg_dim(T):
    n = T.shape[0]
    k = math.isqrt(n)
    if k * k != n or T.shape != (n, n):
        raise DimensionMismatch("twist matrix must be square on a tensor square")
    return k


def make_twist(kind, k=None, q=None, q_matrix=None, matrix=None):
    """Build a multiplicity-level twist.

    kind "q": T(e_i x e_j) = q e_j x e_i; "mixed_q": T(e_i x e_j) =
    q_{ij} e_j x e_i with a real symmetric matrix q; "flip": the tensor swap;
    "custom": a supplied Hermitian contraction.
    """
    if kind == "q":
        if k is None or q is None:
            raise ValueError("kind 'q' needs k and q")
        q = float(q)
        if abs(q) > 1:
            raise NormExceedsOne(f"|q| = {abs(q)} > 1")
        T = q * la.axis_perm([k, k], (1, 0))
    elif kind == "flip":
        if k is None:
            raise ValueError("kind 'flip' needs k")
        T = la.axis_perm([k, k], (1, 0)).astype(la.COMPLEX)
    elif kind == "mixed_q":
        qm = la.asarray(q_matrix)
        k = qm.shape[0]
        if qm.shape != (k, k):
            raise ValueError("q_matrix must be square")
        if np.abs(qm.imag).max() > 0 or la.op_norm(qm - qm.T) > 1e-14:
            raise NotHermitian("mixed_q requires a real symmetric q matrix")
        if np.abs(qm.real).max() > 1:
            raise NormExceedsOne("some |q_ij| exceeds 1")
        T = np.zeros((k * k, k * k), dtype=la.COMPLEX)
        for i in range(k):
            for j in range(k):
                T[j * k + i, i * k + j] = qm.real[i, j]
    elif kind == "custom":
        T = la.asarray(matrix)
        k = _leg_dim(T)
        T = la.require_hermitian(T, what="custom twist")
        if la.op_norm(T) > 1 + 1e-12:
            raise NormExceedsOne(f"||T|| = {la.op_norm(T):.6f} > 1")
    else:
        raise ValueError(f"unknown twist kind {kind!r}")
    T = la.asarray(T)
    return Twist(space_dim=k, T=T, level="multiplicity", norm=la.op_norm(T))


def _twist_matrix(T):
    if isinstance(T, Twist):
        if T.level != "multiplicity":
            raise LevelMismatch("need a multiplicity-level twist here")
        return T.T, T.space_dim
    T = la.asarray(T)
    return T, _leg_dim(T)


def ybe_residual(T):
    """|| T_1 T_2 T_1 - T_2 T_1 T_2 || on the tensor cube."""
    T, k = _twist_matrix(T)
    t1 = la.leg_embed(T, k, 1, 3)
    t2 = la.leg_embed(T, k, 2, 3)
    return la.op_norm(t1 @ t2 @ t1 - t2 @ t1 @ t2)


@dataclass(frozen=True)
class TowerLevel:
    n: int
    R: np.ndarray
    R_rev: np.ndarray
    P: np.ndarray
    min_eig: float
    max_eig: float
    kernel_rank: int
    B: np.ndarray
    Bp: np.ndarray
    herm_residual: float
    braided_defect: float


@dataclass(frozen=True)
class TwistTower:
    k: int
    N: int
    T: np.ndarray
    twist_norm: float
    levels: tuple
    ybe: float

    @property
    def max_braided_defect(self):
        return max(lv.braided_defect for lv in self.levels)


def _r_matrices(T, k, n):
    """R_n and its reversed companion on (C^k)^n."""
    dim = k ** n
    eye = np.eye(dim, dtype=la.COMPLEX)
    R = eye.copy()
    acc = eye.copy()
    for j in range(1, n):
        acc = acc @ la.leg_embed(T, k, j, n)
        R += acc
    R_rev = eye.copy()
    acc = eye.copy()
    for j in range(n - 1, 0, -1):
        acc = acc @ la.leg_embed(T, k, j, n)
        R_rev += acc
    return R, R_rev


def _quotient_psd(P, n):
    w, v = la.herm_eig(P)
    wmax = float(w.max()) if w.size else 0.0
    if w.size and float(w.min()) < -PSD_TOL * max(1.0, wmax):
        raise NotATwist(
            f"P_{n} has eigenvalue {float(w.min()):.3e}; twisted inner product "
            "is not positive semi-definite"
        )
    keep = w > corr.EPS_KER * max(wmax, 0.0)
    wk = np.clip(w[keep], 0.0, None)
    vk = v[:, keep]
    B = np.sqrt(wk)[:, None] * la.dag(vk)
    Bp = vk * (1.0 / np.sqrt(wk))[None, :] if wk.size else vk
    return B, Bp, float(w.min()) if w.size else 0.0, wmax, int(P.shape[0] - wk.size)


def build_tower(T, N, budget=DEFAULT_BUDGET):
    """Evaluate P_1..P_N with both recursions and per-level quotients."""
    T, k = _twist_matrix(T)
    if N < 1:
        raise ValueError("tower cutoff N must be >= 1")
    if k ** N > budget:
        raise BudgetExceeded(
            f"tensor dimension {k ** N} exceeds budget {budget}",
            estimate=k ** N, budget=budget,
        )
    T = la.require_hermitian(T, what="twist")
    norm = la.op_norm(T)
    if norm > 1 + 1e-12:
        raise NormExceedsOne(f"||T|| = {norm:.6f} > 1")

    one = np.array([[1.0 + 0j]])
    levels = [
        TowerLevel(n=0, R=one, R_rev=one, P=one, min_eig=1.0, max_eig=1.0,
                   kernel_rank=0, B=one.copy(), Bp=one.copy(),
                   herm_residual=0.0, braided_defect=0.0)
    ]
    P = np.eye(k, dtype=la.COMPLEX)
    for n in range(1, N + 1):
        if n == 1:
            R = R_rev = np.eye(k, dtype=la.COMPLEX)
            P_new = P.copy()
            defect = 0.0
        else:
            R, R_rev = _r_matrices(T, k, n)
            prev = levels[n - 1].P
            P_new = np.kron(np.eye(k, dtype=la.COMPLEX), prev) @ R
            P_alt = np.kron(prev, np.eye(k, dtype=la.COMPLEX)) @ R_rev
            defect = la.op_norm(P_new - P_alt)
        herm = la.op_norm(P_new - la.dag(P_new))
        P_new = la.herm_part(P_new)
        B, Bp, mn, mx, krank = _quotient_psd(P_new, n)
        levels.append(TowerLevel(
            n=n, R=R, R_rev=R_rev, P=P_new, min_eig=mn, max_eig=mx,
            kernel_rank=krank, B=B, Bp=Bp, herm_residual=herm,
            braided_defect=defect,
        ))
    return TwistTower(k=k, N=N, T=T, twist_norm=norm, levels=tuple(levels),
                      ybe=ybe_residual(T) if k ** 3 <= budget else float("nan"))


def c_n(q, n):
    """Product prod_{j<=n} (1-q^j)/(1+q^j)."""
    out = 1.0
    for j in range(1, n + 1):
        out *= (1.0 - q ** j) / (1.0 + q ** j)
    return out


def d_n(q, n):
    """Partial geometric sum 1 + q + ... + q^n."""
    return float(sum(q ** j for j in range(n + 1)))


def sandwich_bounds_report(tower, q=None):
    """Margins of c_n (1 x P_n) <= P_{n+1} <= d_n (1 x P_n), plus the
    braided variant with (P_n x 1)."""
    if q is None:
        q = tower.twist_norm
    eye_k = np.eye(tower.k, dtype=la.COMPLEX)
    rows = []
    for n in range(tower.N):
        P_lo = tower.levels[n].P
        P_hi = tower.levels[n + 1].P
        left = np.kron(eye_k, P_lo)
        right = np.kron(P_lo, eye_k)
        rows.append({
            "n": n,
            "c_n": c_n(q, n),
            "d_n": d_n(q, n),
            "lower_margin": la.min_eig_herm(P_hi - c_n(q, n) * left),
            "upper_margin": la.min_eig_herm(d_n(q, n) * left - P_hi),
            "braided_lower_margin": la.min_eig_herm(P_hi - c_n(q, n) * right),
            "braided_upper_margin": la.min_eig_herm(d_n(q, n) * right - P_hi),
        })
    worst = min(
        min(r["lower_margin"], r["upper_margin"],
            r["braided_lower_margin"], r["braided_upper_margin"])
        for r in rows
    )
    return {"q": q, "levels": rows, "worst_margin": worst}


@dataclass(frozen=True)
class GapConstants:
    q: float
    c: float
    d: float
    m: object
    kappa: object
    f: int
    c_levels: tuple
    d_levels: tuple
    truncation_level: int
    truncation_diff: float


def _c_limit(q, tol=1e-16):
    c = 1.0
    j = 0
    while True:
        j += 1
        factor = (1.0 - q ** j) / (1.0 + q ** j)
        if abs(factor - 1.0) < tol:
            return c, j, abs(factor - 1.0)
        c *= factor
        if j > 10_000:
            return c, j, abs(factor - 1.0)


def _kappa(c, d, m):
    return math.sqrt(c * m) - math.sqrt(d / m) - 2.0 * math.sqrt(d)


def gap_constants(q, m=None, levels=10):
    """Constants of the spectral-gap estimate at twist norm q.

    kappa(q, m) = sqrt(c m) - sqrt(d/m) - 2 sqrt(d) with c the infinite
    product prod (1-q^j)/(1+q^j) and d = 1/(1-q); f(q) is the least m with
    kappa > 0.
    """
    q = float(q)
    if not (0.0 <= q < 1.0):
        raise QOutOfRange(f"q = {q} outside [0, 1)")
    c, trunc, diff = _c_limit(q)
    d = 1.0 / (1.0 - q)
    # kappa > 0 is a quadratic condition in sqrt(m); solve it, then nudge
    # by a short scan to absorb floating-point boundary cases
    x_star = (math.sqrt(d) + math.sqrt(d + math.sqrt(c * d))) / math.sqrt(c)
    f = max(1, int(x_star ** 2) - 2)
    while _kappa(c, d, f) <= 0:
        f += 1
    kappa = _kappa(c, d, int(m)) if m is not None else None
    return GapConstants(
        q=q, c=c, d=d, m=m, kappa=kappa, f=f,
        c_levels=tuple(c_n(q, n) for n in range(levels + 1)),
        d_levels=tuple(d_n(q, n) for n in range(levels + 1)),
        truncation_level=trunc, truncation_diff=diff,
    )


def lift_twist(tc, twist):
    """Conjugate a multiplicity twist onto the relative tensor square.

    Uses the canonical identification of the square with
    L2(base) x C^k x C^k, under which the lift is identity x T; the result
    acts on the Gram-quotient coordinates of rel_tensor(tc, tc).
    """
    T, k = _twist_matrix(twist)
    if tc.kind not in ("multiplicity", "group"):
        raise LevelMismatch("lift needs a constructor-built correspondence")
    if k != tc.meta["k"]:
        raise DimensionMismatch(
            f"twist leg dimension {k} != correspondence multiplicity {tc.meta['k']}"
        )
    rt = corr.rel_tensor(tc, tc)
    Q = corr.canon_ident(tc, 2) @ rt.Bp
    T_can = corr.canon_twist2(tc, T)
    T_B = la.dag(Q) @ T_can @ Q
    T_B = la.herm_part(T_B)
    r2 = T_B.shape[0]
    res = {"Q_unitary": la.op_norm(la.dag(Q) @ Q - np.eye(r2))}
    r_bi = 0.0
    for al in range(tc.kernel.alg_dim):
        r_bi = max(
            r_bi,
            la.op_norm(T_B @ rt.tc.corr.left[al] - rt.tc.corr.left[al] @ T_B),
            la.op_norm(T_B @ rt.tc.corr.right[al] - rt.tc.corr.right[al] @ T_B),
        )
    res["bimodule_commutation"] = r_bi
    return Twist(
        space_dim=r2, T=T_B, level="bimodule", norm=la.op_norm(T_B),
        meta={"origin_T": T, "origin_k": k, "rel_tensor": rt},
        residuals=res,
    )


def compatibility_residuals(twist, tc, n_max=3, ts=(1.0, -0.37)):
    """Residuals of [T, J^(2)] = 0 and [T, U_t^(2)] = 0, plus the tower
    consequences [P_n, J^(n)] = 0 and [P_n, U_t^(n)] = 0 on canonical
    level coordinates."""
    if tc.kind not in ("multiplicity", "group"):
        raise LevelMismatch(
            "compatibility needs canonical level coordinates; build the "
            "correspondence with a constructor"
        )
    if isinstance(twist, Twist) and twist.level == "bimodule":
        if "origin_T" not in twist.meta:
            raise LevelMismatch("bimodule twist lacks its multiplicity origin")
        T = twist.meta["origin_T"]
        k = twist.meta["origin_k"]
    else:
        T, k = _twist_matrix(twist)
    if k != tc.meta["k"]:
        raise LevelMismatch(
            f"twist leg dimension {k} != correspondence multiplicity {tc.meta['k']}"
        )
    T_can = corr.canon_twist2(tc, T)
    C2 = corr.canon_J(tc, 2)
    a2 = corr.canon_flow_gen(tc, 2)
    out = {
        "level2_J": la.op_norm(T_can - la.anti_sandwich(C2, T_can)),
        "level2_U": max(
            la.op_norm(T_can @ la.expm(1j * t * a2) - la.expm(1j * t * a2) @ T_can)
            for t in ts
        ),
        "tower_J": {},
        "tower_U": {},
    }
    tower = build_tower(T, n_max)
    g0 = tc.kernel.gns_dim
    for n in range(2, n_max + 1):
        P_hat = np.kron(np.eye(g0, dtype=la.COMPLEX), tower.levels[n].P)
        Cn = corr.canon_J(tc, n)
        an = corr.canon_flow_gen(tc, n)
        out["tower_J"][n] = la.op_norm(P_hat @ Cn - Cn @ np.conj(P_hat))
        out["tower_U"][n] = max(
            la.op_norm(P_hat @ la.expm(1j * t * an) - la.expm(1j * t * an) @ P_hat)
            for t in ts
        )
    out["max_residual"] = max(
        [out["level2_J"], out["level2_U"]]
        + list(out["tower_J"].values())
        + list(out["tower_U"].values())
    )
    return out
