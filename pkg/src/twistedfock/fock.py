"""Truncated twisted Fock bimodule over a Tomita correspondence.

Levels n = 0..N: level 0 is L2(base), level n is the n-th relative tensor
power of H quotiented by ker P_{T,n}.  Everything is realized on canonical
coordinates (L2(base) x (C^k)^n for constructor-built correspondences), so
the scalar tower quotient B_n lifts to kron(identity, B_n) and all level
operators have exact closed forms before quotienting.

Truncation policy: the level N -> N+1 creation block is dropped; checks that
would touch it restrict to the subspace of levels <= N - (word length).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _linalg as la
from . import base_modular as bm
from . import correspondence as corr
from . import twist as tw
from .errors import (
    BudgetExceeded,
    EquivarianceViolation,
    HypothesisViolation,
    IncompatibleTwist,
    NotATwist,
    RealityViolation,
    VectorDimensionMismatch,
    WordTooLongForCutoff,
)

__all__ = [
    "TwistedFock",
    "FieldOperator",
    "build_fock",
    "make_field_left",
    "make_field_right",
    "real_project_left",
    "real_project_right",
    "fock_conjugation",
    "fock_flow",
    "pi_left",
    "pi_right",
    "conditional_expectation",
    "fock_weight",
    "vacuum_vector",
    "vacuum_moment",
    "kms_residual",
    "modular_level1_residual",
    "conj_intertwining_residual",
    "locality_residual",
    "type_I_factorization_check",
    "crossed_product_check",
    "spectral_gap_experiment",
]

REALITY_TOL = 1e-8
WELLDEF_TOL = 1e-8


@dataclass(frozen=True)
class TwistedFock:
    tc: corr.TomitaCorrespondence
    T: np.ndarray
    N: int
    tower: tw.TwistTower
    g0: int
    k: int
    dims: tuple
    offsets: tuple
    D: int
    B_hat: tuple
    Bp_hat: tuple
    J_blocks: tuple
    flow_gens: tuple
    left_blocks: tuple
    right_blocks: tuple
    residuals: dict = field(repr=False, default_factory=dict)

    def level_slice(self, n):
        return slice(self.offsets[n], self.offsets[n] + self.dims[n])


def _fock_twist_matrix(T, tc):
    if isinstance(T, tw.Twist):
        if T.level == "bimodule":
            if "origin_T" not in T.meta:
                raise IncompatibleTwist(
                    "bimodule twist lacks its multiplicity-level origin"
                )
            return la.asarray(T.meta["origin_T"])
        return T.T
    return la.asarray(T)


def build_fock(tc, T, N, budget=tw.DEFAULT_BUDGET, compat_check=True):
    """Assemble levels 0..N with descended actions, conjugation and flow."""
    if tc.kind not in ("multiplicity", "group"):
        raise ValueError("Fock construction needs a constructor-built correspondence")
    T = _fock_twist_matrix(T, tc)
    k = tc.meta["k"]
    if T.shape != (k * k, k * k):
        raise IncompatibleTwist(
            f"twist acts on dimension {T.shape[0]}, correspondence square is {k * k}"
        )
    g0 = tc.kernel.gns_dim
    estimate = max(k ** N, g0 * k ** N)
    if estimate > budget:
        raise BudgetExceeded(
            f"level dimension {estimate} exceeds budget {budget}",
            estimate=estimate, budget=budget,
        )
    try:
        tower = tw.build_tower(T, N, budget=budget)
    except NotATwist as exc:
        raise IncompatibleTwist(str(exc)) from exc

    residuals = {}
    if compat_check:
        compat = tw.compatibility_residuals(T, tc, n_max=min(N, 3))
        residuals["compatibility"] = compat["max_residual"]
        residuals["compatible"] = bool(compat["max_residual"] <= 1e-8)

    eye_g = np.eye(g0, dtype=la.COMPLEX)
    dims, B_hat, Bp_hat = [], [], []
    J_blocks, flow_gens, left_blocks, right_blocks = [], [], [], []
    r_j = r_u = r_guard = r_herm = 0.0
    for n in range(N + 1):
        B = np.kron(eye_g, tower.levels[n].B)
        Bp = np.kron(eye_g, tower.levels[n].Bp)
        r_n = B.shape[0]
        dims.append(r_n)
        B_hat.append(B)
        Bp_hat.append(Bp)
        full = B.shape[1]
        proj = Bp @ B
        C_can = corr.canon_J(tc, n)
        C_n = B @ C_can @ np.conj(Bp)
        r_guard = max(r_guard, la.op_norm(B @ C_can @ np.conj(np.eye(full) - proj)))
        r_j = max(r_j, la.op_norm(la.dag(C_n) @ C_n - np.eye(r_n)))
        a_can = corr.canon_flow_gen(tc, n)
        a_raw = B @ a_can @ Bp
        r_herm = max(r_herm, la.op_norm(a_raw - la.dag(a_raw)))
        a_n = la.herm_part(a_raw)
        u = la.expm(1j * a_n)
        r_u = max(r_u, la.op_norm(la.dag(u) @ u - np.eye(r_n)))
        J_blocks.append(C_n)
        flow_gens.append(a_n)
        cl = corr.canon_left(tc, n)
        cr = corr.canon_right(tc, n)
        left_blocks.append(np.stack([B @ cl[al] @ Bp for al in range(tc.kernel.alg_dim)]))
        right_blocks.append(np.stack([B @ cr[al] @ Bp for al in range(tc.kernel.alg_dim)]))
    offsets = np.concatenate([[0], np.cumsum(dims)])
    residuals.update({
        "J_antiunitary": r_j,
        "J_kernel_guard": r_guard,
        "U_unitary": r_u,
        "flow_hermitize": r_herm,
    })
    return TwistedFock(
        tc=tc, T=T, N=N, tower=tower, g0=g0, k=k,
        dims=tuple(dims), offsets=tuple(int(o) for o in offsets[:-1]),
        D=int(offsets[-1]), B_hat=tuple(B_hat), Bp_hat=tuple(Bp_hat),
        J_blocks=tuple(J_blocks), flow_gens=tuple(flow_gens),
        left_blocks=tuple(left_blocks), right_blocks=tuple(right_blocks),
        residuals=residuals,
    )


# ---------------------------------------------------------------------------
# assembled structure maps
# ---------------------------------------------------------------------------

def _blockdiag(F, blocks):
    out = np.zeros((F.D, F.D), dtype=la.COMPLEX)
    for n, b in enumerate(blocks):
        s = F.level_slice(n)
        out[s, s] = b
    return out


def fock_conjugation(F):
    """C-matrix of F(J) on the truncated space (anti-linear, blockdiagonal)."""
    return _blockdiag(F, F.J_blocks)


def fock_flow(F, t):
    """Unitary F(U_t), blockdiagonal over levels."""
    return _blockdiag(F, [la.expm(1j * t * a) for a in F.flow_gens])


def pi_left(F, x):
    coords = corr._element_coords(F.tc.kernel, x)
    return _blockdiag(
        F, [np.tensordot(coords, F.left_blocks[n], axes=(0, 0)) for n in range(F.N + 1)]
    )


def pi_right(F, x):
    coords = corr._element_coords(F.tc.kernel, x)
    return _blockdiag(
        F, [np.tensordot(coords, F.right_blocks[n], axes=(0, 0)) for n in range(F.N + 1)]
    )


def vacuum_vector(F):
    """Lambda(1) embedded at level 0 (a unit vector when Tr h = 1)."""
    v = np.zeros(F.D, dtype=la.COMPLEX)
    v[: F.g0] = F.tc.kernel.unit
    return v


def conditional_expectation(F, X):
    """Compression to level 0 as a base element (matrix for matrix bases,
    coefficient vector for group bases)."""
    corner = np.asarray(X)[: F.g0, : F.g0]
    coords = F.tc.kernel.alg_coords(corner)
    if F.tc.kernel.kind == "matrix":
        return la.unvec(coords, F.tc.kernel.base.d)
    return coords


def fock_weight(F, X):
    """phi-hat(X) = phi(E(X))."""
    corner = np.asarray(X)[: F.g0, : F.g0]
    return F.tc.kernel.element_weight(F.tc.kernel.alg_coords(corner))


# ---------------------------------------------------------------------------
# field operators
# ---------------------------------------------------------------------------

def _require_vector(tc, v, what):
    v = la.asarray(v).reshape(-1)
    if v.shape[0] != tc.m:
        raise VectorDimensionMismatch(
            f"{what} has dimension {v.shape[0]}, correspondence has {tc.m}"
        )
    return v


def real_project_left(tc, xi):
    """Projection onto the left real subspace, xi -> (xi + J U_{-i/2} xi)/2."""
    xi = _require_vector(tc, xi, "vector")
    half = la.expm(tc.a / 2.0)
    return 0.5 * (xi + tc.J(half @ xi))


def real_project_right(tc, eta):
    eta = _require_vector(tc, eta, "vector")
    half = la.expm(-tc.a / 2.0)
    return 0.5 * (eta + tc.J(half @ eta))


def _reality_residual(tc, xi, side):
    half = la.expm(tc.a / 2.0 if side == "left" else -tc.a / 2.0)
    scale = max(1.0, float(np.linalg.norm(xi)))
    return float(np.linalg.norm(tc.J(half @ xi) - xi)) / scale


@dataclass(frozen=True)
class FieldOperator:
    side: str
    vector: np.ndarray
    creation: tuple
    matrix: np.ndarray
    symbol_norm: float
    norm_margins: tuple
    welldef_residual: float
    reality_residual: float


def _make_field(F, xi, side):
    xi = la.asarray(xi).reshape(-1)
    if xi.size != F.tc.m:
        raise VectorDimensionMismatch(
            f"vector has length {xi.size}, correspondence dimension is {F.tc.m}"
        )
    q = F.tower.twist_norm
    if side == "left":
        sym = corr.left_symbol(F.tc, xi)
        insert = lambda n: corr.canon_creation_left(F.tc, xi, n)
    else:
        sym = corr.right_symbol(F.tc, xi)
        insert = lambda n: corr.canon_creation_right(F.tc, xi, n)
    sym_norm = la.op_norm(sym)
    blocks = []
    margins = []
    welldef = 0.0
    for n in range(F.N):
        A = insert(n)
        free = np.eye(F.B_hat[n].shape[1]) - F.Bp_hat[n] @ F.B_hat[n]
        welldef = max(welldef, la.op_norm(F.B_hat[n + 1] @ A @ free))
        blk = F.B_hat[n + 1] @ A @ F.Bp_hat[n]
        blocks.append(blk)
        bound = np.sqrt(tw.d_n(q, n)) * sym_norm
        margins.append(bound - la.op_norm(blk))
    if welldef > WELLDEF_TOL:
        raise IncompatibleTwist(
            f"creation does not descend to the quotient (residual {welldef:.3e})"
        )
    mat = np.zeros((F.D, F.D), dtype=la.COMPLEX)
    for n, blk in enumerate(blocks):
        s_hi, s_lo = F.level_slice(n + 1), F.level_slice(n)
        mat[s_hi, s_lo] = blk
        mat[s_lo, s_hi] = la.dag(blk)
    return FieldOperator(
        side=side, vector=xi, creation=tuple(blocks), matrix=mat,
        symbol_norm=sym_norm, norm_margins=tuple(margins),
        welldef_residual=welldef,
        reality_residual=_reality_residual(F.tc, xi, side),
    )


def make_field_left(F, xi):
    """Field s_T(xi) = creation + annihilation, left version."""
    return _make_field(F, xi, "left")


def make_field_right(F, eta):
    """Field d_T(eta), right version (insertion at the last leg)."""
    return _make_field(F, eta, "right")


def _as_left_field(F, item):
    if isinstance(item, FieldOperator):
        return item
    return make_field_left(F, item)


# ---------------------------------------------------------------------------
# moments and modular residuals
# ---------------------------------------------------------------------------

def vacuum_moment(F, word):
    """phi-hat of the product of field operators; exact for |word| <= N."""
    if len(word) > F.N:
        raise WordTooLongForCutoff(
            f"word length {len(word)} exceeds cutoff {F.N}"
        )
    X = np.eye(F.D, dtype=la.COMPLEX)
    for item in word:
        X = X @ _as_left_field(F, item).matrix
    return fock_weight(F, X)


def modular_level1_residual(F, ts=(1.0, -0.37)):
    """Flow restricted to level 1 equals U_t on H."""
    if F.N < 1:
        return 0.0
    s = F.level_slice(1)
    out = 0.0
    for t in ts:
        out = max(out, la.op_norm(fock_flow(F, t)[s, s] - F.tc.flow(t)))
    return out


def kms_residual(F, word, ts=(1.0, -0.37)):
    """Modular-flow residuals for a field word.

    (i)  max_t |phi-hat(sigma_t(s(xi_1)) w) - phi-hat(s(U_t xi_1) w)| with
         sigma_t implemented by F(U_t)-conjugation;
    (ii) |phi-hat(s(xi_1) w) - phi-hat(w s(U_{-i} xi_1))| with U_{-i} = e^a.
    """
    if len(word) + 1 > F.N:
        raise WordTooLongForCutoff(
            f"need word length + 1 <= N, got {len(word)} + 1 > {F.N}"
        )
    fields = [_as_left_field(F, it) for it in word]
    head = fields[0]
    w_op = np.eye(F.D, dtype=la.COMPLEX)
    for f in fields[1:]:
        w_op = w_op @ f.matrix
    res = 0.0
    for t in ts:
        u = fock_flow(F, t)
        lhs = fock_weight(F, u @ head.matrix @ la.dag(u) @ w_op)
        moved = make_field_left(F, F.tc.flow(t) @ head.vector)
        rhs = fock_weight(F, moved.matrix @ w_op)
        res = max(res, abs(lhs - rhs))
    analytic = make_field_left(F, la.expm(F.tc.a) @ head.vector)
    lhs2 = fock_weight(F, head.matrix @ w_op)
    rhs2 = fock_weight(F, w_op @ analytic.matrix)
    return max(res, abs(lhs2 - rhs2))


def conj_intertwining_residual(F, xi):
    """|| F(J) s_T(xi) F(J) - d_T(J xi) || for real-left xi."""
    r = _reality_residual(F.tc, xi, "left")
    if r > REALITY_TOL:
        raise RealityViolation(f"xi is not in the left real subspace ({r:.3e})")
    s = make_field_left(F, xi).matrix
    d = make_field_right(F, F.tc.J(la.asarray(xi).reshape(-1))).matrix
    C = fock_conjugation(F)
    return la.op_norm(la.anti_sandwich(C, s) - d)


def locality_residual(F, xi, eta):
    """Commutator of left and right fields on the truncation-safe columns."""
    fl = xi if isinstance(xi, FieldOperator) else make_field_left(F, xi)
    fr = eta if isinstance(eta, FieldOperator) else make_field_right(F, eta)
    if fl.side != "left" or fr.side != "right":
        raise ValueError("need a left field and a right field")
    if fl.reality_residual > REALITY_TOL:
        raise RealityViolation(
            f"left vector not in the real subspace ({fl.reality_residual:.3e})"
        )
    if fr.reality_residual > REALITY_TOL:
        raise RealityViolation(
            f"right vector not in the real subspace ({fr.reality_residual:.3e})"
        )
    if F.N < 2:
        return 0.0
    comm = fl.matrix @ fr.matrix - fr.matrix @ fl.matrix
    safe_cols = F.offsets[F.N - 1]
    return la.op_norm(comm[:, :safe_cols])


# ---------------------------------------------------------------------------
# type-I factorization
# ---------------------------------------------------------------------------

def _op_tensor(F, F_sc, x, Y):
    """Operator kron(pi_l(x), Y) on the operator-valued Fock, blockwise."""
    lx = bm.left_mult_vec(F.tc.kernel.base, la.asarray(x))
    out = np.zeros((F.D, F.D), dtype=la.COMPLEX)
    for p in range(F.N + 1):
        for q_ in range(F.N + 1):
            blk = Y[F_sc.level_slice(p), F_sc.level_slice(q_)]
            if blk.size == 0 or not np.any(blk):
                continue
            out[F.level_slice(p), F.level_slice(q_)] = np.kron(lx, blk)
    return out


def type_I_factorization_check(base, k, C_mult, a_mult, T_mult, N,
                               seed=7, n_samples=4):
    """Verify the factorization of the operator-valued Fock space.

    Over M_d the twisted Fock of L2(M_d) x C^k is M_d acting on the left
    tensored with the scalar twisted Fock of C^k: creation by
    Lambda(x) x xi matches pi_l(x) x (scalar creation of xi), the right
    version matches pi_r, the Gram machinery agrees with the canonical
    coordinates, and E_T factors as id x vacuum expectation.
    """
    tc = corr.make_multiplicity_corr(base, k, C_mult, a_mult)
    F = build_fock(tc, T_mult, N)
    base_sc = bm.make_base(np.array([[1.0]]))
    tc_sc = corr.make_multiplicity_corr(base_sc, k, C_mult, a_mult)
    F_sc = build_fock(tc_sc, T_mult, N)
    rng = la.rng_from_seed(seed)
    d = base.d

    r_create = r_right = 0.0
    for _ in range(n_samples):
        x = la.rand_complex(rng, (d, d))
        xi = la.rand_complex(rng, (k,))
        zeta = np.kron(la.vec(x @ base.sqrt_h), xi)
        zeta_r = np.kron(la.vec(base.sqrt_h @ x), xi)
        fl = make_field_left(F, zeta)
        fr = make_field_right(F, zeta_r)
        fl_sc = make_field_left(F_sc, xi)
        fr_sc = make_field_right(F_sc, xi)
        for n in range(N):
            lhs = fl.creation[n]
            rhs = np.kron(bm.left_mult_vec(base, x), fl_sc.creation[n])
            r_create = max(r_create, la.op_norm(lhs - rhs))
            lhs_r = fr.creation[n]
            rhs_r = np.kron(bm.right_mult_vec(base, x), fr_sc.creation[n])
            r_right = max(r_right, la.op_norm(lhs_r - rhs_r))

    rt = corr.rel_tensor(tc, tc)
    iota2 = corr.canon_ident(tc, 2)
    r_gram = la.op_norm(la.dag(iota2) @ iota2 - rt.gram)
    lifted = tw.lift_twist(tc, T_mult)
    P2_can = np.kron(np.eye(tc.kernel.gns_dim, dtype=la.COMPLEX),
                     F.tower.levels[2].P) if N >= 2 else None
    if P2_can is not None:
        gram_twisted_canon = la.dag(iota2) @ P2_can @ iota2
        gram_twisted_quot = la.dag(rt.B) @ (
            np.eye(rt.B.shape[0]) + lifted.T
        ) @ rt.B
        r_gram_tw = la.op_norm(gram_twisted_canon - gram_twisted_quot)
    else:
        r_gram_tw = 0.0

    r_cond = 0.0
    for _ in range(n_samples):
        x = la.rand_complex(rng, (d, d))
        w1 = la.rand_complex(rng, (tc_sc.m,))
        w2 = la.rand_complex(rng, (tc_sc.m,))
        Y = make_field_left(F_sc, w1).matrix @ make_field_left(F_sc, w2).matrix
        X = _op_tensor(F, F_sc, x, Y)
        expect = x * complex(Y[0, 0])
        r_cond = max(r_cond, la.op_norm(conditional_expectation(F, X) - expect))

    report = {
        "creation_intertwining": r_create,
        "right_creation_intertwining": r_right,
        "gram_consistency": r_gram,
        "twisted_gram_consistency": r_gram_tw,
        "conditional_expectation_factorization": r_cond,
    }
    report["max_residual"] = max(report.values())
    return report


# ---------------------------------------------------------------------------
# crossed product
# ---------------------------------------------------------------------------

def crossed_product_check(mult_table, rep, T_mult, N, C=None, a=None,
                          seed=11, n_samples=3):
    """Verify the crossed-product picture of the group-base Fock space.

    With V_n(delta_g x xi) = delta_g x pi(g^{-1})^(x)n xi: each V_n is
    unitary on the twisted quotient, V intertwines lambda_g with
    lambda_g x 1, and conjugates the field of delta_e x xi to the
    pointwise-rotated scalar field.
    """
    T = _fock_twist_matrix(T_mult, None)
    tc = corr.make_group_corr(mult_table, rep, C, a)
    group = tc.meta["group"]
    k = tc.meta["k"]
    reps = tc.meta["rep"]
    for g in range(group.order):
        gg = np.kron(reps[g], reps[g])
        r = la.op_norm(T @ gg - gg @ T)
        if r > 1e-10:
            raise EquivarianceViolation(
                f"[T, pi(g) x pi(g)] = {r:.3e} for group element {g}"
            )
    F = build_fock(tc, T, N)
    base_sc = bm.make_base(np.array([[1.0]]))
    tc_sc = corr.make_multiplicity_corr(base_sc, k, tc.meta["C_mult"], tc.meta["a_mult"])
    F_sc = build_fock(tc_sc, T, N)
    nG = group.order

    V_blocks = []
    r_unitary = 0.0
    for n in range(N + 1):
        W = np.zeros((nG * k ** n, nG * k ** n), dtype=la.COMPLEX)
        for g in range(nG):
            pw = la.kron_all([reps[group.inv[g]]] * n) if n else np.array([[1.0 + 0j]])
            W[g * k ** n:(g + 1) * k ** n, g * k ** n:(g + 1) * k ** n] = pw
        V_n = F.B_hat[n] @ W @ F.Bp_hat[n]
        V_blocks.append(V_n)
        r_unitary = max(r_unitary, la.op_norm(la.dag(V_n) @ V_n - np.eye(V_n.shape[0])))
    V = _blockdiag(F, V_blocks)

    r_left = 0.0
    for g in range(nG):
        lam = pi_left(F, np.eye(nG, dtype=la.COMPLEX)[:, g])
        target = _blockdiag(
            F,
            [np.kron(tc.kernel.left_reg[g], np.eye(F_sc.dims[n], dtype=la.COMPLEX))
             for n in range(N + 1)],
        )
        r_left = max(r_left, la.op_norm(V @ lam - target @ V))

    rng = la.rng_from_seed(seed)
    delta_e = np.zeros(nG, dtype=la.COMPLEX)
    delta_e[group.e] = 1.0
    F_sc_rot = [
        _blockdiag(
            F_sc,
            [F_sc.B_hat[n] @ (la.kron_all([reps[group.inv[g]]] * n)
                              if n else np.array([[1.0 + 0j]])) @ F_sc.Bp_hat[n]
             for n in range(N + 1)],
        )
        for g in range(nG)
    ]
    r_field = 0.0
    for _ in range(n_samples):
        xi = la.rand_complex(rng, (k,))
        zeta = np.kron(delta_e, xi)
        s = make_field_left(F, zeta).matrix
        lhs = V @ s @ la.dag(V)
        s_sc = make_field_left(F_sc, xi).matrix
        rhs = np.zeros_like(lhs)
        for g in range(nG):
            rot = F_sc_rot[g] @ s_sc @ la.dag(F_sc_rot[g])
            for p in range(N + 1):
                for q_ in range(N + 1):
                    blk = rot[F_sc.level_slice(p), F_sc.level_slice(q_)]
                    sp, sq = F.level_slice(p), F.level_slice(q_)
                    rp = F_sc.dims[p]
                    rq = F_sc.dims[q_]
                    rhs[sp.start + g * rp: sp.start + (g + 1) * rp,
                        sq.start + g * rq: sq.start + (g + 1) * rq] = blk
        r_field = max(r_field, la.op_norm(lhs - rhs))

    report = {
        "V_unitary": r_unitary,
        "left_action_intertwining": r_left,
        "field_intertwining": r_field,
    }
    report["max_residual"] = max(report.values())
    return report


# ---------------------------------------------------------------------------
# spectral gap experiment
# ---------------------------------------------------------------------------

def spectral_gap_experiment(F, xs, xis, hyp_tol=1e-8, ts=(0.7, -1.3),
                            flag_at=-1e-6):
    """Empirical check of the gap inequality on centralizer samples.

    Hypotheses on the xi_i: J-fixed, left symbols isometric with orthogonal
    ranges, and the U_{i/2}-shifted symbols have projection-valued overlaps.
    For each x: LHS = sum_i ||F(J) x* F(J) xi_i - x xi_i||^2 is compared
    against kappa^2 phi-hat(|x - E(x)|^2); margins below ``flag_at`` are
    flagged, never raised (the inequality is asserted only for the
    untruncated object).
    """
    tc = F.tc
    xis = [la.asarray(x).reshape(-1) for x in xis]
    half = la.expm(-tc.a / 2.0)
    syms = [corr.left_symbol(tc, x) for x in xis]
    syms_plus = [corr.left_symbol(tc, half @ x) for x in xis]
    for i, x in enumerate(xis):
        if np.linalg.norm(tc.J(x) - x) > hyp_tol:
            raise HypothesisViolation(f"xi_{i} is not J-fixed")
    for i in range(len(xis)):
        for j in range(len(xis)):
            ov = la.dag(syms[i]) @ syms[j]
            target = np.eye(ov.shape[0]) if i == j else 0.0
            if la.op_norm(ov - target) > hyp_tol:
                raise HypothesisViolation(
                    f"left symbols of xi_{i}, xi_{j} are not orthonormal isometries"
                )
            ovp = la.dag(syms_plus[i]) @ syms_plus[j]
            if i != j and la.op_norm(ovp) > hyp_tol:
                raise HypothesisViolation(
                    f"shifted symbols of xi_{i}, xi_{j} are not orthogonal"
                )
            if i == j and (
                la.op_norm(ovp @ ovp - ovp) > hyp_tol
                or la.op_norm(ovp - la.dag(ovp)) > hyp_tol
            ):
                raise HypothesisViolation(
                    f"shifted symbol overlap of xi_{i} is not a projection"
                )

    gc = tw.gap_constants(F.tower.twist_norm, m=len(xis))
    kappa = gc.kappa
    certified = kappa is not None and kappa > 0
    C_F = fock_conjugation(F)
    s1 = F.level_slice(1)
    samples = []
    for idx, x in enumerate(xs):
        x = la.asarray(x)
        r_cent = max(
            la.op_norm(fock_flow(F, t) @ x @ la.dag(fock_flow(F, t)) - x) for t in ts
        )
        if r_cent > 1e-6:
            raise HypothesisViolation(
                f"sample {idx} is not in the centralizer (residual {r_cent:.3e})"
            )
        jxj = la.anti_sandwich(C_F, la.dag(x))
        lhs = 0.0
        for xi in xis:
            v = np.zeros(F.D, dtype=la.COMPLEX)
            v[s1] = xi
            lhs += float(np.linalg.norm(jxj @ v - x @ v) ** 2)
        ex = conditional_expectation(F, x)
        y = x - pi_left(F, ex)
        phi_sq = float(np.real(fock_weight(F, la.dag(y) @ y)))
        rhs = kappa ** 2 * phi_sq if certified else None
        margin = lhs - rhs if certified else None
        samples.append({
            "lhs": lhs,
            "phi_centered_sq": phi_sq,
            "rhs": rhs,
            "margin": margin,
            "flagged": bool(certified and margin < flag_at),
            "centralizer_residual": r_cent,
        })
    return {
        "kappa": kappa,
        "certified": certified,
        "m": len(xis),
        "twist_norm": F.tower.twist_norm,
        "samples": samples,
        "min_margin": min((s["margin"] for s in samples if s["margin"] is not None),
                          default=None),
        "n_flagged": sum(s["flagged"] for s in samples),
    }
