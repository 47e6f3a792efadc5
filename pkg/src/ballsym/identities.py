"""Residual catalog: quantified numerical checks of the closed-form
identities satisfied by the ball geometry, the coframe calculus and the
symmetric tensor operators.

Each identity has a stable string id, a default tolerance and a residual
function; the suite runner samples points, evaluates the max residual with
its argmax sample, and reports pass/fail.  Tolerances split into a
closed-form class (everything evaluated from exact rational formulas) and
a finite-difference class whose accuracy is limited by the differencing
scheme.

Identity functions receive (rng, n, count) and return (max_residual,
argmax_repr).  All are pure; running them in any order or in parallel
gives the same verdicts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import ball, frames, symtensor
from .frames import WirtingerConfig
from .sampling import ball_points

__all__ = ["IdentityResult", "identity_suite", "IDENTITY_CATALOG", "identity_ids"]

_FD_CFG = WirtingerConfig(h=5e-4, scheme=4)
# metric entries and their high derivatives grow fast toward the sampling
# radius; the Gram-matrix identity needs a finer step to stay below 1e-6
_FD_CFG_FINE = WirtingerConfig(h=2.5e-4, scheme=4)


@dataclass(frozen=True)
class IdentityResult:
    id: str
    samples: int
    max_residual: float
    tol: float
    passed: bool
    argmax: str = ""


def _argmax_repr(z) -> str:
    with np.printoptions(precision=6, suppress=False):
        return np.array2string(np.asarray(z))


def _batch_max(res: np.ndarray, zs: np.ndarray):
    flat = res.reshape(res.shape[0], -1).max(axis=1) if res.ndim > 1 else np.abs(res)
    i = int(np.argmax(flat))
    return float(flat[i]), _argmax_repr(zs[i])


# -- ball geometry class ------------------------------------------------------


def _id_involution(rng, n, count):
    z, w = ball_points(rng, count, n), ball_points(rng, count, n)
    res = np.abs(ball.t_map(z, ball.t_map(z, w)) - w)
    return _batch_max(res, z)


def _id_eq22(rng, n, count):
    z, w = ball_points(rng, count, n), ball_points(rng, count, n)
    lhs = 1.0 - ball.herm_dot(ball.t_map(z, w), z)
    rhs = (1.0 - ball.sq_norm(z)) / (1.0 - ball.herm_dot(w, z))
    return _batch_max(np.abs(lhs - rhs), z)


def _id_delta_product(rng, n, count):
    z, w = ball_points(rng, count, n), ball_points(rng, count, n)
    res = np.abs(ball.delta(z, w) - (1.0 - ball.sq_norm(ball.t_map(z, w))))
    return _batch_max(res, z)


def _id_delta_sym(rng, n, count):
    z, w = ball_points(rng, count, n), ball_points(rng, count, n)
    return _batch_max(np.abs(ball.delta(z, w) - ball.delta(w, z)), z)


def _id_kernel_herm(rng, n, count):
    z, w = ball_points(rng, count, n), ball_points(rng, count, n)
    res = np.abs(ball.bergman_kernel(z, w) - np.conjugate(ball.bergman_kernel(w, z)))
    return _batch_max(res, z)


def _projectors(z: np.ndarray):
    n = z.shape[-1]
    z2 = ball.sq_norm(z)[..., None, None]
    P = z[..., :, None] * np.conjugate(z)[..., None, :] / z2
    Q = np.eye(n, dtype=complex) - P
    return P, Q


def _id_refl_diff_0(rng, n, count):
    z = ball_points(rng, count, n)
    P, Q = _projectors(z)
    s = np.sqrt(1.0 - ball.sq_norm(z))[..., None, None]
    expected = -(s**2) * P - s * Q
    res = np.abs(ball.t_diff(z, np.zeros(n)) - expected)
    return _batch_max(res, z)


def _id_refl_diff_base(rng, n, count):
    z = ball_points(rng, count, n)
    P, Q = _projectors(z)
    s = np.sqrt(1.0 - ball.sq_norm(z))[..., None, None]
    expected = -P / s**2 - Q / s
    res = np.abs(ball.t_diff(z, z) - expected)
    return _batch_max(res, z)


def _id_refl_rdet(rng, n, count):
    z = ball_points(rng, count, n)
    rdet = np.abs(np.linalg.det(ball.t_diff(z, np.zeros(n)))) ** 2
    res = np.abs(rdet - (1.0 - ball.sq_norm(z)) ** (n + 1))
    return _batch_max(res, z)


def _id_refl_diff_prod(rng, n, count):
    z = ball_points(rng, count, n)
    prod = ball.t_diff(z, np.zeros(n)) @ ball.t_diff(z, z)
    return _batch_max(np.abs(prod - np.eye(n)), z)


def _id_metric_frame(rng, n, count):
    z = ball_points(rng, count, n)
    A = ball.frame_A(z)
    res = np.abs(np.conjugate(np.swapaxes(A, -1, -2)) @ A - ball.bergman_metric(z))
    return _batch_max(res, z)


def _id_metric_pullback(rng, n, count):
    z = ball_points(rng, count, n)
    a = ball_points(rng, count, n)
    gz = ball.t_map(a, z)
    dg = ball.t_diff(a, z)
    pulled = np.conjugate(np.swapaxes(dg, -1, -2)) @ ball.bergman_metric(gz) @ dg
    return _batch_max(np.abs(pulled - ball.bergman_metric(z)), z)


def _id_metric_pd(rng, n, count):
    z = ball_points(rng, count, n, radius=0.95)
    ev = np.linalg.eigvalsh(ball.bergman_metric(z))
    worst = float(np.min(ev))
    i = int(np.argmin(ev.min(axis=-1)))
    # residual is the violation amount; any non-positive eigenvalue fails
    return (0.0 if worst > 0 else abs(worst) + 1e300), _argmax_repr(z[i])


def _id_delta_invariance(rng, n, count):
    z, w, a = (ball_points(rng, count, n) for _ in range(3))
    res = np.abs(ball.delta(ball.t_map(a, z), ball.t_map(a, w)) - ball.delta(z, w))
    return _batch_max(res, z)


# -- coframe calculus class ---------------------------------------------------


def _fiber_batch(rng, n, count):
    z = ball_points(rng, count, n)
    t = ball_points(rng, count, n, radius=0.6)
    w = ball.t_map(z, t)
    return z, t, w


def _id_formula3(rng, n, count):
    z, t, w = _fiber_batch(rng, n, count)
    D = ball.t_diff_base_anti(z, w)
    lhs = np.einsum("...jk,...k->...j", D, np.conjugate(z))
    s = np.sqrt(1.0 - ball.sq_norm(z))[..., None]
    om = (1.0 - ball.sq_norm(z))[..., None]
    z2 = ball.sq_norm(z)[..., None]
    tz = ball.herm_dot(t, z)[..., None]
    rhs = (-1.0 + s / om) * t + (1.0 - s) * tz / (z2 * om) * z - s * t * tz / om - (1.0 - s) * tz**2 / (z2 * om) * z
    return _batch_max(np.abs(lhs - rhs), z)


def _id_formula9(rng, n, count):
    z, t, w = _fiber_batch(rng, n, count)
    Da = ball.t_diff_base_anti(z, w)
    Dh = ball.t_diff_base_holo(z, w)
    lhs = np.einsum("...jk,...k->...j", Da, np.conjugate(t)) + np.einsum(
        "...jk,...k->...j", np.conjugate(Dh), t
    )
    s = np.sqrt(1.0 - ball.sq_norm(z))[..., None]
    om = (1.0 - ball.sq_norm(z))[..., None]
    z2 = ball.sq_norm(z)[..., None]
    tz = ball.herm_dot(t, z)[..., None]
    t2 = ball.sq_norm(t)[..., None]
    rhs = -(s - 1.0) / (z2 * om) * tz * z + s / om * t - s / om * t * t2 + (s - 1.0) / (z2 * om) * t2 * tz * z
    return _batch_max(np.abs(lhs - rhs), z)


def _id_taylor2(rng, n, count):
    z, t, w = _fiber_batch(rng, n, count)
    Dh = ball.t_diff_base_holo(z, w)
    lhs = np.einsum("...jk,...k->...j", Dh, np.conjugate(z))
    om = (1.0 - ball.sq_norm(z))[..., None]
    tz = ball.herm_dot(t, z)[..., None]
    rhs = np.conjugate(z) / om * (1.0 - tz)
    return _batch_max(np.abs(lhs - rhs), z)


def _per_sample(rng, n, count, fn):
    zs = ball_points(rng, count, n)
    worst, arg = -1.0, ""
    for z in zs:
        r = fn(z)
        if r > worst:
            worst, arg = r, _argmax_repr(z)
    return worst, arg


def _id_bc_degree(rng, n, count):
    return _per_sample(rng, n, count, lambda z: frames.bc_expand(z).degree_residual)


def _id_bc_pairing(rng, n, count):
    def fn(z):
        e = frames.bc_expand(z, check=False)
        return float(np.max(np.abs(e.b1 + np.conjugate(np.swapaxes(e.c1, 1, 2)))))

    return _per_sample(rng, n, count, fn)


def _id_bc_support(rng, n, count):
    """Quadratic part of the anti derivative is supported on monomials
    containing the component direction; the constant term vanishes."""

    def fn(z):
        e = frames.bc_expand(z, check=False)
        worst = e.const_residual
        for k in range(n):
            off = np.delete(np.delete(e.b2[:, k], k, axis=1), k, axis=2)
            if off.size:
                worst = max(worst, float(np.max(np.abs(off))))
        return worst

    return _per_sample(rng, n, count, fn)


def _id_b2_closed(rng, n, count):
    def fn(z):
        e = frames.bc_expand(z, check=False)
        s = float(np.sqrt(1.0 - ball.sq_norm(z)))
        om = float(1.0 - ball.sq_norm(z))
        z2 = float(ball.sq_norm(z))
        worst = 0.0
        for j in range(n):
            for k in range(n):
                for a in range(n):
                    expect = -s / om * (1.0 if a == j else 0.0) + z[j] * (s - 1.0) / (z2 * om) * np.conjugate(z[a])
                    worst = max(worst, abs(e.b2[j, k, k, a] - expect))
        return worst

    return _per_sample(rng, n, count, fn)


def _frame_anti_derivs(z, cfg=_FD_CFG):
    n = z.shape[-1]
    dA = np.empty((n, n, n), dtype=complex)
    for k in range(n):
        dA[k] = frames.wirtinger_diff(ball.frame_A, z, k, "anti", cfg)
    return dA


def _id_b_via_a(rng, n, count):
    def fn(z):
        e = frames.bc_expand(z, check=False)
        dA = _frame_anti_derivs(z)
        Ainv = ball.frame_A_inv(z)
        fd = np.einsum("jka,al->jkl", dA, Ainv)
        return float(np.max(np.abs(fd - e.b1)))

    return _per_sample(rng, n, count, fn)


def _id_c_via_a(rng, n, count):
    def fn(z):
        e = frames.bc_expand(z, check=False)
        Ainv = ball.frame_A_inv(z)
        dAh = np.empty((n, n, n), dtype=complex)
        for j in range(n):
            dAh[j] = frames.wirtinger_diff(ball.frame_A, z, j, "holo", _FD_CFG)
        # second fiber derivative by central differencing of the exact
        # first derivative in w around w = z
        hw = 1e-5
        d2 = np.empty((n, n, n), dtype=complex)  # [k, j, a]
        for a in range(n):
            ea = np.zeros(n, dtype=complex)
            ea[a] = 1.0
            Jp, Jm = ball.t_diff(z, z + hw * ea), ball.t_diff(z, z - hw * ea)
            Jpi, Jmi = ball.t_diff(z, z + 1j * hw * ea), ball.t_diff(z, z - 1j * hw * ea)
            d2[:, :, a] = 0.5 * ((Jp - Jm) / (2 * hw) - 1j * (Jpi - Jmi) / (2 * hw))
        fd = np.einsum("jka,al->jkl", dAh, Ainv) - np.einsum("kja,al->jkl", d2, Ainv)
        return float(np.max(np.abs(fd - e.c1)))

    return _per_sample(rng, n, count, fn)


def _id_diag_vanish(rng, n, count):
    def fn(z):
        worst = 0.0
        for j in range(n):
            d = frames.wirtinger_diff(lambda p: ball.t_map(p, z), z, j, "anti", _FD_CFG)
            worst = max(worst, float(np.max(np.abs(d))))
        return worst

    return _per_sample(rng, n, count, fn)


def _id_absum(rng, n, count):
    return _per_sample(rng, n, count, lambda z: float(np.max(np.abs(frames.absum_check(z)))))


def _id_frame_unitary(rng, n, count):
    z = ball_points(rng, count, n)
    a = ball_points(rng, count, n)
    w = ball_points(rng, count, n)
    gz = ball.t_map(a, z)
    dg = ball.t_diff(a, z)
    U = ball.frame_A(gz) @ dg @ ball.matrix_inverse(ball.frame_A(z))
    UHU = np.conjugate(np.swapaxes(U, -1, -2)) @ U
    r1 = np.abs(UHU - np.eye(n)).reshape(count, -1).max(axis=1)
    lhs = ball.t_map(gz, ball.t_map(a, w))
    rhs = np.einsum("...kl,...l->...k", U, ball.t_map(z, w))
    r2 = np.abs(lhs - rhs).max(axis=-1)
    res = np.maximum(r1, r2)
    i = int(np.argmax(res))
    return float(res[i]), _argmax_repr(z[i])


def _id_dbar_closed(rng, n, count):
    def metric_from_frame(p):
        A = ball.frame_A(p)
        return np.conjugate(A.T) @ A

    def fn(z):
        D = np.empty((n, n, n), dtype=complex)
        for k in range(n):
            D[k] = frames.wirtinger_diff(metric_from_frame, z, k, "anti", _FD_CFG_FINE)
        anti = D - np.swapaxes(D, 0, 1)
        return float(np.max(np.abs(anti)))

    return _per_sample(rng, n, count, fn)


def _id_conn_def(rng, n, count):
    def fn(z):
        gamma = frames.connection_gamma(z, _FD_CFG)
        dA = _frame_anti_derivs(z)
        Ainv = ball.frame_A_inv(z)
        A = ball.frame_A(z)
        lhs = np.einsum("kj,kls->jls", np.conjugate(Ainv), dA)
        rhs = np.einsum("ljm,ms->jls", gamma, A)
        return float(np.max(np.abs(lhs - rhs)))

    return _per_sample(rng, n, count, fn)


# -- symmetric tensor class (exact sweeps) ------------------------------------


def _rational_table(rng, n, m):
    coeff = {}
    for I in symtensor.multi_indices(n, m):
        coeff[I] = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 8)))
    return symtensor.SymCoeffs(m, "e", coeff)


def _id_rg_norm(rng, n, count):
    for m in range(0, 7):
        u = _rational_table(rng, n, m)
        nu = symtensor.norm_sq(u)
        if nu == 0:
            continue
        ratio = symtensor.one_form_norm_sq(symtensor.raising_RG(u)) / nu
        if ratio != Fraction(m + n, m + 1):
            return 1.0, f"m={m}"
    return 0.0, ""


def _id_curvature_2m(rng, n, count):
    for m in range(0, 6):
        for I in symtensor.multi_indices(n, m):
            u = symtensor.SymCoeffs(m, "e", {I: 1})
            cv = symtensor.curvature_action(u)
            rg = symtensor.raising_RG(u)
            keys = set(cv.coeff) | set(rg.coeff)
            for key in keys:
                if cv.coeff.get(key, 0) != 2 * m * rg.coeff.get(key, 0):
                    return 1.0, f"m={m} I={I}"
    return 0.0, ""


def _id_push_unitary(rng, n, count):
    worst, arg = 0.0, ""
    for _ in range(min(count, 25)):
        X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        U, _r = np.linalg.qr(X)
        m = int(rng.integers(1, 5))
        u = _random_complex_table(rng, n, m)
        v = _random_complex_table(rng, n, m)
        lhs = symtensor.sym_inner(symtensor.pushforward_sym(U, u), symtensor.pushforward_sym(U, v))
        r = abs(complex(lhs) - complex(symtensor.sym_inner(u, v)))
        if r > worst:
            worst, arg = r, f"m={m}"
    return worst, arg


def _random_complex_table(rng, n, m):
    coeff = {}
    for I in symtensor.multi_indices(n, m):
        coeff[I] = complex(rng.normal(), rng.normal())
    return symtensor.SymCoeffs(m, "e", coeff)


def _id_inner_pd(rng, n, count):
    for _ in range(min(count, 50)):
        m = int(rng.integers(1, 5))
        u = _random_complex_table(rng, n, m)
        if complex(symtensor.norm_sq(u)).real <= 0:
            return 1.0, f"m={m}"
    return 0.0, ""


@dataclass(frozen=True)
class IdentitySpec:
    fn: object
    tol: float
    group: str
    description: str


IDENTITY_CATALOG = {
    # ball geometry, closed-form class
    "INVOLUTION": IdentitySpec(_id_involution, 1e-12, "ball", "reflection applied twice is the identity"),
    "EQ22": IdentitySpec(_id_eq22, 1e-12, "ball", "pairing of the reflected point against the base"),
    "DELTA-PRODUCT": IdentitySpec(_id_delta_product, 1e-12, "ball", "two-point boundary factor equals the reflected norm defect"),
    "DELTA-SYM": IdentitySpec(_id_delta_sym, 1e-14, "ball", "two-point boundary factor is symmetric"),
    "KERNEL-HERM": IdentitySpec(_id_kernel_herm, 1e-12, "ball", "kernel Hermitian symmetry"),
    "REFL-DIFF-0": IdentitySpec(_id_refl_diff_0, 1e-10, "ball", "reflection differential at the origin, projector form"),
    "REFL-DIFF-BASE": IdentitySpec(_id_refl_diff_base, 1e-10, "ball", "reflection differential at the base point, projector form"),
    "REFL-RDET": IdentitySpec(_id_refl_rdet, 1e-10, "ball", "real Jacobian of the reflection at the origin"),
    "REFL-DIFF-PROD": IdentitySpec(_id_refl_diff_prod, 1e-10, "ball", "origin and base differentials are mutually inverse"),
    "METRIC-FRAME": IdentitySpec(_id_metric_frame, 1e-10, "ball", "coframe Gram matrix reproduces the metric"),
    "METRIC-PULLBACK": IdentitySpec(_id_metric_pullback, 1e-10, "ball", "metric transforms by conjugation under automorphisms"),
    "METRIC-PD": IdentitySpec(_id_metric_pd, 0.0, "ball", "metric positive definite up to radius 0.95"),
    "DELTA-INV": IdentitySpec(_id_delta_invariance, 1e-10, "ball", "two-point boundary factor is automorphism invariant"),
    # coframe calculus
    "FORMULA3": IdentitySpec(_id_formula3, 1e-8, "frame", "base-conjugate pairing of the anti derivative"),
    "FORMULA9": IdentitySpec(_id_formula9, 1e-8, "frame", "Hermitian pairing of both base derivatives"),
    "TAYLOR2": IdentitySpec(_id_taylor2, 1e-8, "frame", "base-conjugate pairing of the holomorphic derivative"),
    "BC-DEGREE": IdentitySpec(_id_bc_degree, 1e-9, "frame", "fiber expansions have degrees two and one"),
    "BC-PAIRING": IdentitySpec(_id_bc_pairing, 1e-10, "frame", "linear tables of the two derivatives are conjugate opposites"),
    "BC-SUPPORT": IdentitySpec(_id_bc_support, 1e-10, "frame", "quadratic monomials all contain the component direction"),
    "B2-CLOSED": IdentitySpec(_id_b2_closed, 1e-9, "frame", "closed form of the quadratic coefficients"),
    "B-VIA-A": IdentitySpec(_id_b_via_a, 1e-6, "frame", "linear anti table equals the coframe derivative contraction"),
    "C-VIA-A": IdentitySpec(_id_c_via_a, 1e-6, "frame", "linear holomorphic table via coframe and second fiber derivatives"),
    "DIAG-VANISH": IdentitySpec(_id_diag_vanish, 1e-8, "frame", "anti derivative of the reflection vanishes on the diagonal"),
    "ABSUM": IdentitySpec(_id_absum, 1e-9, "frame", "inverse-coframe contraction of quadratic coefficients is the identity"),
    "FRAME-UNITARY": IdentitySpec(_id_frame_unitary, 1e-9, "frame", "frame transport under automorphisms is unitary"),
    "DBAR-CLOSED": IdentitySpec(_id_dbar_closed, 1e-6, "frame", "antisymmetrized conjugate derivative of the frame Gram matrix vanishes"),
    "CONN-DEF": IdentitySpec(_id_conn_def, 1e-6, "frame", "connection reproduces the coframe derivative"),
    # symmetric tensor algebra (exact)
    "RG-NORM": IdentitySpec(_id_rg_norm, 0.0, "sym", "raising operator norm ratio is exact"),
    "CURV-2M": IdentitySpec(_id_curvature_2m, 0.0, "sym", "curvature action is twice the degree times raising"),
    "PUSH-UNITARY": IdentitySpec(_id_push_unitary, 1e-12, "sym", "unitary substitution preserves the inner product"),
    "INNER-PD": IdentitySpec(_id_inner_pd, 0.0, "sym", "inner product positive definite"),
}


def identity_ids(groups=None) -> list:
    if groups is None:
        return list(IDENTITY_CATALOG)
    return [i for i, s in IDENTITY_CATALOG.items() if s.group in groups]


def identity_suite(ids, sampler, tol_overrides=None, rng=None) -> list:
    """Run the listed identities against one sampler configuration.

    tol_overrides maps identity id to a replacement tolerance.  Unknown ids
    raise KeyError.  Results are order-independent; the verdicts do not
    depend on the seed because the identities are theorems on the sampling
    domain.
    """
    tol_overrides = tol_overrides or {}
    results = []
    rng = rng or sampler.rng()
    for ident in ids:
        if ident not in IDENTITY_CATALOG:
            raise KeyError(f"unknown identity id {ident!r}")
        spec = IDENTITY_CATALOG[ident]
        tol = tol_overrides.get(ident, spec.tol)
        resid, arg = spec.fn(rng, sampler.n, sampler.count)
        results.append(
            IdentityResult(ident, sampler.count, resid, tol, bool(resid <= tol), arg)
        )
    return results
