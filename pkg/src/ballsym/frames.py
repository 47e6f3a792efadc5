"""Wirtinger calculus on sampled functions and the coframe connection.

The coframe ``e = A(z) dz`` is not holomorphic in ``z``; its antiholomorphic
derivatives define connection coefficients ``gamma[l, j, mu]``.  This module
also recovers the polynomial expansion, in the fiber coordinate ``t``, of the
base-parameter derivatives of the transported reflection map: the function

    t  ->  d(t_map(z, w))_k / d conj(z_j)   at   w = t_map(z, t)

is a polynomial of degree two in ``t`` (and the holomorphic-in-z counterpart
has degree one).  The coefficient tables drive the compatibility identities
used by the jet pipeline and the identity suite.

Derivatives of the frame use central finite differences by default; the
base derivatives of the reflection itself have exact rational closed forms
(ball.t_diff_base_*), so the ``t``-expansion below is recovered to machine
precision from a fixed interpolation node set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ball

__all__ = [
    "WirtingerConfig",
    "wirtinger_d",
    "wirtinger_diff",
    "connection_gamma",
    "FiberJacobianExpansion",
    "bc_expand",
    "absum_check",
]


@dataclass(frozen=True)
class WirtingerConfig:
    """Step and scheme for central-difference Wirtinger derivatives."""

    h: float = 1e-5
    scheme: int = 2

    def __post_init__(self):
        if not (1e-9 <= self.h <= 1e-2):
            raise ValueError(f"step h must lie in [1e-9, 1e-2], got {self.h}")
        if self.scheme not in (2, 4):
            raise ValueError("scheme must be 2 or 4")


def _check_inside(z: np.ndarray, margin: float) -> None:
    if float(np.sum(np.abs(z) ** 2)) >= (1.0 - margin) ** 2:
        raise ValueError("finite-difference neighborhood exits the unit ball")


def wirtinger_diff(F, z, j: int, kind: str, cfg: WirtingerConfig = WirtingerConfig()):
    """Wirtinger derivative of an array-valued function of one ball point.

    F maps a coordinate vector (n,) to a complex scalar or ndarray; the
    result has the same shape as F(z).  kind 'holo' gives d/dz_j and
    'anti' gives d/dconj(z_j) via 0.5*(d_x -/+ i d_y).
    """
    if kind not in ("holo", "anti"):
        raise ValueError("kind must be 'holo' or 'anti'")
    zc = np.asarray(z, dtype=complex).copy()
    h = cfg.h
    reach = 2 * h if cfg.scheme == 4 else h
    _check_inside(zc, reach * 1.0001 + 1e-15)

    def shifted(step):
        p = zc.copy()
        p[j] += step
        val = np.asarray(F(p), dtype=complex)
        if not np.all(np.isfinite(val)):
            raise ValueError("function evaluation produced non-finite values")
        return val

    if cfg.scheme == 2:
        dx = (shifted(+h) - shifted(-h)) / (2 * h)
        dy = (shifted(+1j * h) - shifted(-1j * h)) / (2 * h)
    else:
        dx = (-shifted(+2 * h) + 8 * shifted(+h) - 8 * shifted(-h) + shifted(-2 * h)) / (12 * h)
        dy = (-shifted(+2j * h) + 8 * shifted(+1j * h) - 8 * shifted(-1j * h) + shifted(-2j * h)) / (12 * h)
    if kind == "holo":
        return 0.5 * (dx - 1j * dy)
    return 0.5 * (dx + 1j * dy)


def wirtinger_d(f, z, j: int, kind: str, cfg: WirtingerConfig = WirtingerConfig()) -> complex:
    """Scalar Wirtinger derivative; see wirtinger_diff."""
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    return complex(wirtinger_diff(lambda p: complex(f(p)), zc, j, kind, cfg))


def connection_gamma(z, cfg: WirtingerConfig = WirtingerConfig()) -> np.ndarray:
    """Connection coefficients gamma[l, j, mu] of the coframe.

    gamma[l, j, mu] = sum_{k,s} conj(Ainv[k, j]) dA[l, s]/dconj(z_k) Ainv[s, mu],
    assembled from central-difference derivatives of the coframe matrix.
    All entries vanish at z = 0.
    """
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    n = zc.shape[0]
    Ainv = ball.frame_A_inv(zc)
    dA = np.empty((n, n, n), dtype=complex)  # dA[k, l, s] = dA_{ls}/dconj(z_k)
    for k in range(n):
        dA[k] = wirtinger_diff(ball.frame_A, zc, k, "anti", cfg)
    return np.einsum("kj,kls,sm->ljm", np.conjugate(Ainv), dA, Ainv)


@dataclass(frozen=True)
class FiberJacobianExpansion:
    """Polynomial coefficients, in the fiber coordinate, of the transported
    base derivatives of the reflection map at a fixed base point.

    b1[j, k, l]     linear coefficient of t_l in the anti derivative (j, k)
    b2[j, k, l, m]  coefficient of the monomial t_l t_m (symmetric in l, m;
                    the diagonal holds the t_l^2 coefficient)
    c0[j, k]        constant term of the holomorphic derivative (j, k)
    c1[j, k, l]     linear coefficient of t_l in the holomorphic derivative

    const_residual  largest constant term found in the anti derivative
                    (exactly zero in theory)
    degree_residual largest mismatch between the fitted polynomials and
                    direct evaluations at off-node check points
    """

    b1: np.ndarray
    b2: np.ndarray
    c0: np.ndarray
    c1: np.ndarray
    const_residual: float
    degree_residual: float

    def b2_coeff(self, j: int, k: int, l: int, m: int) -> complex:
        return self.b2[j, k, l, m]


def _nodes(n: int, r: float = 0.25) -> np.ndarray:
    """Origin, +/- axis points and pair sums; (n^2+3n+2)/2 nodes total."""
    pts = [np.zeros(n)]
    for l in range(n):
        e = np.zeros(n)
        e[l] = r
        pts.append(e.copy())
        pts.append(-e)
    for l in range(n):
        for m in range(l + 1, n):
            e = np.zeros(n)
            e[l] = r
            e[m] = r
            pts.append(e)
    return np.asarray(pts, dtype=complex)


def _monomials(n: int):
    """Basis exponent list: constant, linears, quadratics (l >= m)."""
    basis = [()]
    basis += [(l,) for l in range(n)]
    basis += [(l, m) for l in range(n) for m in range(l + 1)]
    return basis


def _vandermonde(nodes: np.ndarray, basis) -> np.ndarray:
    V = np.empty((nodes.shape[0], len(basis)), dtype=complex)
    for col, mono in enumerate(basis):
        v = np.ones(nodes.shape[0], dtype=complex)
        for idx in mono:
            v = v * nodes[:, idx]
        V[:, col] = v
    return V


def _eval_fiber_derivs(z: np.ndarray, tnodes: np.ndarray):
    """Values of both base derivatives at w = t_map(z, t) for each node t."""
    zb = np.broadcast_to(z, tnodes.shape)
    w = ball.t_map(zb, tnodes)
    return ball.t_diff_base_anti(zb, w), ball.t_diff_base_holo(zb, w)


def bc_expand(z, node_radius: float = 0.25, check: bool = True) -> FiberJacobianExpansion:
    """Recover the fiber-coordinate expansion tables at a base point.

    Evaluates the exact base derivatives of the reflection on a fixed node
    set and solves the small interpolation system; with check=True the
    fitted polynomials are compared against direct evaluations at four
    off-node complex points, enforcing the degree bounds.
    """
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    n = zc.shape[0]
    nodes = _nodes(n, node_radius)
    basis = _monomials(n)
    V = _vandermonde(nodes, basis)

    anti, holo = _eval_fiber_derivs(zc, nodes)
    # solve for all (j, k) right-hand sides at once
    rhs = np.concatenate(
        [anti.reshape(nodes.shape[0], n * n), holo.reshape(nodes.shape[0], n * n)], axis=1
    )
    coef = np.linalg.solve(V, rhs)
    ca = coef[:, : n * n].reshape(len(basis), n, n)
    ch = coef[:, n * n :].reshape(len(basis), n, n)

    b1 = np.zeros((n, n, n), dtype=complex)
    b2 = np.zeros((n, n, n, n), dtype=complex)
    c0 = ch[0].copy()
    c1 = np.zeros((n, n, n), dtype=complex)
    quad_in_holo = 0.0
    for col, mono in enumerate(basis):
        if len(mono) == 1:
            (l,) = mono
            b1[:, :, l] = ca[col]
            c1[:, :, l] = ch[col]
        elif len(mono) == 2:
            l, m = mono
            b2[:, :, l, m] = ca[col]
            b2[:, :, m, l] = ca[col]
            quad_in_holo = max(quad_in_holo, float(np.max(np.abs(ch[col]))))
    const_residual = float(np.max(np.abs(ca[0])))

    degree_residual = quad_in_holo
    if check:
        rng = np.random.default_rng(1729)
        extra = node_radius * 1.2 * (rng.random((4, n)) - 0.5 + 1j * (rng.random((4, n)) - 0.5))
        anti_x, holo_x = _eval_fiber_derivs(zc, extra)
        Vx = _vandermonde(extra, basis)
        fit_anti = np.einsum("pb,bjk->pjk", Vx, ca)
        fit_holo = np.einsum("pb,bjk->pjk", Vx, ch)
        degree_residual = max(
            degree_residual,
            float(np.max(np.abs(fit_anti - anti_x))),
            float(np.max(np.abs(fit_holo - holo_x))),
        )
    return FiberJacobianExpansion(b1, b2, c0, c1, const_residual, degree_residual)


def absum_check(z) -> np.ndarray:
    """Residual of the coframe pairing identity, shape (mu, alpha, k).

    Returns sum_j conj(Ainv[j, mu]) b2[j, k, k, alpha] - delta(mu, alpha);
    the maximum magnitude is the reported diagnostic.
    """
    zc = z.coords if isinstance(z, ball.Point) else np.asarray(z, dtype=complex)
    n = zc.shape[0]
    exp = bc_expand(zc, check=False)
    Ainv = ball.frame_A_inv(zc)
    # pick the t_k t_alpha coefficient of table (j, k): b2[j, k, k, alpha]
    picked = exp.b2[:, np.arange(n), np.arange(n), :]  # (j, k, alpha)
    lhs = np.einsum("jm,jka->mak", np.conjugate(Ainv), picked)
    eye = np.eye(n, dtype=complex)[:, :, None]
    return lhs - eye
