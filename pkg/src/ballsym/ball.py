"""Closed-form geometry of the complex unit ball.

Reproducing kernel, the invariant Hermitian metric, the point-swapping
reflection ``t_map(z, .)`` (the automorphism exchanging ``0`` and ``z``),
its holomorphic differentials, the boundary-distance product ``delta``,
and the moving coframe matrix ``frame_A``.

Every function is a pure function of its arguments and broadcasts over
leading axes: a batch of points of shape ``(S, n)`` is handled in one
vectorized call.  The last axis is always the coordinate axis.

The projection onto the line through ``z`` is never formed on its own.
All formulas use the combination

    M(z) = s_z * I + outer(z, conj(z)) / (1 + s_z),      s_z = sqrt(1 - |z|^2)

which equals the projector mix ``P_z + s_z Q_z`` for ``z != 0`` and extends
smoothly to ``M(0) = I``.  This removes the 0/0 at the origin and fixes the
convention ``t_map(0, w) = -w``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Point",
    "BallPair",
    "sq_norm",
    "herm_dot",
    "bergman_kernel",
    "bergman_metric",
    "t_map",
    "delta",
    "t_diff",
    "t_diff_base_anti",
    "t_diff_base_holo",
    "frame_A",
    "frame_A_inv",
    "matrix_inverse",
    "is_hermitian",
]

#: refuse matrix inversion above this 1-norm condition estimate
COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class Point:
    """A point of the open unit ball in C^n.

    The squared Euclidean norm must be strictly below one; construction
    fails otherwise.
    """

    coords: np.ndarray = field()

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=complex)
        if c.ndim != 1:
            raise ValueError("coords must be a one-dimensional complex vector")
        if not np.all(np.isfinite(c)):
            raise ValueError("coords must be finite")
        r2 = float(np.sum(np.abs(c) ** 2))
        if r2 >= 1.0:
            raise ValueError(f"point lies outside the open unit ball: |z|^2 = {r2:.6g}")
        object.__setattr__(self, "coords", c)

    @property
    def n(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True, eq=False)
class BallPair:
    """An ordered pair of ball points; the diagonal is the locus z = w."""

    z: Point
    w: Point

    def __post_init__(self):
        if self.z.n != self.w.n:
            raise ValueError("z and w must have the same dimension")


def _coords(z) -> np.ndarray:
    if isinstance(z, Point):
        return z.coords
    return np.asarray(z, dtype=complex)


def sq_norm(z) -> np.ndarray:
    """|z|^2 over the last axis (real-valued)."""
    c = _coords(z)
    return np.sum(np.abs(c) ** 2, axis=-1)


def herm_dot(z, w) -> np.ndarray:
    """Hermitian pairing z . conj(w) over the last axis."""
    zc, wc = _coords(z), _coords(w)
    return np.sum(zc * np.conjugate(wc), axis=-1)


def bergman_kernel(z, w) -> np.ndarray:
    """Reproducing kernel (1 - z.conj(w))^-(n+1) of the unit ball."""
    zc, wc = _coords(z), _coords(w)
    n = zc.shape[-1]
    return (1.0 - herm_dot(zc, wc)) ** (-(n + 1))


def bergman_metric(z) -> np.ndarray:
    """Invariant metric matrix B(z), shape (..., n, n).

    Closed form (delta_ab (1-|z|^2) + z_a conj(z_b)) / (1-|z|^2)^2; equals
    the normalized complex Hessian of log of the kernel on the diagonal,
    and also t_diff(z, z)^H t_diff(z, z).
    """
    zc = _coords(z)
    n = zc.shape[-1]
    one_m = (1.0 - sq_norm(zc))[..., None, None]
    outer = zc[..., :, None] * np.conjugate(zc)[..., None, :]
    eye = np.eye(n, dtype=complex)
    return (eye * one_m + outer) / one_m**2


def _s(z) -> np.ndarray:
    return np.sqrt(1.0 - sq_norm(_coords(z)))


def _swap_matrix(z) -> np.ndarray:
    """M(z) = s I + outer(z, conj(z)) / (1+s), smooth through z = 0."""
    zc = _coords(z)
    n = zc.shape[-1]
    s = _s(zc)
    outer = zc[..., :, None] * np.conjugate(zc)[..., None, :]
    return np.eye(n, dtype=complex) * s[..., None, None] + outer / (1.0 + s)[..., None, None]


def t_map(z, w) -> np.ndarray:
    """The reflection automorphism t_map(z, .) applied to w.

    Swaps 0 and z, is an involution in w, and maps the ball to itself.
    """
    zc, wc = np.broadcast_arrays(_coords(z), _coords(w))
    M = _swap_matrix(zc)
    den = (1.0 - herm_dot(wc, zc))[..., None]
    num = zc - np.einsum("...kl,...l->...k", M, wc)
    return num / den


def delta(z, w) -> np.ndarray:
    """(1-|z|^2)(1-|w|^2) / |1 - z.conj(w)|^2, i.e. 1 - |t_map(z,w)|^2.

    Symmetric in (z, w), valued in (0, 1], equal to 1 exactly on the
    diagonal, and invariant under simultaneous automorphisms of both slots.
    """
    zc, wc = _coords(z), _coords(w)
    num = (1.0 - sq_norm(zc)) * (1.0 - sq_norm(wc))
    return num / np.abs(1.0 - herm_dot(zc, wc)) ** 2


def t_diff(z, at) -> np.ndarray:
    """Holomorphic Jacobian of w -> t_map(z, w) at w = at, shape (..., n, n).

    Entry [k, j] is the derivative of component k along w_j.  The rational
    closed form J = (-M + outer(t_map(z, w), conj(z))) / (1 - w.conj(z))
    is exact for every w in the ball; the special values at w = 0 and
    w = z follow from it.
    """
    zc, wc = np.broadcast_arrays(_coords(z), _coords(at))
    M = _swap_matrix(zc)
    den = (1.0 - herm_dot(wc, zc))[..., None, None]
    tz = t_map(zc, wc)
    outer = tz[..., :, None] * np.conjugate(zc)[..., None, :]
    return (-M + outer) / den


def _dM_danti(z) -> np.ndarray:
    """d M_{kl} / d conj(z_j), shape (..., j, k, l)."""
    zc = _coords(z)
    n = zc.shape[-1]
    s = _s(zc)[..., None, None, None]
    eye = np.eye(n, dtype=complex)
    zj = zc[..., :, None, None]
    zk = zc[..., None, :, None]
    zbl = np.conjugate(zc)[..., None, None, :]
    d_lj = eye[:, None, :]  # delta_{lj} broadcast into (j, k, l)
    term1 = -zj * eye[None, :, :] / (2.0 * s)
    term2 = zk * d_lj / (1.0 + s)
    term3 = zk * zbl * zj / (2.0 * s * (1.0 + s) ** 2)
    return term1 + term2 + term3


def _dM_dholo(z) -> np.ndarray:
    """d M_{kl} / d z_j, shape (..., j, k, l)."""
    zc = _coords(z)
    n = zc.shape[-1]
    s = _s(zc)[..., None, None, None]
    eye = np.eye(n, dtype=complex)
    zbj = np.conjugate(zc)[..., :, None, None]
    zk = zc[..., None, :, None]
    zbl = np.conjugate(zc)[..., None, None, :]
    d_kj = np.eye(n, dtype=complex)[:, :, None]
    term1 = -zbj * eye[None, :, :] / (2.0 * s)
    term2 = d_kj * zbl / (1.0 + s)
    term3 = zk * zbl * zbj / (2.0 * s * (1.0 + s) ** 2)
    return term1 + term2 + term3


def t_diff_base_anti(z, w) -> np.ndarray:
    """d (t_map(z, w))_k / d conj(z_j) at fixed w, shape (..., j, k).

    Antiholomorphic base derivative of the reflection, evaluated exactly
    from the rational closed form.
    """
    zc, wc = np.broadcast_arrays(_coords(z), _coords(w))
    dM = _dM_danti(zc)
    dMw = np.einsum("...jkl,...l->...jk", dM, wc)
    den = (1.0 - herm_dot(wc, zc))[..., None, None]
    tz = t_map(zc, wc)
    cross = wc[..., :, None] * tz[..., None, :]
    return (-dMw + cross) / den


def t_diff_base_holo(z, w) -> np.ndarray:
    """d (t_map(z, w))_k / d z_j at fixed w, shape (..., j, k)."""
    zc, wc = np.broadcast_arrays(_coords(z), _coords(w))
    dM = _dM_dholo(zc)
    dMw = np.einsum("...jkl,...l->...jk", dM, wc)
    den = (1.0 - herm_dot(wc, zc))[..., None, None]
    n = zc.shape[-1]
    d_kj = np.eye(n, dtype=complex)
    return (d_kj - dMw) / den


def matrix_inverse(A: np.ndarray) -> np.ndarray:
    """Partial-pivot inverse with a 1-norm condition estimate guard.

    Raises ValueError with the estimate when it exceeds COND_LIMIT.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[-1]
    inv = np.linalg.solve(A, np.broadcast_to(np.eye(n, dtype=complex), A.shape).copy())
    norm1 = np.abs(A).sum(axis=-2).max(axis=-1)
    norm1_inv = np.abs(inv).sum(axis=-2).max(axis=-1)
    est = float(np.max(norm1 * norm1_inv))
    if est > COND_LIMIT:
        raise ValueError(f"matrix inverse refused: condition estimate {est:.3e} exceeds {COND_LIMIT:.1e}")
    return inv


def frame_A(z) -> np.ndarray:
    """Coframe matrix A(z) = t_diff(z, z); rows give the coframe covectors.

    A(z)^H A(z) equals bergman_metric(z), so the covectors e_k with
    coefficients A[k, :] in the coordinate differentials are orthonormal
    for the invariant metric.
    """
    zc = _coords(z)
    return t_diff(zc, zc)


def frame_A_inv(z) -> np.ndarray:
    """Inverse coframe matrix, with the condition guard of matrix_inverse."""
    return matrix_inverse(frame_A(z))


def is_hermitian(M: np.ndarray, tol: float = 1e-12) -> bool:
    M = np.asarray(M)
    return bool(np.max(np.abs(M - np.conjugate(np.swapaxes(M, -1, -2)))) <= tol)
